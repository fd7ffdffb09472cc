// ctoda: verification suites for the integrable structure on pairs of
// conformal mappings (Grunsky/Faber data, coordinate flows, tau function,
// Lax residuals, conformal welding, Fourier-side hierarchy).

#include <CLI11.hpp>
#include <random>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ctoda/oracle.hpp"
#include "ctoda/suite.hpp"
#include "ctoda/tau.hpp"
#include "ctoda/toda.hpp"
#include "ctoda/welding.hpp"

using namespace ctoda;

namespace {

struct GlobalOpts {
  int order = 16;
  int grid = 256;
  double eps = 1e-4;
  double tol = 1e-8;
  std::string format = "json";
  std::string out;
};

std::ostream* open_out(const GlobalOpts& g, std::ofstream& file) {
  if (g.out.empty()) return &std::cout;
  file.open(g.out);
  if (!file) throw std::runtime_error("cannot open output file: " + g.out);
  return &file;
}

struct PairSource {
  std::string pair_file;
  double a_re = 0.0, a_im = 0.0;
  double b_re = 1.0, b_im = 0.0;
  double c_re = 0.0, c_im = 0.0;
  bool oracle_set = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--pair", pair_file, "pair JSON file {f, g, m}");
    auto* a = cmd->add_option("--a", a_re, "oracle parameter a (real part)");
    cmd->add_option("--a-im", a_im, "oracle parameter a (imag part)");
    cmd->add_option("--b", b_re, "oracle parameter b (real part)");
    cmd->add_option("--b-im", b_im, "oracle parameter b (imag part)");
    cmd->add_option("--c", c_re, "oracle parameter c (real part)");
    cmd->add_option("--c-im", c_im, "oracle parameter c (imag part)");
    a->each([this](const std::string&) { oracle_set = true; });
  }

  ConformalPair load(const GlobalOpts& g) const {
    if (!pair_file.empty()) {
      std::ifstream in(pair_file);
      if (!in) throw std::runtime_error("cannot open pair file: " + pair_file);
      return pair_from_json(Json::parse(in));
    }
    MobiusParams p = mobius_params(Complex(a_re, a_im), Complex(b_re, b_im),
                                   Complex(c_re, c_im));
    return mobius_pair(p, g.order, g.grid);
  }
};

Json record_json(const std::string& check, const std::string& identity,
                 std::vector<int> idx, double eps, double residual,
                 double tol) {
  Json e;
  e["check"] = check;
  e["identity"] = identity;
  e["indices"] = idx;
  e["eps"] = eps;
  e["residual"] = residual;
  e["tol"] = tol;
  e["pass"] = residual <= tol;
  return e;
}

int finish_records(const Json& records, const GlobalOpts& g) {
  std::ofstream file;
  std::ostream* os = open_out(g, file);
  *os << records.dump(2) << "\n";
  for (const auto& r : records)
    if (r.contains("pass") && !r.at("pass").get<bool>()) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dispersionless-Toda verification toolkit for conformal pairs"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOpts g;
  app.add_option("--order", g.order, "series window radius N")->capture_default_str();
  app.add_option("--grid", g.grid, "circle grid size (power of two)")->capture_default_str();
  app.add_option("--eps", g.eps, "finite-difference step")->capture_default_str();
  app.add_option("--tol", g.tol, "tolerance for pass/fail records")->capture_default_str();
  app.add_option("--format", g.format, "json or csv")->capture_default_str();
  app.add_option("--out", g.out, "output file (default: stdout)");

  // ---- oracle ----
  auto* oracle_cmd = app.add_subcommand("oracle", "closed-form reference values");
  PairSource oracle_src;
  oracle_src.attach(oracle_cmd);
  std::string oracle_emit = "json";
  oracle_cmd->add_option("--emit", oracle_emit, "output format (json)");

  // ---- grunsky ----
  auto* grunsky_cmd = app.add_subcommand("grunsky", "Grunsky table of a pair");
  PairSource grunsky_src;
  grunsky_src.attach(grunsky_cmd);

  // ---- moments ----
  auto* moments_cmd = app.add_subcommand("moments", "t_n, v_n by quadrature");
  PairSource moments_src;
  moments_src.attach(moments_cmd);

  // ---- tau-check ----
  auto* tau_cmd = app.add_subcommand("tau-check", "tau gradient and Hessian");
  PairSource tau_src;
  tau_src.attach(tau_cmd);

  // ---- lax-check ----
  auto* lax_cmd = app.add_subcommand("lax-check", "Lax residuals");
  PairSource lax_src;
  lax_src.attach(lax_cmd);
  std::vector<int> lax_n = {1, 2, 3, -1, -2, -3};
  lax_cmd->add_option("--n", lax_n, "flow indices");
  bool lax_sweep = false;
  lax_cmd->add_flag("--sweep", lax_sweep, "emit (eps, residual) CSV halving eps");

  // ---- string-check ----
  auto* string_cmd = app.add_subcommand("string-check", "string equation residual");
  PairSource string_src;
  string_src.attach(string_cmd);

  // ---- weld ----
  auto* weld_cmd = app.add_subcommand("weld", "conformal welding of a circle map");
  std::string weld_input;
  weld_cmd->add_option("--input", weld_input, "CircleHomeo JSON")->required();
  WeldOptions wopts;
  weld_cmd->add_option("--tol", wopts.tol, "target defect")->capture_default_str();
  weld_cmd->add_option("--damping", wopts.damping, "update damping in (0,1]")
      ->capture_default_str();
  weld_cmd->add_option("--max-iters", wopts.max_iters, "iteration cap")
      ->capture_default_str();

  // ---- sigma-check ----
  auto* sigma_cmd = app.add_subcommand(
      "sigma-check", "reflection locus and harmonic moments");
  int sigma_seed = 1;
  double sigma_amp = 0.15, sigma_decay = 0.3;
  sigma_cmd->add_option("--seed", sigma_seed, "random g seed");
  sigma_cmd->add_option("--amplitude", sigma_amp, "coefficient amplitude");
  sigma_cmd->add_option("--decay", sigma_decay, "coefficient decay base");

  // ---- fourier-check ----
  auto* fourier_cmd =
      app.add_subcommand("fourier-check", "Fourier-side hierarchy checks");
  double fr_a = 0.2, fr_a_im = 0.0, fr_alpha = 0.0;
  fourier_cmd->add_option("--a", fr_a, "Mobius parameter a (real part)");
  fourier_cmd->add_option("--a-im", fr_a_im, "imag part of a");
  fourier_cmd->add_option("--alpha", fr_alpha, "rotation angle");

  // ---- suite ----
  auto* suite_cmd = app.add_subcommand("suite", "batch verification suite");
  std::string suite_cfg_path;
  suite_cmd->add_option("--config", suite_cfg_path, "SuiteConfig JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*oracle_cmd) {
      MobiusParams p = mobius_params(Complex(oracle_src.a_re, oracle_src.a_im),
                                     Complex(oracle_src.b_re, oracle_src.b_im),
                                     Complex(oracle_src.c_re, oracle_src.c_im));
      Json j;
      j["params"] = {{"a", {p.a.real(), p.a.imag()}},
                     {"b", {p.b.real(), p.b.imag()}},
                     {"c", {p.c.real(), p.c.imag()}}};
      j["moments"] = moments_to_json(mobius_moments(p, g.order));
      Complex lt = mobius_log_tau(p);
      j["log_tau"] = {lt.real(), lt.imag()};
      j["pair"] = pair_to_json(mobius_pair(p, g.order, g.grid));
      std::ofstream file;
      *open_out(g, file) << j.dump(2) << "\n";
      return 0;
    }
    if (*grunsky_cmd) {
      ConformalPair p = grunsky_src.load(g);
      GrunskyTable t = grunsky_table(p.f, p.g, std::min(g.order, 16));
      std::ofstream file;
      *open_out(g, file) << grunsky_to_json(t).dump(2) << "\n";
      return t.asymmetry <= g.tol ? 0 : 1;
    }
    if (*moments_cmd) {
      ConformalPair p = moments_src.load(g);
      MomentSet ms = moments(p, g.order);
      Json j = moments_to_json(ms);
      j["t0_mismatch"] = ms.t0_mismatch();
      std::ofstream file;
      *open_out(g, file) << j.dump(2) << "\n";
      return ms.t0_mismatch() <= 1e-11 ? 0 : 1;
    }
    if (*tau_cmd) {
      ConformalPair p = tau_src.load(g);
      Json recs = Json::array();
      for (int n = -2; n <= 2; ++n)
        recs.push_back(record_json("tau-gradient", "d(log tau)/dt_n = v_n",
                                   {n}, g.eps, check_tau_gradient(p, n, g.eps),
                                   1e-6));
      GrunskyTable k = inverse_grunsky(p, 2);
      for (auto [mi, ni] : {std::pair{0, 0}, {1, -1}, {1, 1}, {2, 0}})
        recs.push_back(record_json(
            "tau-hessian", "d2(log tau) = signed inverse-pair Grunsky",
            {mi, ni}, 1e-3, check_hessian(p, mi, ni, 1e-3, k), 1e-4));
      return finish_records(recs, g);
    }
    if (*lax_cmd) {
      ConformalPair p = lax_src.load(g);
      LaxSetup s = pairspace_lax(p.order());
      if (lax_sweep) {
        std::vector<std::pair<double, double>> pts;
        for (double e = g.eps * 4.0; e >= g.eps / 4.0; e /= 2.0)
          pts.push_back({e, lax_residual(s, p, lax_n.front(), e).max()});
        std::ofstream file;
        emit_sweep_csv(pts, *open_out(g, file));
        return 0;
      }
      Json recs = Json::array();
      for (int n : lax_n) {
        LaxResidual r = lax_residual(s, p, n, g.eps);
        recs.push_back(record_json("lax", "dL/dt_n = {B_n, L}", {n}, g.eps,
                                   r.max(), 1e-5));
      }
      return finish_records(recs, g);
    }
    if (*string_cmd) {
      ConformalPair p = string_src.load(g);
      Json recs = Json::array();
      recs.push_back(record_json("string", "{g, 1/f} = 1", {}, g.eps,
                                 string_residual(p, g.eps), 1e-6));
      return finish_records(recs, g);
    }
    if (*weld_cmd) {
      std::ifstream in(weld_input);
      if (!in) throw std::runtime_error("cannot open " + weld_input);
      CircleHomeo h = homeo_from_json(Json::parse(in));
      wopts.order = std::min(g.order, h.m() / 8);
      WeldResult r = weld(h, wopts);
      Json j;
      j["converged"] = r.converged;
      j["iters"] = r.iters;
      j["defect"] = r.defect;
      j["truncation"] = r.truncation;
      j["pair"] = pair_to_json(r.pair);
      std::ofstream file;
      *open_out(g, file) << j.dump(2) << "\n";
      return r.converged ? 0 : 1;
    }
    if (*sigma_cmd) {
      std::mt19937 rng(static_cast<unsigned>(sigma_seed));
      std::uniform_real_distribution<double> d(-1.0, 1.0);
      ComplexSeries gs(Window(-g.order, 1));
      gs.at(1) = 1.0;
      for (int k = 0; k >= -g.order; --k)
        gs.at(k) = sigma_amp * std::pow(sigma_decay, -k + 1) * Complex(d(rng), d(rng));
      ConformalPair sp = sigma_pair(gs, g.grid);
      MomentSet ms = moments(sp, g.order);
      double worst = std::abs(ms.t(0).imag());
      for (int n = 1; n <= g.order; ++n)
        worst = std::max(worst, std::abs(std::conj(ms.t(n)) + ms.t(-n)));
      MomentSet hm = harmonic_moments(gs, g.grid, g.order);
      double agree = 0.0;
      for (int n = -g.order; n <= g.order; ++n)
        agree = std::max(agree, std::abs(hm.t(n) - ms.t(n)));
      Json recs = Json::array();
      recs.push_back(record_json("sigma", "conj(t_n) = -t_{-n}, Im t_0 = 0",
                                 {sigma_seed}, 0.0, worst, 1e-10));
      recs.push_back(record_json("sigma", "harmonic moments match quadratures",
                                 {sigma_seed}, 0.0, agree, 1e-9));
      return finish_records(recs, g);
    }
    if (*fourier_cmd) {
      MobiusHomeoOracle o =
          mobius_homeo(Complex(fr_a, fr_a_im), fr_alpha, g.order, g.grid);
      CircleHomeo h = CircleHomeo::from_maps(
          g.grid, [&](Complex w) { return o.gamma(w); },
          [&](Complex w) { return o.gamma_inv(w); });
      HomeoState st = homeo_state(o.pair, h);
      MomentSet fm = fourier_moments(h, o.pair, g.order);
      Json recs = Json::array();
      double worst = 0.0;
      for (int n = -g.order; n <= g.order; ++n)
        worst = std::max(worst, std::abs(fm.t(n) - o.fourier.t(n)));
      recs.push_back(record_json("fourier", "Fourier moments match closed forms",
                                 {}, 0.0, worst, 1e-9));
      for (int n : {-1, 0, 1})
        recs.push_back(record_json("fourier", "dt_n duality (Fourier side)",
                                   {n, n}, g.eps,
                                   check_fourier_duality(st, n, n, g.eps), 1e-6));
      for (int n : {-1, 0, 1})
        recs.push_back(record_json(
            "fourier", "d(log tau)/dt_n = v_n (Fourier side)", {n}, g.eps,
            check_homeo_gradient(st, n, g.eps), 1e-5));
      return finish_records(recs, g);
    }
    if (*suite_cmd) {
      std::ifstream in(suite_cfg_path);
      if (!in) throw std::runtime_error("cannot open " + suite_cfg_path);
      SuiteConfig cfg = suite_config_from_json(Json::parse(in));
      Report rep = run_suite(cfg);
      std::ofstream file;
      std::ostream* os = open_out(g, file);
      std::string fmt = g.format.empty() ? cfg.format : g.format;
      if (fmt == "csv")
        emit_csv(rep, *os);
      else
        emit_json(rep, *os);
      std::cerr << rep.records.size() << " checks, " << rep.failures()
                << " failures, " << rep.skipped.size() << " corpus entries skipped\n";
      return rep.failures() == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
