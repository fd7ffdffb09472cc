#include "ctoda/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "ctoda/oracle.hpp"
#include "ctoda/tau.hpp"
#include "ctoda/toda.hpp"
#include "ctoda/welding.hpp"

namespace ctoda {

const std::map<std::string, double>& SuiteConfig::default_tolerances() {
  static const std::map<std::string, double> defaults = {
      {"grunsky", 1e-11},      {"faber", 1e-10},
      {"jump", 1e-8},          {"duality", 1e-6},
      {"tau-gradient", 1e-6},  {"tau-hessian", 1e-4},
      {"lax", 1e-5},           {"string", 1e-6},
      {"rh", 1e-8},            {"sigma", 1e-10},
      {"weld-roundtrip", 1e-8},{"fourier", 1e-5},
  };
  return defaults;
}

const std::vector<std::string>& SuiteConfig::all_checks() {
  static const std::vector<std::string> all = {
      "grunsky", "faber",  "jump", "duality", "tau-gradient",   "tau-hessian",
      "lax",     "string", "rh",   "sigma",   "weld-roundtrip", "fourier"};
  return all;
}

double SuiteConfig::tol(const std::string& check) const {
  auto it = tolerances.find(check);
  if (it != tolerances.end()) return it->second;
  auto dt = default_tolerances().find(check);
  if (dt == default_tolerances().end())
    throw std::invalid_argument("unknown check: " + check);
  return dt->second;
}

SuiteConfig suite_config_from_json(const Json& j) {
  SuiteConfig c;
  c.order = j.value("order", c.order);
  c.grid = j.value("grid", c.grid);
  c.fd_eps = j.value("fd_eps", c.fd_eps);
  if (j.contains("tolerances"))
    for (auto& [k, v] : j.at("tolerances").items())
      c.tolerances[k] = v.get<double>();
  if (j.contains("corpus"))
    for (const auto& e : j.at("corpus")) c.corpus.push_back(e);
  if (j.contains("checks"))
    for (const auto& e : j.at("checks")) c.checks.push_back(e.get<std::string>());
  c.format = j.value("format", c.format);
  if (c.order < 4 || c.grid < 8 * c.order)
    throw std::invalid_argument("suite config: need order >= 4, grid >= 8*order");
  for (auto& [k, v] : c.tolerances)
    if (!(v >= 0.0))
      throw std::invalid_argument("suite config: tolerances must be >= 0");
  return c;
}

Json suite_config_to_json(const SuiteConfig& c) {
  Json j;
  j["order"] = c.order;
  j["grid"] = c.grid;
  j["fd_eps"] = c.fd_eps;
  Json tols = Json::object();
  for (auto& [k, v] : c.tolerances) tols[k] = v;
  j["tolerances"] = tols;
  j["corpus"] = c.corpus;
  j["checks"] = c.checks;
  j["format"] = c.format;
  return j;
}

int Report::failures() const {
  int n = 0;
  for (const auto& r : records)
    if (!r.pass) ++n;
  return n;
}

void Report::sort_records() {
  std::stable_sort(records.begin(), records.end(),
                   [](const CheckRecord& a, const CheckRecord& b) {
                     if (a.check != b.check) return a.check < b.check;
                     if (a.target != b.target) return a.target < b.target;
                     return a.indices < b.indices;
                   });
}

namespace {

struct CorpusItem {
  std::string label;
  ConformalPair pair;
  std::map<std::string, double> tol_override;
  // set for homeomorphism entries
  bool has_homeo = false;
  std::vector<Complex> gamma, gamma_inv;
  std::vector<Complex> gamma_reference;  // the input homeo, for round-trips
  // set for sigma entries
  bool is_sigma = false;
  ComplexSeries sigma_g;
};

ComplexSeries random_exterior_series(std::mt19937& rng, int N, double amp,
                                     double decay) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ComplexSeries g(Window(-N, 1));
  g.at(1) = 1.0;
  for (int k = 0; k >= -N; --k)
    g.at(k) = amp * std::pow(decay, -k + 1) * Complex(d(rng), d(rng));
  return g;
}

CorpusItem load_entry(const Json& e, const SuiteConfig& cfg, int index) {
  CorpusItem item;
  std::string type = e.at("type").get<std::string>();
  std::ostringstream label;
  label << index << ":" << type;
  item.label = label.str();

  auto cplx = [&](const Json& v) {
    if (v.is_array()) return Complex(v.at(0).get<double>(), v.at(1).get<double>());
    return Complex(v.get<double>(), 0.0);
  };

  if (type == "oracle") {
    MobiusParams p = mobius_params(cplx(e.at("a")), cplx(e.at("b")), cplx(e.at("c")));
    item.pair = mobius_pair(p, cfg.order, cfg.grid);
  } else if (type == "pair-file") {
    std::ifstream in(e.at("path").get<std::string>());
    if (!in) throw std::runtime_error("cannot open pair file");
    Json j = Json::parse(in);
    item.pair = pair_from_json(j);
  } else if (type == "pair") {
    item.pair = pair_from_json(e.at("value"));
  } else if (type == "perturbed") {
    // random near-identity pair
    std::mt19937 rng(e.value("seed", 1));
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    double amp = e.value("amplitude", 0.05);
    double decay = e.value("decay", 0.3);
    ComplexSeries f(Window(1, cfg.order));
    f.at(1) = 1.0;
    for (int k = 2; k <= cfg.order; ++k)
      f.at(k) = amp * std::pow(decay, k - 1) * Complex(d(rng), d(rng));
    ComplexSeries g = random_exterior_series(rng, cfg.order, amp, decay);
    item.pair = normalize_pair(f, g, cfg.grid);
  } else if (type == "sigma") {
    std::mt19937 rng(e.value("seed", 1));
    double amp = e.value("amplitude", 0.15);
    double decay = e.value("decay", 0.3);
    item.sigma_g = random_exterior_series(rng, cfg.order, amp, decay);
    item.is_sigma = true;
    item.pair = sigma_pair(item.sigma_g, cfg.grid);
  } else if (type == "homeo") {
    Complex a = cplx(e.at("a"));
    double alpha = e.value("alpha", 0.0);
    MobiusHomeoOracle o = mobius_homeo(a, alpha, cfg.order, cfg.grid);
    CircleHomeo h = CircleHomeo::from_maps(
        cfg.grid, [&](Complex w) { return o.gamma(w); },
        [&](Complex w) { return o.gamma_inv(w); });
    item.pair = o.pair;
    item.has_homeo = true;
    item.gamma = h.gamma();
    item.gamma_inv = h.gamma_inv();
    item.gamma_reference = h.gamma();
  } else if (type == "homeo-perturbation") {
    std::mt19937 rng(e.value("seed", 1));
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    int modes = e.value("modes", 3);
    double amp = e.value("amplitude", 0.05) / modes;
    std::vector<std::pair<double, double>> cs;
    for (int k = 0; k < modes; ++k) cs.push_back({amp * d(rng), amp * d(rng)});
    CircleHomeo h = CircleHomeo::from_angle_perturbation(cfg.grid, cs);
    WeldResult w = weld(h, WeldOptions{.order = cfg.order});
    if (!w.converged) throw std::runtime_error("weld failed to converge");
    item.pair = w.pair;
    item.has_homeo = true;
    CircleHomeo solved = compose_welding(w.pair, 1e-5);
    item.gamma = solved.gamma();
    item.gamma_inv = solved.gamma_inv();
    item.gamma_reference = h.gamma();
  } else {
    throw std::runtime_error("unknown corpus entry type: " + type);
  }
  if (e.contains("tolerances"))
    for (auto& [k, v] : e.at("tolerances").items())
      item.tol_override[k] = v.get<double>();
  return item;
}

void add(std::vector<CheckRecord>& out, const std::string& check,
         const std::string& identity, const std::string& target,
         std::vector<int> idx, double eps, double residual, double tol) {
  out.push_back(CheckRecord{check, identity, target, std::move(idx), eps,
                            residual, tol, residual <= tol});
}

std::vector<CheckRecord> run_entry(const CorpusItem& item,
                                   const SuiteConfig& cfg,
                                   const std::vector<std::string>& checks) {
  std::vector<CheckRecord> out;
  const ConformalPair& p = item.pair;
  auto want = [&](const std::string& c) {
    return std::find(checks.begin(), checks.end(), c) != checks.end();
  };
  auto tol = [&](const std::string& c) {
    auto it = item.tol_override.find(c);
    return it != item.tol_override.end() ? it->second : cfg.tol(c);
  };
  MomentSet ms = moments(p, cfg.order);

  if (want("grunsky")) {
    GrunskyTable t = grunsky_table(p.f, p.g, std::min(cfg.order, 16));
    add(out, "grunsky", "b_{m,n} = b_{n,m}", item.label, {}, 0.0, t.asymmetry,
        tol("grunsky"));
    add(out, "grunsky", "row/column-0 routes agree", item.label, {0}, 0.0,
        t.axis_mismatch, 100.0 * tol("grunsky"));
  }
  if (want("faber")) {
    int N = std::min(cfg.order, 12);
    auto rep = verify_faber_expansions(p.f, p.g, N);
    add(out, "faber", "P_n, Q_n expansions against the Grunsky table",
        item.label, {N}, 0.0, rep.max_residual, tol("faber"));
  }
  if (want("jump")) {
    JumpResidual jr = jump_residual(p, ms);
    add(out, "jump", "1/f equals its t,v-series on the g-curve", item.label,
        {2}, 0.0, jr.rho2, tol("jump"));
    add(out, "jump", "g/f^2 equals its t,v-series on the f-curve", item.label,
        {1}, 0.0, jr.rho1, tol("jump"));
  }
  if (want("duality")) {
    for (int n = -2; n <= 2; ++n)
      for (int m = -2; m <= 2; ++m)
        add(out, "duality", "dt_m/deps_n = delta_{nm}", item.label, {n, m},
            cfg.fd_eps, check_coordinate_duality(p, n, m, cfg.fd_eps),
            tol("duality"));
  }
  if (want("tau-gradient")) {
    for (int n = -2; n <= 2; ++n)
      add(out, "tau-gradient", "d(log tau)/dt_n = v_n", item.label, {n},
          cfg.fd_eps, check_tau_gradient(p, n, cfg.fd_eps),
          tol("tau-gradient"));
  }
  if (want("tau-hessian")) {
    GrunskyTable k = inverse_grunsky(p, 2);
    for (auto [mi, ni] : {std::pair{0, 0}, {1, -1}, {1, 1}, {2, 0}, {1, 2}})
      add(out, "tau-hessian",
          "d2(log tau)/dt_m dt_n = signed Grunsky of the inverse pair",
          item.label, {mi, ni}, 1e-3, check_hessian(p, mi, ni, 1e-3, k),
          tol("tau-hessian"));
  }
  if (want("lax")) {
    LaxSetup s = pairspace_lax(cfg.order);
    for (int n : {1, 2, 3, -1, -2, -3}) {
      LaxResidual r = lax_residual(s, p, n, cfg.fd_eps);
      add(out, "lax", "dL/dt_n = {B_n, L} (L side)", item.label, {n},
          cfg.fd_eps, r.res_L, tol("lax"));
      add(out, "lax", "dLt/dt_n = {B_n, Lt} (Lt side)", item.label, {n},
          cfg.fd_eps, r.res_Ltilde, tol("lax"));
    }
  }
  if (want("string")) {
    add(out, "string", "{g, 1/f} = 1", item.label, {}, cfg.fd_eps,
        string_residual(p, cfg.fd_eps), tol("string"));
  }
  if (want("rh")) {
    RhResidual r = rh_identities(p, ms);
    add(out, "rh", "M = Mtilde on the circle", item.label, {}, 0.0, r.m_vs_mt,
        tol("rh"));
    add(out, "rh", "f Mtilde = g on the circle", item.label, {}, 0.0,
        r.factorization, tol("rh"));
  }
  if (want("sigma") && item.is_sigma) {
    double worst = std::abs(ms.t(0).imag());
    for (int n = 1; n <= cfg.order; ++n)
      worst = std::max(worst, std::abs(std::conj(ms.t(n)) + ms.t(-n)));
    add(out, "sigma", "conj(t_n) = -t_{-n}, Im t_0 = 0 on the reflection locus",
        item.label, {}, 0.0, worst, tol("sigma"));
    MomentSet hm = harmonic_moments(item.sigma_g, cfg.grid, cfg.order);
    double agree = 0.0;
    for (int n = -cfg.order; n <= cfg.order; ++n)
      agree = std::max(agree, std::abs(hm.t(n) - ms.t(n)));
    add(out, "sigma", "harmonic moments match the pair quadratures",
        item.label, {1}, 0.0, agree, 10.0 * tol("sigma"));
  }
  if (want("weld-roundtrip") && item.has_homeo) {
    WeldResult w = weld(CircleHomeo::from_samples(
                            p.m, std::vector<Complex>(item.gamma_reference)),
                        WeldOptions{.order = cfg.order});
    CircleHomeo back = compose_welding(w.pair, 1e-5);
    double worst = 0.0;
    for (int j = 0; j < p.m; ++j)
      worst = std::max(worst,
                       std::abs(back.gamma()[static_cast<size_t>(j)] -
                                item.gamma_reference[static_cast<size_t>(j)]));
    add(out, "weld-roundtrip", "compose_welding(weld(gamma)) = gamma",
        item.label, {}, 0.0, worst, tol("weld-roundtrip"));
  }
  if (want("fourier") && item.has_homeo) {
    HomeoState st{p, item.gamma, item.gamma_inv};
    GrunskyTable tbl = grunsky_table(p.f, p.g, 2);
    for (int n : {-1, 0, 1})
      add(out, "fourier", "dt_m/deps_n = delta_{nm} (Fourier side)",
          item.label, {n, n}, cfg.fd_eps,
          check_fourier_duality(st, n, n, cfg.fd_eps), 0.1 * tol("fourier"));
    for (int n : {-1, 0, 1})
      add(out, "fourier", "d(log tau)/dt_n = v_n (Fourier side)", item.label,
          {n}, cfg.fd_eps, check_homeo_gradient(st, n, cfg.fd_eps),
          tol("fourier"));
    add(out, "fourier", "Hessian matches the forward Grunsky table",
        item.label, {1, -1}, 1e-3, check_homeo_hessian(st, 1, -1, 1e-3, tbl),
        10.0 * tol("fourier"));
  }
  return out;
}

}  // namespace

Report run_suite(const SuiteConfig& cfg) {
  Report rep;
  const std::vector<std::string>& checks =
      cfg.checks.empty() ? SuiteConfig::all_checks() : cfg.checks;

  std::vector<std::pair<int, Json>> entries;
  for (size_t i = 0; i < cfg.corpus.size(); ++i)
    entries.push_back({static_cast<int>(i), cfg.corpus[i]});

  struct Outcome {
    std::vector<CheckRecord> records;
    std::string skipped_label, skipped_reason;
  };
  std::vector<std::future<Outcome>> futures;
  for (auto& [idx, e] : entries) {
    futures.push_back(std::async(std::launch::async, [&, idx, e]() {
      Outcome o;
      try {
        CorpusItem item = load_entry(e, cfg, idx);
        o.records = run_entry(item, cfg, checks);
      } catch (const std::exception& ex) {
        o.skipped_label = std::to_string(idx);
        o.skipped_reason = ex.what();
      }
      return o;
    }));
  }
  for (auto& f : futures) {
    Outcome o = f.get();
    if (!o.skipped_label.empty())
      rep.skipped.push_back({o.skipped_label, o.skipped_reason});
    for (auto& r : o.records) rep.records.push_back(std::move(r));
  }
  rep.sort_records();
  rep.config_echo = suite_config_to_json(cfg).dump();
  auto now = std::chrono::system_clock::now();
  rep.timestamp =
      std::to_string(std::chrono::duration_cast<std::chrono::seconds>(
                         now.time_since_epoch())
                         .count());
  return rep;
}

void emit_json(const Report& r, std::ostream& os) {
  Json j;
  Json recs = Json::array();
  for (const auto& rec : r.records) {
    Json e;
    e["check"] = rec.check;
    e["identity"] = rec.identity;
    e["target"] = rec.target;
    e["indices"] = rec.indices;
    e["eps"] = rec.eps;
    e["residual"] = rec.residual;
    e["tol"] = rec.tol;
    e["pass"] = rec.pass;
    recs.push_back(e);
  }
  j["records"] = recs;
  Json sk = Json::array();
  for (const auto& [entry, reason] : r.skipped)
    sk.push_back({{"entry", entry}, {"reason", reason}});
  j["skipped"] = sk;
  j["total"] = r.records.size();
  j["failures"] = r.failures();
  j["config"] = Json::parse(r.config_echo);
  j["timestamp"] = r.timestamp;
  os << j.dump(2) << "\n";
}

void emit_csv(const Report& r, std::ostream& os) {
  os << "check,identity,target,indices,eps,residual,tol,pass\n";
  for (const auto& rec : r.records) {
    std::ostringstream idx;
    for (size_t i = 0; i < rec.indices.size(); ++i) {
      if (i) idx << "|";
      idx << rec.indices[i];
    }
    os << rec.check << ",\"" << rec.identity << "\"," << rec.target << ","
       << idx.str() << "," << rec.eps << "," << rec.residual << "," << rec.tol
       << "," << (rec.pass ? 1 : 0) << "\n";
  }
}

void emit_sweep_csv(const std::vector<std::pair<double, double>>& pts,
                    std::ostream& os) {
  os << "eps,residual\n";
  for (const auto& [e, r] : pts) os << e << "," << r << "\n";
}

}  // namespace ctoda
