#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ctoda/oracle.hpp"
#include "ctoda/suite.hpp"
#include "ctoda/toda.hpp"
#include "ctoda/welding.hpp"

using namespace ctoda;

TEST_CASE("series json round-trip") {
  ComplexSeries s(Window(-3, 5));
  for (int k = -3; k <= 5; ++k)
    s.at(k) = Complex(std::sin(1.7 * k) * 1e-3, std::cos(0.3 * k));
  ComplexSeries back = series_from_json(series_to_json(s));
  CHECK((back - s).max_abs() == 0.0);  // exact round-trip of doubles
  CHECK(back.lo() == -3);
  CHECK(back.hi() == 5);
}

TEST_CASE("pair, moments, grunsky, homeo json round-trips") {
  ConformalPair p = mobius_pair(mobius_params(0.3, 1.2, 0.24), 12, 128);
  ConformalPair pb = pair_from_json(pair_to_json(p));
  CHECK((pb.f - p.f).max_abs() == 0.0);
  CHECK((pb.g - p.g).max_abs() == 0.0);
  CHECK(pb.m == p.m);

  MomentSet ms = moments(p, 8);
  MomentSet mb = moments_from_json(moments_to_json(ms));
  for (int n = -8; n <= 8; ++n) {
    CHECK(std::abs(mb.t(n) - ms.t(n)) == 0.0);
    CHECK(std::abs(mb.v(n) - ms.v(n)) == 0.0);
  }
  CHECK(std::abs(mb.t0_alt - ms.t0_alt) == 0.0);

  GrunskyTable t = grunsky_table(p.f, p.g, 6);
  GrunskyTable tb = grunsky_from_json(grunsky_to_json(t));
  double worst = 0.0;
  for (int mi = -6; mi <= 6; ++mi)
    for (int ni = -6; ni <= 6; ++ni)
      worst = std::max(worst, std::abs(tb.b(mi, ni) - t.b(mi, ni)));
  CHECK(worst == 0.0);  // stored half, symmetric expansion

  MobiusHomeoOracle o = mobius_homeo(Complex(0.2), 0.1, 12, 128);
  CircleHomeo h = CircleHomeo::from_maps(
      128, [&](Complex w) { return o.gamma(w); },
      [&](Complex w) { return o.gamma_inv(w); });
  CircleHomeo hb = homeo_from_json(homeo_to_json(h));
  double g_worst = 0.0, inv_worst = 0.0;
  for (int j = 0; j < 128; ++j) {
    g_worst = std::max(g_worst, std::abs(hb.gamma()[static_cast<size_t>(j)] -
                                         h.gamma()[static_cast<size_t>(j)]));
    // gamma^{-1} is *recomputed* on load; spectral interpolation accuracy
    inv_worst = std::max(inv_worst,
                         std::abs(hb.gamma_inv()[static_cast<size_t>(j)] -
                                  h.gamma_inv()[static_cast<size_t>(j)]));
  }
  CHECK(g_worst < 1e-15);  // samples are re-unitarized on load
  CHECK(inv_worst < 1e-12);
}

namespace {

SuiteConfig small_config() {
  SuiteConfig cfg;
  cfg.order = 16;
  cfg.grid = 256;
  cfg.corpus.push_back(Json{{"type", "oracle"}, {"a", 0.2}, {"b", 1.1}, {"c", 0.1}});
  cfg.checks = {"grunsky", "string", "duality"};
  return cfg;
}

std::string dump_without_timestamp(const Report& r) {
  std::ostringstream os;
  emit_json(r, os);
  Json j = Json::parse(os.str());
  j.erase("timestamp");
  return j.dump();
}

}  // namespace

TEST_CASE("suite: determinism modulo the timestamp") {
  SuiteConfig cfg = small_config();
  Report a = run_suite(cfg);
  Report b = run_suite(cfg);
  CHECK(a.failures() == 0);
  CHECK(dump_without_timestamp(a) == dump_without_timestamp(b));
}

TEST_CASE("suite: exit-code contract and the forced-failure path") {
  SuiteConfig cfg = small_config();
  Report ok = run_suite(cfg);
  CHECK(ok.failures() == 0);

  // zero tolerances force every record to fail
  for (const auto& c : SuiteConfig::all_checks()) cfg.tolerances[c] = 0.0;
  Report bad = run_suite(cfg);
  CHECK(bad.failures() == static_cast<int>(bad.records.size()));
  CHECK(bad.failures() > 0);
}

TEST_CASE("suite: malformed corpus entries are skipped with a reason") {
  SuiteConfig cfg = small_config();
  cfg.corpus.push_back(Json{{"type", "no-such-thing"}});
  cfg.corpus.push_back(Json{{"type", "oracle"}, {"a", 2.0}, {"b", 1.0}, {"c", 0.0}});
  Report r = run_suite(cfg);
  CHECK(r.skipped.size() == 2);
  CHECK(r.failures() == 0);
}

TEST_CASE("csv emission: fixed header, empty report") {
  Report empty;
  std::ostringstream os;
  emit_csv(empty, os);
  CHECK(os.str() == "check,identity,target,indices,eps,residual,tol,pass\n");
}

TEST_CASE("config json round-trip") {
  SuiteConfig cfg = small_config();
  cfg.tolerances["string"] = 1e-7;
  SuiteConfig back = suite_config_from_json(suite_config_to_json(cfg));
  CHECK(back.order == cfg.order);
  CHECK(back.grid == cfg.grid);
  CHECK(back.tol("string") == 1e-7);
  CHECK(back.checks == cfg.checks);
  CHECK(back.corpus.size() == cfg.corpus.size());

  CHECK_THROWS(suite_config_from_json(Json{{"order", 64}, {"grid", 128}}));
}

TEST_CASE("eps sweep csv shows second-order Lax decay") {
  ConformalPair p = mobius_pair(mobius_params(0.3, 1.2, 0.24), 16, 256);
  LaxSetup s = pairspace_lax(16);
  std::vector<std::pair<double, double>> pts;
  for (double e = 4e-4; e >= 1e-4; e /= 2.0)
    pts.push_back({e, lax_residual(s, p, 1, e).max()});
  std::ostringstream os;
  emit_sweep_csv(pts, os);
  CHECK(os.str().substr(0, 13) == "eps,residual\n");
  // slope ~ 2 in log-log between the first and last point
  double slope = std::log(pts.front().second / pts.back().second) /
                 std::log(pts.front().first / pts.back().first);
  CHECK(slope > 1.7);
  CHECK(slope < 2.3);
}
