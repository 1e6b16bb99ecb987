#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include "fdnc/simulator.hpp"

using namespace fdnc;

namespace {

SweepConfig tiny_config() {
  std::istringstream in(
      "schemes = fd-nc, hd-coherent\n"
      "rho_dbm = 0, 10\n"
      "array_size = 16\n"
      "trials = 400\n"
      "seed = 5\n");
  return parse_sweep_config(in);
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("config text parsing") {
  std::istringstream in(
      "# comment line\n"
      "schemes = fd-nc, hd-nc   # trailing comment\n"
      "rho_dbm = -10, -5, 0\n"
      "array_size = 16, 64\n"
      "p_is_db = 50, 74\n"
      "q = 4\n"
      "avg_bits = 8\n"
      "trials = 1234\n"
      "seed = 99\n"
      "workers = 3\n"
      "noise_dbm = -90\n"
      "dist_m = 10, 30\n"
      "aod_mean_deg = 100\n");
  auto cfg = parse_sweep_config(in);
  REQUIRE(cfg.schemes.size() == 2);
  CHECK(cfg.schemes[0] == Scheme::FdNc);
  CHECK(cfg.schemes[1] == Scheme::HdNc);
  CHECK(cfg.rho_dbm == std::vector<double>{-10.0, -5.0, 0.0});
  CHECK(cfg.array_sizes == std::vector<int>{16, 64});
  CHECK(cfg.p_is_db == std::vector<double>{50.0, 74.0});
  CHECK(cfg.q == 4);
  CHECK(cfg.avg_bits == 8.0);
  CHECK(cfg.trials == 1234);
  CHECK(cfg.seed == 99);
  CHECK(cfg.workers == 3);
  CHECK(cfg.noise_dbm == -90.0);
  CHECK(cfg.dist_m.first == 10.0);
  CHECK(cfg.dist_m.second == 30.0);
  CHECK(cfg.aod_mean_deg == 100.0);
}

TEST_CASE("config defaults mirror the reference setup") {
  auto cfg = tiny_config();
  CHECK(cfg.p_is_db == std::vector<double>{74.0});
  CHECK(cfg.q == 2);
  CHECK(cfg.avg_bits == 3.0);
  CHECK(cfg.carrier_ghz == 28.0);
  CHECK(cfg.eta == 2.1);
  CHECK(cfg.paths == 20);
  CHECK(cfg.si_paths == 20);
  CHECK(cfg.noise_dbm == -94.0);
  CHECK(cfg.dist_m.first == 15.0);
  CHECK(cfg.dist_m.second == 25.0);
  CHECK(cfg.si_dist_m.first == 5.0);
  CHECK(cfg.si_dist_m.second == 15.0);
  CHECK(cfg.spacing == 0.5);
  CHECK(cfg.separation_h == 2.0);
  CHECK(cfg.separation_v == 0.0);
  CHECK(cfg.aod_mean_deg == 105.0);
  CHECK(cfg.aoa_mean_deg == 65.0);
  CHECK(cfg.si_aod_mean_deg == 20.0);
  CHECK(cfg.si_aoa_mean_deg == 160.0);
  // reference loss defaults to the free-space anchor at the carrier
  CHECK(linear_to_db(cfg.alpha_linear()) == doctest::Approx(61.34).epsilon(1e-3));
  CHECK(cfg.noise_watts() == doctest::Approx(3.98107170553e-13));
}

TEST_CASE("config rejects malformed input") {
  {
    std::istringstream in("schemes = fd-nc\nrho_dbm = 0\narray_size = 8\n");
    CHECK_THROWS_WITH_AS((void)parse_sweep_config(in),
                         doctest::Contains("trials"), std::invalid_argument);
  }
  {
    std::istringstream in("bogus_key = 1\n");
    try {
      (void)parse_sweep_config(in);
      FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
      CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
  }
  {
    std::istringstream in("schemes = fd-nc\nrho_dbm = zero\narray_size = 8\ntrials = 1\n");
    CHECK_THROWS_AS((void)parse_sweep_config(in), std::invalid_argument);
  }
  {
    std::istringstream in("schemes =\nrho_dbm = 0\narray_size = 8\ntrials = 1\n");
    CHECK_THROWS_AS((void)parse_sweep_config(in), std::invalid_argument);
  }
}

TEST_CASE("worker count does not change results") {
  auto cfg = tiny_config();
  cfg.workers = 1;
  auto one = run_sweep(cfg);
  cfg.workers = 3;
  auto three = run_sweep(cfg);
  REQUIRE(one.size() == three.size());
  std::ostringstream a, b;
  emit_csv(one, a);
  emit_csv(three, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("record grid order and accounting") {
  auto cfg = tiny_config();
  auto recs = run_sweep(cfg);
  REQUIRE(recs.size() == 4);  // 2 schemes x 1 size x 1 isolation x 2 powers
  CHECK(recs[0].scheme == "fd-nc");
  CHECK(recs[0].rho_dbm == 0.0);
  CHECK(recs[1].rho_dbm == 10.0);
  CHECK(recs[2].scheme == "hd-coherent");
  for (const auto& r : recs) {
    CHECK(r.m == 16);
    CHECK(r.n == 16);
    CHECK(r.q == 2);
    CHECK(r.trials == 400);
    CHECK(r.infeasible == 0);
    CHECK(r.bits > 0);
    CHECK(r.ber == doctest::Approx(double(r.bit_errors) / double(r.bits)));
    CHECK(r.censored == (r.bit_errors < 10));
  }
  // full duplex carries both directions every block; half duplex alternates
  CHECK(recs[0].bits == 400 * 6);
  CHECK(recs[2].bits == 400 * 6);
}

TEST_CASE("isolation sweep leaves half duplex untouched") {
  std::istringstream in(
      "schemes = hd-nc\n"
      "rho_dbm = 5\n"
      "array_size = 16\n"
      "p_is_db = 40, 74, 120\n"
      "trials = 300\n"
      "seed = 8\n");
  auto recs = run_sweep(parse_sweep_config(in));
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].bit_errors == recs[1].bit_errors);
  CHECK(recs[1].bit_errors == recs[2].bit_errors);
  CHECK(recs[0].bits == recs[1].bits);
}

TEST_CASE("csv emit parse round trip is byte stable") {
  auto recs = run_sweep(tiny_config());
  std::ostringstream first;
  emit_csv(recs, first);
  std::istringstream back(first.str());
  auto parsed = parse_csv(back);
  REQUIRE(parsed.size() == recs.size());
  std::ostringstream second;
  emit_csv(parsed, second);
  CHECK(first.str() == second.str());
  CHECK(first.str().rfind(csv_header(), 0) == 0);

  std::istringstream bad("not,a,header\n");
  CHECK_THROWS_AS((void)parse_csv(bad), std::runtime_error);
}

TEST_CASE("impossible beam geometry counts as infeasible") {
  // SI sector blankets the intended one: no beam direction survives.
  std::istringstream in(
      "schemes = fd-nc\n"
      "rho_dbm = 0\n"
      "array_size = 16\n"
      "trials = 50\n"
      "seed = 3\n"
      "si_aod_mean_deg = 105\n"
      "si_aod_spread_deg = 40\n");
  auto recs = run_sweep(parse_sweep_config(in));
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].infeasible == 50);
  CHECK(recs[0].bits == 0);
  CHECK(recs[0].ber == 0.0);
}

TEST_CASE("beam diagnostics replay sweep draws") {
  auto cfg = tiny_config();
  auto r7 = beam_report(cfg, 16, 7);
  CHECK(r7.trial == 7);
  CHECK(r7.m == 16);
  CHECK(r7.feasible);
  CHECK(r7.p_is_db == 74.0);
  // directions come from the 16-point codebook
  for (double v : {r7.tx_angle_1, r7.rx_angle_1, r7.tx_angle_2, r7.rx_angle_2}) {
    double idx = (v + 1.0) * 16.0 / 2.0 + 0.5;  // = m in -1 + (2m-1)/16
    CHECK(idx == doctest::Approx(std::round(idx)).epsilon(1e-12));
  }
  CHECK(std::abs(r7.h12) > 0.0);
  CHECK(std::abs(r7.h_si1) > 0.0);
  // deterministic replay
  auto again = beam_report(cfg, 16, 7);
  CHECK(again.h12 == r7.h12);
  CHECK(again.h_si2 == r7.h_si2);
}

}  // TEST_SUITE
