// Behavioural acceptance gate for the link simulator. Each criterion prints
// one [PASS]/[FAIL] line plus the measured quantities it judged; the exit
// code is the number of failed criteria. Criteria 5-8 rerun the Monte Carlo
// studies at full trial counts and take a few minutes each.
//
// Usage: fdnc_acceptance [--criterion N]

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "fdnc/channel.hpp"
#include "fdnc/constellation.hpp"
#include "fdnc/simulator.hpp"
#include "fdnc/transceiver.hpp"

using namespace fdnc;

namespace {

int g_checks_failed = 0;

bool expect(bool ok, const char* fmt, ...) {
  if (!ok) ++g_checks_failed;
  std::printf("    %-6s ", ok ? "ok" : "BAD");
  va_list args;
  va_start(args, fmt);
  std::vfprintf(stdout, fmt, args);
  va_end(args);
  std::printf("\n");
  return ok;
}

BitVec bits_of(std::uint64_t value, int nbits) {
  BitVec out(nbits);
  for (int i = 0; i < nbits; ++i) out[i] = (value >> (nbits - 1 - i)) & 1u;
  return out;
}

SweepConfig base_sweep() {
  SweepConfig cfg;
  cfg.workers = 1;
  return cfg;
}

const BerRecord* find_record(const std::vector<BerRecord>& recs, const std::string& scheme,
                             double rho, int m, double p_is) {
  for (const auto& r : recs)
    if (r.scheme == scheme && r.rho_dbm == rho && r.m == m && r.p_is_db == p_is) return &r;
  return nullptr;
}

// Transmit power (dBm) where a scheme's error-rate curve crosses `target`,
// by linear interpolation of log10(BER) between adjacent grid points.
double crossing_dbm(const std::vector<BerRecord>& recs, const std::string& scheme,
                    double target) {
  std::vector<const BerRecord*> curve;
  for (const auto& r : recs)
    if (r.scheme == scheme) curve.push_back(&r);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    double a = curve[i - 1]->ber, b = curve[i]->ber;
    if (a >= target && b < target && b > 0.0) {
      double la = std::log10(a), lb = std::log10(b), lt = std::log10(target);
      return curve[i - 1]->rho_dbm +
             (curve[i]->rho_dbm - curve[i - 1]->rho_dbm) * (lt - la) / (lb - la);
    }
  }
  return std::nan("");
}

// ---------------------------------------------------------------------------

bool criterion1_reference_mapping_table() {
  // The canonical 8-point alphabet (two-symbol blocks, one bit per
  // coordinate), checked against the published worked example to +-0.01.
  CubeSplitConfig cfg(2, {1, 1});
  const double W = 0.48, T = 0.33, A = 1.28, S = 0.43, tol = 0.01;
  struct Row {
    double wr, wi, x0r, x0i, x1r, x1i;
  };
  const Row rows[8] = {
      {-W, -W, A, 0, -S, -S}, {-W, +W, A, 0, -S, +S},
      {+W, -W, A, 0, +S, -S}, {+W, +W, A, 0, +S, +S},
      {-W, -W, -S, -S, A, 0}, {-W, +W, -S, +S, A, 0},
      {+W, -W, +S, -S, A, 0}, {+W, +W, +S, +S, A, 0},
  };
  double worst = 0.0;
  bool all = true;
  for (int v = 0; v < 8; ++v) {
    auto cc = encode_bits(bits_of(v, 3), cfg);
    Complex w(inverse_normal_cdf(cc.coords[0]) / std::sqrt(2.0),
              inverse_normal_cdf(cc.coords[1]) / std::sqrt(2.0));
    double s = std::norm(w);
    Complex t = w * (std::sqrt((1.0 - std::exp(-s)) / (1.0 + std::exp(-s))) / std::sqrt(s));
    auto x = map_point(cc, cfg).x;
    const Row& r = rows[v];
    double d = std::abs(w.real() - r.wr);
    d = std::max(d, std::abs(w.imag() - r.wi));
    d = std::max(d, std::abs(t.real() - std::copysign(T, r.wr)));
    d = std::max(d, std::abs(t.imag() - std::copysign(T, r.wi)));
    d = std::max(d, std::abs(x(0).real() - r.x0r));
    d = std::max(d, std::abs(x(0).imag() - r.x0i));
    d = std::max(d, std::abs(x(1).real() - r.x1r));
    d = std::max(d, std::abs(x(1).imag() - r.x1i));
    worst = std::max(worst, d);
    all = all && d <= tol;
  }
  expect(all, "all 8 rows within +-%.2f of the reference (worst deviation %.4f)", tol, worst);
  return all;
}

bool criterion2_bijectivity_and_scale_invariance() {
  bool ok = true;
  for (int q : {2, 4}) {
    for (int bits : {1, 2}) {
      auto cfg = CubeSplitConfig::uniform(q, bits);
      std::uint64_t mismatches = 0;
      for (std::uint64_t v = 0; v < cfg.size(); ++v) {
        BitVec tx = bits_of(v, cfg.bits_per_block());
        auto cc = encode_bits(tx, cfg);
        if (bits_from_coordinates(demap_point(map_point(cc, cfg).x, cfg), cfg) != tx)
          ++mismatches;
      }
      ok &= expect(mismatches == 0, "q=%d bits=%d: demap(map(.)) identity over %llu points (%llu mismatches)",
                   q, bits, (unsigned long long)cfg.size(), (unsigned long long)mismatches);
    }
  }
  RandomStream s(20001, 0);
  std::uint64_t bad = 0;
  const int cases_per_cfg = 2500;
  for (int q : {2, 4}) {
    for (int bits : {1, 2}) {
      auto cfg = CubeSplitConfig::uniform(q, bits);
      for (int it = 0; it < cases_per_cfg; ++it) {
        std::uint64_t v = std::uint64_t(s.uniform01() * double(cfg.size()));
        BitVec tx = bits_of(v, cfg.bits_per_block());
        auto x = map_point(encode_bits(tx, cfg), cfg).x;
        Complex c = std::polar(std::pow(10.0, s.uniform(-3.0, 3.0)), s.uniform(0.0, 2.0 * kPi));
        if (decode_greedy(x * c, cfg) != tx) ++bad;
      }
    }
  }
  ok &= expect(bad == 0, "greedy decisions unchanged by complex scaling in %d/%d cases",
               4 * cases_per_cfg - int(bad), 4 * cases_per_cfg);
  return ok;
}

bool criterion3_channel_identities() {
  bool ok = true;
  RandomStream s(30001, 0);
  UlaGeometry g;
  g.tx_antennas = 16;
  g.rx_antennas = 16;
  AngularConfig angles;
  angles.aod_mean = 105.0 * kPi / 180.0;
  angles.aod_spread = 5.0 * kPi / 180.0;
  angles.aoa_mean = 65.0 * kPi / 180.0;
  angles.aoa_spread = 5.0 * kPi / 180.0;

  double worst_sum = 0.0;
  for (int it = 0; it < 20; ++it) {
    auto ch = draw_intended(s, g, angles, {15.0, 25.0}, 2.1, db_to_linear(61.34), 20);
    ComplexMat sum = ComplexMat::Zero(16, 16);
    for (int l = 0; l < ch.params.paths(); ++l)
      sum += ch.path_gain(l) * steer_rx(ch.params.aoa[l], 16, g.spacing) *
             steer_tx(ch.params.aod[l], 16, g.spacing).transpose();
    worst_sum = std::max(worst_sum, (ch.matrix() - sum).norm() / sum.norm());
  }
  ok &= expect(worst_sum < 1e-10, "factored channel equals the path sum (worst rel. %.2e)", worst_sum);

  double worst_norm = 0.0;
  for (double p : {0.0, 50.0, 74.0}) {
    ComplexMat h = near_field_si(g, p);
    worst_norm = std::max(worst_norm, std::abs(h.squaredNorm() * std::pow(10.0, p / 10.0) - 1.0));
  }
  ok &= expect(worst_norm < 1e-12, "loop-back normalization ||H||_F^2 = 10^(-P/10) (worst rel. %.2e)",
               worst_norm);

  double worst_steer = 0.0;
  for (int n : {1, 16, 64})
    for (double ang : {0.3, 1.1, 2.8}) {
      worst_steer = std::max(worst_steer, std::abs(steer_tx(ang, n, 0.5).squaredNorm() - n) / n);
      worst_steer = std::max(worst_steer, std::abs(steer_rx(ang, n, 0.5).squaredNorm() - n) / n);
    }
  ok &= expect(worst_steer < 1e-12, "steering vector norms exact (worst rel. %.2e)", worst_steer);
  return ok;
}

bool criterion4_single_antenna_floor() {
  auto cfg = base_sweep();
  cfg.schemes = {Scheme::FdNc};
  cfg.rho_dbm = {20.0, 40.0};
  cfg.array_sizes = {1};
  cfg.trials = 10000;
  cfg.seed = 40001;
  auto recs = run_sweep(cfg);
  bool ok = true;
  for (const auto& r : recs)
    ok &= expect(r.ber > 0.45 && r.ber < 0.55,
                 "single-antenna error rate pinned at one half: %.4f at %g dBm", r.ber, r.rho_dbm);
  return ok;
}

bool criterion5_scheme_ordering() {
  auto cfg = base_sweep();
  cfg.schemes = {Scheme::FdNc, Scheme::HdNc, Scheme::HdCoherent};
  cfg.rho_dbm = {-10.0, -5.0, 0.0};
  cfg.array_sizes = {16, 64};
  cfg.trials = 100000;
  cfg.seed = 50001;
  auto recs = run_sweep(cfg);
  bool ok = true;
  for (int m : {16, 64}) {
    for (double rho : cfg.rho_dbm) {
      const auto* fd = find_record(recs, "fd-nc", rho, m, 74.0);
      const auto* hn = find_record(recs, "hd-nc", rho, m, 74.0);
      const auto* hc = find_record(recs, "hd-coherent", rho, m, 74.0);
      if (!fd || !hn || !hc) return expect(false, "missing record in sweep output");
      bool sep1 = hn->ber - fd->ber > fd->ci95 + hn->ci95;
      bool sep2 = hc->ber - hn->ber > hn->ci95 + hc->ci95;
      ok &= expect(sep1 && sep2,
                   "M=%d rho=%+g dBm: %.3e < %.3e < %.3e with confidence separation", m, rho,
                   fd->ber, hn->ber, hc->ber);
    }
  }
  return ok;
}

bool criterion6_error_floor_vs_isolation() {
  auto cfg = base_sweep();
  cfg.schemes = {Scheme::FdNc};
  cfg.rho_dbm = {40.0};  // deep in the interference-limited regime
  cfg.array_sizes = {64};
  cfg.p_is_db = {50.0, 60.0, 70.0};
  cfg.trials = 1000000;
  cfg.seed = 60001;
  auto recs = run_sweep(cfg);
  const auto* f50 = find_record(recs, "fd-nc", 40.0, 64, 50.0);
  const auto* f60 = find_record(recs, "fd-nc", 40.0, 64, 60.0);
  const auto* f70 = find_record(recs, "fd-nc", 40.0, 64, 70.0);
  if (!f50 || !f60 || !f70) return expect(false, "missing record in sweep output");
  bool ok = expect(f50->ber > f60->ber && f60->ber > f70->ber,
                   "floor decreases with isolation: %.3e > %.3e > %.3e", f50->ber, f60->ber,
                   f70->ber);
  ok &= expect(f50->ber <= 3e-4 && f50->ber >= 1e-4 / 3.0,
               "50 dB isolation floor %.3e within 3x of 1e-4", f50->ber);
  return ok;
}

bool criterion7_duplexing_gap_two_symbol_blocks() {
  const double target = 1e-3;
  bool ok = true;
  double gap[2] = {0.0, 0.0};
  const double expected[2] = {7.6, 13.5};
  for (int i = 0; i < 2; ++i) {
    auto cfg = base_sweep();
    cfg.schemes = {Scheme::FdNc, Scheme::HdNc};
    cfg.array_sizes = {64};
    cfg.trials = 1000000;
    cfg.seed = 70001 + i;
    cfg.avg_bits = i == 0 ? 3.0 : 5.0;
    if (i == 0)
      cfg.rho_dbm = {0, 2, 4, 6, 8, 10, 12, 14};
    else
      cfg.rho_dbm = {6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26};
    auto recs = run_sweep(cfg);
    double fd = crossing_dbm(recs, "fd-nc", target);
    double hd = crossing_dbm(recs, "hd-nc", target);
    gap[i] = hd - fd;
    bool finite = std::isfinite(fd) && std::isfinite(hd);
    ok &= expect(finite && gap[i] > 0.0,
                 "B=%g: full duplex reaches BER %.0e at %.2f dBm, half duplex at %.2f dBm",
                 cfg.avg_bits, target, fd, hd);
    ok &= expect(finite && std::abs(gap[i] - expected[i]) <= 2.5,
                 "B=%g: duplexing gap %.2f dB within +-2.5 of %.1f", cfg.avg_bits, gap[i],
                 expected[i]);
  }
  ok &= expect(gap[1] > gap[0], "gap grows with rate: %.2f dB -> %.2f dB", gap[0], gap[1]);
  return ok;
}

bool criterion8_noncoherent_gap_four_symbol_blocks() {
  const double target = 1e-3;
  bool ok = true;
  const double expected[2] = {2.8, 5.8};
  for (int i = 0; i < 2; ++i) {
    auto cfg = base_sweep();
    cfg.schemes = {Scheme::FdNc, Scheme::FdCoherent};
    cfg.array_sizes = {64};
    cfg.q = 4;
    cfg.avg_bits = i == 0 ? 8.0 : 14.0;
    cfg.trials = 400000;
    cfg.seed = 80001 + i;
    if (i == 0)
      cfg.rho_dbm = {-2, 0, 2, 4, 6, 8, 10, 12};
    else
      cfg.rho_dbm = {4, 6, 8, 10, 12, 14, 16, 18, 20};
    auto recs = run_sweep(cfg);
    std::uint64_t inversions = 0;
    for (double rho : cfg.rho_dbm) {
      const auto* fd = find_record(recs, "fd-nc", rho, 64, 74.0);
      const auto* co = find_record(recs, "fd-coherent", rho, 64, 74.0);
      if (fd && co && !fd->censored && !co->censored && fd->ber >= co->ber) ++inversions;
    }
    ok &= expect(inversions == 0, "B=%g: noncoherent stays below coherent across the grid",
                 cfg.avg_bits);
    double fd = crossing_dbm(recs, "fd-nc", target);
    double co = crossing_dbm(recs, "fd-coherent", target);
    double gap = co - fd;
    ok &= expect(std::isfinite(fd) && std::isfinite(co) && std::abs(gap - expected[i]) <= 2.0,
                 "B=%g: coherent penalty %.2f dB within +-2 of %.1f (crossings %.2f / %.2f dBm)",
                 cfg.avg_bits, gap, expected[i], fd, co);
  }
  return ok;
}

bool criterion9_worker_reproducibility() {
  auto cfg = base_sweep();
  cfg.schemes = {Scheme::FdNc, Scheme::HdNc};
  cfg.rho_dbm = {0.0, 10.0};
  cfg.array_sizes = {16};
  cfg.trials = 30000;
  cfg.seed = 90001;
  std::string csv[3];
  const int workers[3] = {1, 4, 16};
  for (int i = 0; i < 3; ++i) {
    cfg.workers = workers[i];
    std::ostringstream os;
    emit_csv(run_sweep(cfg), os);
    csv[i] = os.str();
  }
  bool ok = expect(csv[0] == csv[1] && csv[1] == csv[2],
                   "CSV output byte-identical for 1, 4 and 16 workers (%zu bytes)",
                   csv[0].size());
  return ok;
}

bool criterion10_cross_checks() {
  bool ok = true;
  auto cfg = CubeSplitConfig::uniform(2, 1);
  RandomStream s(100001, 0);
  int clean_mismatch = 0, noisy_agree = 0;
  const int n = 10000;
  for (int it = 0; it < n; ++it) {
    std::uint64_t v = std::uint64_t(s.uniform01() * 8.0);
    BitVec tx = bits_of(v, 3);
    auto x = map_point(encode_bits(tx, cfg), cfg).x;
    Complex c = std::polar(s.uniform(0.5, 2.0), s.uniform(0.0, 2.0 * kPi));
    ComplexVec yc = x * c;
    if (decode_greedy(yc, cfg) != decode_ml(yc, cfg)) ++clean_mismatch;
    ComplexVec yn = x;  // unit per-symbol signal power; 20 dB per-symbol SNR
    for (int k = 0; k < 2; ++k) yn(k) += s.complex_gaussian(0.01);
    if (decode_greedy(yn, cfg) == decode_ml(yn, cfg)) ++noisy_agree;
  }
  ok &= expect(clean_mismatch == 0, "greedy equals exhaustive decoding on %d noise-free blocks", n);
  ok &= expect(noisy_agree >= n * 99 / 100,
               "greedy matches exhaustive decoding on %.2f%% of blocks at 20 dB SNR",
               100.0 * noisy_agree / n);

  // small-scale gain normalization E|beta|^2 = 1/L
  UlaGeometry g;
  g.tx_antennas = 4;
  g.rx_antennas = 4;
  AngularConfig angles;
  angles.aod_mean = 105.0 * kPi / 180.0;
  angles.aod_spread = 5.0 * kPi / 180.0;
  angles.aoa_mean = 65.0 * kPi / 180.0;
  angles.aoa_spread = 5.0 * kPi / 180.0;
  const int draws = 2000, L = 20;
  double acc = 0.0;
  for (int i = 0; i < draws; ++i) {
    auto ch = draw_intended(s, g, angles, {15.0, 25.0}, 2.1, db_to_linear(61.34), L);
    for (int l = 0; l < L; ++l) acc += std::norm(ch.params.gain[l]);
  }
  double ratio = acc / (draws * L) * L;
  ok &= expect(std::abs(ratio - 1.0) < 0.02, "mean path power L*E|beta|^2 = %.4f (target 1 +- 0.02)",
               ratio);

  // combined-noise calibration through the block input draws
  auto sch = make_scheme_config(Scheme::FdNc, 2, 3.0);
  const double noise_var = dbm_to_watts(-94.0);
  double pw = 0.0;
  std::uint64_t count = 0;
  for (int it = 0; it < 10000; ++it) {
    auto d = draw_block_inputs(s, sch, noise_var, 0);
    for (int u = 0; u < 2; ++u) {
      pw += d.noise[u].squaredNorm();
      count += d.noise[u].size();
    }
  }
  double nratio = pw / (double(count) * noise_var);
  ok &= expect(std::abs(nratio - 1.0) < 0.02,
               "combiner noise variance ratio %.4f (target 1 +- 0.02)", nratio);
  return ok;
}

struct Criterion {
  int number;
  const char* title;
  bool (*fn)();
};

const Criterion kCriteria[] = {
    {1, "reference mapping table", criterion1_reference_mapping_table},
    {2, "mapping bijectivity and scale invariance", criterion2_bijectivity_and_scale_invariance},
    {3, "channel structural identities", criterion3_channel_identities},
    {4, "single antenna loop-back floor", criterion4_single_antenna_floor},
    {5, "scheme ordering at moderate power", criterion5_scheme_ordering},
    {6, "error floor versus antenna isolation", criterion6_error_floor_vs_isolation},
    {7, "rate matched duplexing gap, two-symbol blocks", criterion7_duplexing_gap_two_symbol_blocks},
    {8, "noncoherent versus coherent gap, four-symbol blocks",
     criterion8_noncoherent_gap_four_symbol_blocks},
    {9, "bit reproducibility across worker counts", criterion9_worker_reproducibility},
    {10, "decoder and statistics cross-checks", criterion10_cross_checks},
};

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (selected < 0 || selected > 10) {
    std::fprintf(stderr, "error: criterion number must be 1..10\n");
    return 2;
  }
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (selected && c.number != selected) continue;
    std::printf("criterion %d: %s\n", c.number, c.title);
    std::fflush(stdout);
    bool pass = c.fn();
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", c.number, c.title);
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  return failures;
}
