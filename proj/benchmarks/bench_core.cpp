#include <benchmark/benchmark.h>

#include "fdnc/beamforming.hpp"
#include "fdnc/channel.hpp"
#include "fdnc/constellation.hpp"
#include "fdnc/qam.hpp"
#include "fdnc/simulator.hpp"
#include "fdnc/transceiver.hpp"

using namespace fdnc;

namespace {

AngularConfig intended_sectors() {
  AngularConfig a;
  a.aod_mean = 105.0 * kPi / 180.0;
  a.aod_spread = 5.0 * kPi / 180.0;
  a.aoa_mean = 65.0 * kPi / 180.0;
  a.aoa_spread = 5.0 * kPi / 180.0;
  return a;
}

UlaGeometry geometry(int m) {
  UlaGeometry g;
  g.tx_antennas = m;
  g.rx_antennas = m;
  return g;
}

void BM_MapPoint(benchmark::State& state) {
  auto cfg = CubeSplitConfig::uniform(int(state.range(0)), 2);
  BitVec bits(cfg.bits_per_block(), 0);
  bits.back() = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(map_point(encode_bits(bits, cfg), cfg));
  }
}
BENCHMARK(BM_MapPoint)->Arg(2)->Arg(4);

void BM_DecodeGreedy(benchmark::State& state) {
  auto cfg = CubeSplitConfig::uniform(int(state.range(0)), 2);
  RandomStream s(1, 0);
  auto x = map_point(encode_bits(BitVec(cfg.bits_per_block(), 1), cfg), cfg).x;
  ComplexVec y = x * Complex(0.8, -0.2);
  for (int i = 0; i < y.size(); ++i) y(i) += s.complex_gaussian(0.01);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_greedy(y, cfg));
  }
}
BENCHMARK(BM_DecodeGreedy)->Arg(2)->Arg(4);

void BM_DecodeExhaustive(benchmark::State& state) {
  auto cfg = CubeSplitConfig::uniform(2, 1);
  auto x = map_point(encode_bits(BitVec{1, 0, 1}, cfg), cfg).x;
  ComplexVec y = x * Complex(0.8, -0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_ml(y, cfg));
  }
}
BENCHMARK(BM_DecodeExhaustive);

void BM_DrawIntendedChannel(benchmark::State& state) {
  RandomStream s(2, 0);
  auto g = geometry(int(state.range(0)));
  auto angles = intended_sectors();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        draw_intended(s, g, angles, {15.0, 25.0}, 2.1, db_to_linear(61.34), 20));
  }
}
BENCHMARK(BM_DrawIntendedChannel)->Arg(16)->Arg(64);

void BM_NearFieldCoupling(benchmark::State& state) {
  auto g = geometry(int(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(near_field_si(g, 74.0));
  }
}
BENCHMARK(BM_NearFieldCoupling)->Arg(16)->Arg(64);

void BM_BeamSelection(benchmark::State& state) {
  const int m = int(state.range(0));
  RandomStream s(3, 0);
  auto ch = draw_intended(s, geometry(m), intended_sectors(), {15.0, 25.0}, 2.1,
                          db_to_linear(61.34), 20);
  auto in = support_from_angles(105.0 * kPi / 180.0, 5.0 * kPi / 180.0);
  auto avoid = support_from_angles(20.0 * kPi / 180.0, 5.0 * kPi / 180.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_tx_angle(ch.phi_t, in, avoid, m, 0.5));
  }
}
BENCHMARK(BM_BeamSelection)->Arg(16)->Arg(64);

void BM_QamDemodulate(benchmark::State& state) {
  const auto& t = QamTable::get(int(state.range(0)));
  RandomStream s(4, 0);
  Complex z(s.uniform(-1.2, 1.2), s.uniform(-1.2, 1.2));
  std::vector<std::uint8_t> bits(t.bits_per_symbol);
  for (auto _ : state) {
    t.demodulate(z, bits.data());
    benchmark::DoNotOptimize(bits);
  }
}
BENCHMARK(BM_QamDemodulate)->Arg(16)->Arg(128);

// One full-duplex noncoherent block at a fixed operating point: input draws,
// both receivers, both greedy decodes. This dominates sweep runtime.
void BM_FullDuplexBlock(benchmark::State& state) {
  auto cfg = make_scheme_config(Scheme::FdNc, 2, 3.0);
  RandomStream s(5, 0);
  Complex h12(3e-4, 2e-4), h21(-2e-4, 4e-4), si(1e-6, -2e-6);
  const double rho = 1e-2, noise_var = dbm_to_watts(-94.0);
  for (auto _ : state) {
    auto draws = draw_block_inputs(s, cfg, noise_var, 0);
    benchmark::DoNotOptimize(fdnc_block(h12, h21, si, si, draws, cfg, rho));
  }
}
BENCHMARK(BM_FullDuplexBlock);

// Whole Monte Carlo trial including channel draws and beam selection.
void BM_SweepTrial(benchmark::State& state) {
  SweepConfig cfg;
  cfg.schemes = {Scheme::FdNc};
  cfg.rho_dbm = {0.0};
  cfg.array_sizes = {int(state.range(0))};
  cfg.trials = 256;
  cfg.seed = 6;
  cfg.workers = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_sweep(cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.trials);
}
BENCHMARK(BM_SweepTrial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
