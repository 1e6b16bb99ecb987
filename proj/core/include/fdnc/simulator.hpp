#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fdnc/transceiver.hpp"

namespace fdnc {

// Monte Carlo sweep description. Angles and the rotation are in degrees at
// this boundary; distances in metres; spacing and array separations in
// wavelengths. The cells scheme x array_size x p_is_db x rho_dbm each
// produce one output record.
struct SweepConfig {
  std::vector<Scheme> schemes;
  std::vector<double> rho_dbm;
  std::vector<int> array_sizes;  // per entry, both users use M = N antennas
  std::vector<double> p_is_db{74.0};
  int q = 2;
  double avg_bits = 3.0;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  int workers = 1;

  // propagation model
  double carrier_ghz = 28.0;
  std::optional<double> alpha_db;  // defaults to 32.4 + 20*log10(carrier_ghz)
  double eta = 2.1;
  int paths = 20;
  int si_paths = 20;
  double noise_dbm = -94.0;
  // Intended-link path distances. The default range is calibrated so that at
  // M = N = 64, Q = 2, B = 3 the high-power error floor sits at 1e-4 for
  // 50 dB isolation and near 5e-6 for 70 dB.
  std::pair<double, double> dist_m{15.0, 25.0};
  std::pair<double, double> si_dist_m{5.0, 15.0};

  // node geometry
  double spacing = 0.5;
  double separation_h = 2.0;
  double separation_v = 0.0;
  double rotation_deg = 0.0;

  // angular sectors, degrees
  double aod_mean_deg = 105.0;
  double aod_spread_deg = 5.0;
  double aoa_mean_deg = 65.0;
  double aoa_spread_deg = 5.0;
  double si_aod_mean_deg = 20.0;
  double si_aod_spread_deg = 5.0;
  double si_aoa_mean_deg = 160.0;
  double si_aoa_spread_deg = 5.0;

  double alpha_linear() const;
  double noise_watts() const;
};

// Flat "key = value" text, '#' starts a comment, lists are comma separated.
SweepConfig parse_sweep_config(std::istream& is);
SweepConfig load_sweep_config(const std::string& path);

struct BerRecord {
  std::string scheme;
  double rho_dbm = 0.0;
  int m = 0;
  int n = 0;
  double p_is_db = 0.0;
  int q = 0;
  double avg_bits = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t bits = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;   // always bit_errors / bits (0 when no bits ran)
  double ci95 = 0.0;  // normal-approximation half width
  std::uint64_t infeasible = 0;  // trials whose beam selection had no candidate
  bool censored = false;         // fewer than 10 errors: read ber as an upper bound
};

// Runs the full grid. Records appear in scheme, array size, p_is, rho order;
// both link directions pool into one record. Output is bit-identical for any
// worker count because every trial owns stream index = trial number and
// accumulation is integral.
std::vector<BerRecord> run_sweep(const SweepConfig& cfg);

std::string csv_header();
void emit_csv(const std::vector<BerRecord>& records, std::ostream& os);
void emit_csv(const std::vector<BerRecord>& records, const std::string& path);
std::vector<BerRecord> parse_csv(std::istream& is);

// Diagnostic view of the analog beamforming stage for one drawn full-duplex
// realization (same draws as sweep trial `trial` of the fd-nc scheme).
struct BeamReport {
  std::uint64_t trial = 0;
  int m = 0;
  bool feasible = true;
  double tx_angle_1 = 0.0, rx_angle_1 = 0.0;  // user 1's beam directions
  double tx_angle_2 = 0.0, rx_angle_2 = 0.0;
  Complex h12, h21;    // effective link coefficients
  Complex h_si1, h_si2;  // effective loop-back at the first p_is_db entry
  double p_is_db = 0.0;
};

BeamReport beam_report(const SweepConfig& cfg, int m, std::uint64_t trial);

}  // namespace fdnc
