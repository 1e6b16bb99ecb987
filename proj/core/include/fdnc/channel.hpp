#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "fdnc/mathcore.hpp"

namespace fdnc {

// Uniform linear arrays at both ends plus the mounting geometry between a
// node's own transmit and receive arrays (separations in wavelengths,
// rotation in radians).
struct UlaGeometry {
  int tx_antennas = 1;       // M
  int rx_antennas = 1;       // N
  double spacing = 0.5;      // d
  double separation_h = 2.0; // D1, along the receive array axis
  double separation_v = 0.0; // D2, perpendicular offset
  double rotation = 0.0;     // Theta between the two arrays
};

// Departure/arrival sectors in radians: paths draw angles uniformly from
// mean +- spread on each side.
struct AngularConfig {
  double aod_mean = 0.0;
  double aod_spread = 0.0;
  double aoa_mean = 0.0;
  double aoa_spread = 0.0;
};

struct PathParams {
  std::vector<Complex> gain;  // small-scale beta_l, CN(0, 1/L)
  std::vector<double> aod;    // theta_l
  std::vector<double> aoa;    // phi_l
  std::vector<double> dist;   // tau_l in metres
  double eta = 2.0;           // path loss exponent
  double alpha = 1.0;         // reference loss at 1 m, linear
  int paths() const { return static_cast<int>(gain.size()); }
};

// A channel held in factored form: H = phi_r * diag(path_gain) * phi_t plus
// an optional dense near-field part. Keeping the factors lets effective
// (post-beamforming) channels be formed without materializing H.
struct ChannelRealization {
  enum class Kind { Intended, SelfInterference };

  Kind kind = Kind::Intended;
  ComplexMat phi_r;      // N x L, column l = steer_rx(phi_l)
  ComplexVec path_gain;  // L, beta_l / sqrt(alpha * tau_l^eta)
  ComplexMat phi_t;      // L x M, row l = steer_tx(theta_l)^T
  ComplexMat near;       // N x M dense part; 0x0 when absent
  PathParams params;

  int rx_antennas() const;
  int tx_antennas() const;
  ComplexMat matrix() const;  // materialized N x M channel
};

// Array phase responses. Entries are unit modulus; squared norm equals the
// antenna count. Departure and arrival use opposite phase signs.
ComplexVec steer_tx(double theta, int m_antennas, double spacing);
ComplexVec steer_rx(double phi, int n_antennas, double spacing);

// Geometric multipath channel between two nodes. Draw order per realization:
// gains, then AoDs, AoAs, distances (uniform over dist_range per path).
ChannelRealization draw_intended(RandomStream& stream, const UlaGeometry& geom,
                                 const AngularConfig& angles,
                                 std::pair<double, double> dist_range, double eta,
                                 double alpha, int paths);

// Deterministic near-field loop-back coupling between a node's own arrays,
// Frobenius-normalized so that ||H||_F^2 = 10^(-p_is_db/10).
ComplexMat near_field_si(const UlaGeometry& geom, double p_is_db);

// Reflected (far-field) loop-back multipath, same geometric form as the
// intended link. The factored variant feeds the simulator hot path.
ChannelRealization draw_si_far(RandomStream& stream, const UlaGeometry& geom,
                               const AngularConfig& angles,
                               std::pair<double, double> dist_range, double eta,
                               double alpha, int paths);
ComplexMat far_field_si(RandomStream& stream, const UlaGeometry& geom,
                        const AngularConfig& angles,
                        std::pair<double, double> dist_range, double eta,
                        double alpha, int paths);

ChannelRealization assemble_si(const ComplexMat& near, const ComplexMat& far);

// Plain-text matrix exchange: header "rows cols", then one row per line as
// alternating real/imag pairs with round-trip-exact precision.
void save_matrix(std::ostream& os, const ComplexMat& m);
ComplexMat load_matrix(std::istream& is);

}  // namespace fdnc
