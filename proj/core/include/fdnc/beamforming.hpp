#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "fdnc/channel.hpp"
#include "fdnc/mathcore.hpp"

namespace fdnc {

// Closed interval in cosine-angle space; angular sectors map to
// [cos(mean + spread), cos(mean - spread)] because cos is decreasing.
struct AngularSupport {
  double lo = -1.0;
  double hi = 1.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

AngularSupport support_from_angles(double mean, double spread);

// Raised when no quantized beam direction lies inside the wanted sector while
// avoiding the loop-back sector.
class FeasibleSetEmpty : public std::runtime_error {
 public:
  explicit FeasibleSetEmpty(const std::string& what) : std::runtime_error(what) {}
};

// Unit-norm analog beams for one user: f steers its transmit array, w its
// receive array, each pinned to a quantized direction.
struct BeamformerPair {
  ComplexVec f;
  ComplexVec w;
  double tx_angle = 0.0;  // selected cosine-space direction for f
  double rx_angle = 0.0;  // selected cosine-space direction for w
};

// Codebook directions -1 + (2m-1)/count for m = 1..count.
std::vector<double> quantized_angles(int count);

// Codebook beams: dictionary_tx conjugate-matches steer_tx so that
// steer_tx(theta)^T * dictionary_tx(cos theta) = sqrt(M) at exact alignment.
ComplexVec dictionary_tx(double angle, int m_antennas, double spacing);
ComplexVec dictionary_rx(double angle, int n_antennas, double spacing);

// Quantized directions usable by a selection: inside `intended`, outside
// `avoid`.
std::vector<double> feasible_angles(int count, const AngularSupport& intended,
                                    const AngularSupport& avoid);

// Pick the feasible codebook direction maximizing the captured power
// ||phi * beam||^2 of the realized phase response (phi_t rows / phi_r
// columns are the per-path array responses). Throws FeasibleSetEmpty.
double select_tx_angle(const ComplexMat& phi_t, const AngularSupport& intended,
                       const AngularSupport& avoid, int m_antennas, double spacing);
double select_rx_angle(const ComplexMat& phi_r, const AngularSupport& intended,
                       const AngularSupport& avoid, int n_antennas, double spacing);

BeamformerPair build_pair(double tx_angle, double rx_angle, const UlaGeometry& geom);

// Post-beamforming scalar w^T H f, evaluated through the channel factors.
Complex effective_scalar(const ComplexVec& w, const ChannelRealization& h, const ComplexVec& f);

// Effective link and loop-back coefficients seen at user j when user i
// transmits: (w_j^T H_i f_i, w_j^T H_SI,j f_j).
std::pair<Complex, Complex> effective_channels(const BeamformerPair& user_i,
                                               const BeamformerPair& user_j,
                                               const ChannelRealization& h_i,
                                               const ChannelRealization& h_si_j);

}  // namespace fdnc
