#include "fdnc/beamforming.hpp"

#include <cmath>

namespace fdnc {

AngularSupport support_from_angles(double mean, double spread) {
  if (!(spread >= 0.0 && spread < kPi / 2.0))
    throw std::invalid_argument("support_from_angles: spread outside [0, pi/2)");
  if (!(mean > 0.0 && mean < kPi))
    throw std::invalid_argument("support_from_angles: mean outside (0, pi)");
  return AngularSupport{std::cos(mean + spread), std::cos(mean - spread)};
}

std::vector<double> quantized_angles(int count) {
  if (count < 1) throw std::invalid_argument("quantized_angles: count must be >= 1");
  std::vector<double> angles(count);
  for (int m = 1; m <= count; ++m)
    angles[m - 1] = -1.0 + static_cast<double>(2 * m - 1) / static_cast<double>(count);
  return angles;
}

namespace {

ComplexVec codebook_beam(double angle, int count, double spacing, double sign) {
  if (count < 1) throw std::invalid_argument("codebook beam: antenna count must be >= 1");
  ComplexVec v(count);
  double scale = 1.0 / std::sqrt(static_cast<double>(count));
  Complex r = std::polar(1.0, sign * 2.0 * kPi * spacing * angle);
  Complex cur(scale, 0.0);
  for (int i = 0; i < count; ++i) {
    v(i) = cur;
    cur *= r;
  }
  return v;
}

}  // namespace

ComplexVec dictionary_tx(double angle, int m_antennas, double spacing) {
  return codebook_beam(angle, m_antennas, spacing, +1.0);
}

ComplexVec dictionary_rx(double angle, int n_antennas, double spacing) {
  return codebook_beam(angle, n_antennas, spacing, -1.0);
}

std::vector<double> feasible_angles(int count, const AngularSupport& intended,
                                    const AngularSupport& avoid) {
  std::vector<double> out;
  for (double a : quantized_angles(count))
    if (intended.contains(a) && !avoid.contains(a)) out.push_back(a);
  return out;
}

namespace {

double select_angle(const ComplexMat& phi, bool transmit_side, const AngularSupport& intended,
                    const AngularSupport& avoid, int antennas, double spacing) {
  if ((transmit_side ? phi.cols() : phi.rows()) != antennas)
    throw std::invalid_argument("select angle: phase response does not match antenna count");

  std::vector<double> candidates = feasible_angles(antennas, intended, avoid);
  if (candidates.empty())
    throw FeasibleSetEmpty("no quantized beam direction inside the wanted sector avoids the loop-back sector");

  double best_angle = candidates.front();
  double best_power = -1.0;
  for (double a : candidates) {
    double power;
    if (transmit_side)
      power = (phi * dictionary_tx(a, antennas, spacing)).squaredNorm();
    else
      power = (phi.transpose() * dictionary_rx(a, antennas, spacing)).squaredNorm();
    if (power > best_power) {
      best_power = power;
      best_angle = a;
    }
  }
  return best_angle;
}

}  // namespace

double select_tx_angle(const ComplexMat& phi_t, const AngularSupport& intended,
                       const AngularSupport& avoid, int m_antennas, double spacing) {
  return select_angle(phi_t, true, intended, avoid, m_antennas, spacing);
}

double select_rx_angle(const ComplexMat& phi_r, const AngularSupport& intended,
                       const AngularSupport& avoid, int n_antennas, double spacing) {
  return select_angle(phi_r, false, intended, avoid, n_antennas, spacing);
}

BeamformerPair build_pair(double tx_angle, double rx_angle, const UlaGeometry& geom) {
  BeamformerPair pair;
  pair.tx_angle = tx_angle;
  pair.rx_angle = rx_angle;
  pair.f = dictionary_tx(tx_angle, geom.tx_antennas, geom.spacing);
  pair.w = dictionary_rx(rx_angle, geom.rx_antennas, geom.spacing);
  return pair;
}

Complex effective_scalar(const ComplexVec& w, const ChannelRealization& h, const ComplexVec& f) {
  if (w.size() != h.rx_antennas() || f.size() != h.tx_antennas())
    throw std::invalid_argument("effective_scalar: beam length does not match channel");
  Complex value(0.0, 0.0);
  if (h.path_gain.size() > 0) {
    // (w^T phi_r) diag(g) (phi_t f): two thin mat-vecs instead of an N x M
    // product; identical to w^T matrix() f up to rounding.
    ComplexVec left = h.phi_r.transpose() * w;
    ComplexVec right = h.phi_t * f;
    for (Eigen::Index l = 0; l < h.path_gain.size(); ++l)
      value += left(l) * h.path_gain(l) * right(l);
  }
  if (h.near.size() > 0) value += (w.transpose() * (h.near * f)).value();
  return value;
}

std::pair<Complex, Complex> effective_channels(const BeamformerPair& user_i,
                                               const BeamformerPair& user_j,
                                               const ChannelRealization& h_i,
                                               const ChannelRealization& h_si_j) {
  return {effective_scalar(user_j.w, h_i, user_i.f),
          effective_scalar(user_j.w, h_si_j, user_j.f)};
}

}  // namespace fdnc
