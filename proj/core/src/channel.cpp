#include "fdnc/channel.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace fdnc {

namespace {

void check_array(int count, const char* what) {
  if (count < 1) throw std::invalid_argument(std::string(what) + ": antenna count must be >= 1");
}

// Unit-modulus progression 1, r, r^2, ... with r = exp(j*step). The running
// product drifts from unit modulus by at most a few ulp across practical
// array sizes, which keeps squared norms exact to ~1e-13.
ComplexVec phase_progression(double step, int count) {
  ComplexVec v(count);
  Complex r = std::polar(1.0, step);
  Complex cur(1.0, 0.0);
  for (int i = 0; i < count; ++i) {
    v(i) = cur;
    cur *= r;
  }
  return v;
}

}  // namespace

ComplexVec steer_tx(double theta, int m_antennas, double spacing) {
  check_array(m_antennas, "steer_tx");
  return phase_progression(-2.0 * kPi * spacing * std::cos(theta), m_antennas);
}

ComplexVec steer_rx(double phi, int n_antennas, double spacing) {
  check_array(n_antennas, "steer_rx");
  return phase_progression(2.0 * kPi * spacing * std::cos(phi), n_antennas);
}

int ChannelRealization::rx_antennas() const {
  return static_cast<int>(phi_r.rows() > 0 ? phi_r.rows() : near.rows());
}

int ChannelRealization::tx_antennas() const {
  return static_cast<int>(phi_t.cols() > 0 ? phi_t.cols() : near.cols());
}

ComplexMat ChannelRealization::matrix() const {
  ComplexMat h;
  if (path_gain.size() > 0)
    h = phi_r * path_gain.asDiagonal() * phi_t;
  else
    h = ComplexMat::Zero(near.rows(), near.cols());
  if (near.size() > 0) h += near;
  return h;
}

namespace {

ChannelRealization draw_geometric(RandomStream& stream, const UlaGeometry& geom,
                                  const AngularConfig& angles,
                                  std::pair<double, double> dist_range, double eta,
                                  double alpha, int paths,
                                  ChannelRealization::Kind kind) {
  check_array(geom.tx_antennas, "draw");
  check_array(geom.rx_antennas, "draw");
  if (paths < 1) throw std::invalid_argument("path count must be >= 1");
  if (alpha <= 0.0) throw std::invalid_argument("reference loss must be positive");
  if (dist_range.first <= 0.0 || dist_range.second < dist_range.first)
    throw std::invalid_argument("invalid distance range");

  ChannelRealization ch;
  ch.kind = kind;
  ch.params.eta = eta;
  ch.params.alpha = alpha;
  ch.params.gain.resize(paths);
  ch.params.aod.resize(paths);
  ch.params.aoa.resize(paths);
  ch.params.dist.resize(paths);

  double per_path_var = 1.0 / static_cast<double>(paths);
  for (int l = 0; l < paths; ++l) ch.params.gain[l] = stream.complex_gaussian(per_path_var);
  for (int l = 0; l < paths; ++l)
    ch.params.aod[l] = stream.uniform(angles.aod_mean - angles.aod_spread,
                                      angles.aod_mean + angles.aod_spread);
  for (int l = 0; l < paths; ++l)
    ch.params.aoa[l] = stream.uniform(angles.aoa_mean - angles.aoa_spread,
                                      angles.aoa_mean + angles.aoa_spread);
  for (int l = 0; l < paths; ++l)
    ch.params.dist[l] = stream.uniform(dist_range.first, dist_range.second);

  ch.phi_r.resize(geom.rx_antennas, paths);
  ch.phi_t.resize(paths, geom.tx_antennas);
  ch.path_gain.resize(paths);
  for (int l = 0; l < paths; ++l) {
    ch.phi_r.col(l) = steer_rx(ch.params.aoa[l], geom.rx_antennas, geom.spacing);
    ch.phi_t.row(l) = steer_tx(ch.params.aod[l], geom.tx_antennas, geom.spacing).transpose();
    ch.path_gain(l) =
        ch.params.gain[l] / std::sqrt(alpha * std::pow(ch.params.dist[l], eta));
  }
  return ch;
}

}  // namespace

ChannelRealization draw_intended(RandomStream& stream, const UlaGeometry& geom,
                                 const AngularConfig& angles,
                                 std::pair<double, double> dist_range, double eta,
                                 double alpha, int paths) {
  return draw_geometric(stream, geom, angles, dist_range, eta, alpha, paths,
                        ChannelRealization::Kind::Intended);
}

ComplexMat near_field_si(const UlaGeometry& geom, double p_is_db) {
  check_array(geom.tx_antennas, "near_field_si");
  check_array(geom.rx_antennas, "near_field_si");

  ComplexMat a(geom.rx_antennas, geom.tx_antennas);
  double cos_rot = std::cos(geom.rotation);
  double sin_rot = std::sin(geom.rotation);
  for (int n = 1; n <= geom.rx_antennas; ++n) {
    for (int m = 1; m <= geom.tx_antennas; ++m) {
      double along = geom.separation_h + (m - 1) * geom.spacing + cos_rot * (n - 1) * geom.spacing;
      double across = geom.separation_v + sin_rot * (n + 1) * geom.spacing;
      double delta = std::hypot(along, across);
      if (delta <= 0.0) throw std::domain_error("near_field_si: coincident antenna elements");
      a(n - 1, m - 1) = std::polar(1.0 / delta, -2.0 * kPi * delta);
    }
  }
  a *= std::pow(10.0, -p_is_db / 20.0) / a.norm();
  return a;
}

ChannelRealization draw_si_far(RandomStream& stream, const UlaGeometry& geom,
                               const AngularConfig& angles,
                               std::pair<double, double> dist_range, double eta,
                               double alpha, int paths) {
  return draw_geometric(stream, geom, angles, dist_range, eta, alpha, paths,
                        ChannelRealization::Kind::SelfInterference);
}

ComplexMat far_field_si(RandomStream& stream, const UlaGeometry& geom,
                        const AngularConfig& angles,
                        std::pair<double, double> dist_range, double eta,
                        double alpha, int paths) {
  return draw_si_far(stream, geom, angles, dist_range, eta, alpha, paths).matrix();
}

ChannelRealization assemble_si(const ComplexMat& near, const ComplexMat& far) {
  if (near.rows() != far.rows() || near.cols() != far.cols())
    throw std::invalid_argument("assemble_si: dimension mismatch");
  ChannelRealization ch;
  ch.kind = ChannelRealization::Kind::SelfInterference;
  ch.near = near + far;
  return ch;
}

void save_matrix(std::ostream& os, const ComplexMat& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  char buf[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex& z = m(r, c);
      std::snprintf(buf, sizeof(buf), "%.17g %.17g", z.real(), z.imag());
      if (c > 0) os << ' ';
      os << buf;
    }
    os << '\n';
  }
}

ComplexMat load_matrix(std::istream& is) {
  Eigen::Index rows = 0, cols = 0;
  if (!(is >> rows >> cols) || rows < 0 || cols < 0)
    throw std::runtime_error("load_matrix: malformed header");
  ComplexMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      double re, im;
      if (!(is >> re >> im)) throw std::runtime_error("load_matrix: truncated data");
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

}  // namespace fdnc
