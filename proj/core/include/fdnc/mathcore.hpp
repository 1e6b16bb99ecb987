#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace fdnc {

using Complex = std::complex<double>;
using ComplexVec = Eigen::VectorXcd;
using ComplexMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Power ratio conversions. dBm values carry an implicit reference of 1 mW,
// so dbm_to_watts(-94) = 3.981e-13 W.
double db_to_linear(double value_db);
double linear_to_db(double value);
double dbm_to_watts(double value_dbm);

// Standard normal CDF, strictly increasing, N(0) = 1/2.
double normal_cdf(double a);

// Inverse of normal_cdf on (0, 1); throws std::domain_error outside.
// Accurate to ~1e-15 relative in the recovered tail probability.
double inverse_normal_cdf(double p);

// SplitMix64-style finalizer combining two keys; used to derive sub-seeds so
// that nearby (seed, index) pairs give unrelated streams.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// Deterministic random source addressed by (seed, stream). Streams with the
// same seed but different indices are independent for simulation purposes and
// bit-reproducible across platforms (mt19937_64 output is fully specified).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01();
  double uniform(double lo, double hi);

  // Circularly symmetric complex Gaussian, E|z|^2 = variance.
  Complex complex_gaussian(double variance);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

// n i.i.d. CN(0, variance) entries drawn from the stream in index order.
ComplexVec sample_complex_gaussian(RandomStream& stream, double variance, int n);

}  // namespace fdnc
