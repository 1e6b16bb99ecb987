#include "fdnc/mathcore.hpp"

#include <cmath>
#include <stdexcept>

namespace fdnc {

double db_to_linear(double value_db) { return std::pow(10.0, value_db / 10.0); }

double linear_to_db(double value) { return 10.0 * std::log10(value); }

double dbm_to_watts(double value_dbm) { return std::pow(10.0, (value_dbm - 30.0) / 10.0); }

double normal_cdf(double a) { return 0.5 * std::erfc(-a / std::sqrt(2.0)); }

namespace {

// Acklam's rational approximation, |relative error| < 1.15e-9 over (0, 1).
double inverse_normal_cdf_approx(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;

  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

// Newton-refined inverse for p <= 1/2. Working on the lower half keeps the
// CDF residual free of cancellation: normal_cdf is small there and carries
// full relative precision, so one Newton step lands within a few ulp.
double inverse_lower_half(double p) {
  double x = inverse_normal_cdf_approx(p);
  for (int i = 0; i < 2; ++i) {
    double err = normal_cdf(x) - p;
    double deriv = normal_pdf(x);
    if (deriv <= 0.0) break;
    double step = err / deriv;
    if (!std::isfinite(step)) break;
    x -= step;
  }
  return x;
}

}  // namespace

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("inverse_normal_cdf: p outside (0, 1)");
  if (p > 0.5) return -inverse_lower_half(1.0 - p);
  return inverse_lower_half(p);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(mix_seed(seed, stream)), seed_(seed), stream_(stream) {}

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

Complex RandomStream::complex_gaussian(double variance) {
  // Polar form: radius^2 ~ Exp(1/variance), phase uniform. 1 - uniform01()
  // lies in (0, 1], keeping the log finite.
  double u1 = 1.0 - uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-variance * std::log(u1));
  return Complex(r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2));
}

ComplexVec sample_complex_gaussian(RandomStream& stream, double variance, int n) {
  if (n < 0) throw std::invalid_argument("sample_complex_gaussian: negative length");
  ComplexVec v(n);
  for (int i = 0; i < n; ++i) v(i) = stream.complex_gaussian(variance);
  return v;
}

}  // namespace fdnc
