#include "fdnc/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdnc {

std::uint32_t gray_decode(std::uint32_t g) {
  for (int shift = 1; shift < 32; shift <<= 1) g ^= g >> shift;
  return g;
}

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int int_log2(int v) {
  int l = 0;
  while ((1 << l) < v) ++l;
  return l;
}

void check_bit_values(const BitVec& bits) {
  for (auto b : bits)
    if (b > 1) throw std::invalid_argument("bit values must be 0 or 1");
}

std::uint64_t bits_to_value(const BitVec& bits, std::size_t from, std::size_t count) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < count; ++i) v = (v << 1) | bits[from + i];
  return v;
}

void value_to_bits(std::uint64_t v, std::size_t count, BitVec& out) {
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(static_cast<std::uint8_t>((v >> (count - 1 - i)) & 1));
}

// Index of the grid point nearest to target in (0,1); ties take the lower
// index. Grid point i sits at (2i+1) / 2^(bits+1).
int nearest_grid_index(double target, int bits) {
  double v = target * static_cast<double>(1 << (bits + 1));
  auto i = static_cast<long>(std::ceil((v - 1.0) / 2.0 - 0.5));
  long top = (1L << bits) - 1;
  return static_cast<int>(std::clamp(i, 0L, top));
}

int grid_index_of(double coord, int bits) {
  double v = coord * static_cast<double>(1 << (bits + 1));
  auto odd = static_cast<long>(std::lround(v));
  if ((odd & 1) == 0 || std::abs(v - static_cast<double>(odd)) > 1e-9)
    throw std::invalid_argument("coordinate is not a grid point");
  long i = (odd - 1) / 2;
  if (i < 0 || i >= (1L << bits)) throw std::invalid_argument("coordinate outside grid");
  return static_cast<int>(i);
}

}  // namespace

CubeSplitConfig::CubeSplitConfig(int q_in, std::vector<int> bits) : q(q_in), bits_per_dim(std::move(bits)) {
  if (!is_power_of_two(q) || q < 2) throw std::invalid_argument("q must be a power of two, >= 2");
  if (bits_per_dim.size() != static_cast<std::size_t>(2 * (q - 1)))
    throw std::invalid_argument("bits_per_dim must have 2(q-1) entries");
  for (int b : bits_per_dim)
    if (b < 1 || b > 20) throw std::invalid_argument("bits per dimension must be in [1, 20]");
  if (bits_per_block() > 62) throw std::invalid_argument("block carries too many bits");
}

CubeSplitConfig CubeSplitConfig::uniform(int q, int bits) {
  return CubeSplitConfig(q, std::vector<int>(2 * (q - 1), bits));
}

int CubeSplitConfig::cell_bits() const { return int_log2(q); }

int CubeSplitConfig::bits_per_block() const {
  int total = cell_bits();
  for (int b : bits_per_dim) total += b;
  return total;
}

std::size_t CubeSplitConfig::size() const {
  std::size_t s = static_cast<std::size_t>(q);
  for (int b : bits_per_dim) s <<= b;
  return s;
}

std::vector<double> coordinate_grid(int bits) {
  if (bits < 1 || bits > 20) throw std::invalid_argument("grid bits must be in [1, 20]");
  std::size_t count = std::size_t{1} << bits;
  double denom = static_cast<double>(std::size_t{1} << (bits + 1));
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = static_cast<double>(2 * i + 1) / denom;
  return grid;
}

CellCoordinates encode_bits(const BitVec& bits, const CubeSplitConfig& cfg) {
  if (bits.size() != static_cast<std::size_t>(cfg.bits_per_block()))
    throw std::invalid_argument("encode_bits: wrong bit count");
  check_bit_values(bits);

  CellCoordinates cc;
  cc.cell = static_cast<int>(bits_to_value(bits, 0, cfg.cell_bits())) + 1;

  std::size_t pos = cfg.cell_bits();
  cc.coords.reserve(cfg.bits_per_dim.size());
  for (int b : cfg.bits_per_dim) {
    auto label = static_cast<std::uint32_t>(bits_to_value(bits, pos, b));
    pos += b;
    std::uint32_t index = gray_decode(label);
    cc.coords.push_back(static_cast<double>(2 * index + 1) /
                        static_cast<double>(std::size_t{1} << (b + 1)));
  }
  return cc;
}

BitVec bits_from_coordinates(const CellCoordinates& cc, const CubeSplitConfig& cfg) {
  if (cc.cell < 1 || cc.cell > cfg.q) throw std::invalid_argument("cell index outside 1..q");
  if (cc.coords.size() != cfg.bits_per_dim.size())
    throw std::invalid_argument("coordinate count mismatch");

  BitVec bits;
  bits.reserve(cfg.bits_per_block());
  value_to_bits(static_cast<std::uint64_t>(cc.cell - 1), cfg.cell_bits(), bits);
  for (std::size_t v = 0; v < cc.coords.size(); ++v) {
    int b = cfg.bits_per_dim[v];
    std::uint32_t label = gray_encode(static_cast<std::uint32_t>(grid_index_of(cc.coords[v], b)));
    value_to_bits(label, b, bits);
  }
  return bits;
}

GrassmannPoint map_point(const CellCoordinates& cc, const CubeSplitConfig& cfg) {
  if (cc.cell < 1 || cc.cell > cfg.q) throw std::invalid_argument("cell index outside 1..q");
  if (cc.coords.size() != cfg.bits_per_dim.size())
    throw std::invalid_argument("coordinate count mismatch");

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  int k = cfg.q - 1;
  std::vector<Complex> t(k);
  double t_energy = 0.0;
  for (int i = 0; i < k; ++i) {
    Complex w(inverse_normal_cdf(cc.coords[2 * i]) * inv_sqrt2,
              inverse_normal_cdf(cc.coords[2 * i + 1]) * inv_sqrt2);
    double s = std::norm(w);
    if (s == 0.0) {
      t[i] = Complex(0.0, 0.0);
    } else {
      double e = std::exp(-s);
      double mag = std::sqrt((1.0 - e) / (1.0 + e));
      t[i] = w * (mag / std::sqrt(s));
    }
    t_energy += std::norm(t[i]);
  }

  double scale = std::sqrt(static_cast<double>(cfg.q) / (1.0 + t_energy));
  GrassmannPoint p;
  p.x.resize(cfg.q);
  int cell0 = cc.cell - 1;
  for (int i = 0; i < cfg.q; ++i) {
    if (i < cell0)
      p.x(i) = scale * t[i];
    else if (i == cell0)
      p.x(i) = scale;
    else
      p.x(i) = scale * t[i - 1];
  }
  return p;
}

CellCoordinates demap_point(const ComplexVec& x, const CubeSplitConfig& cfg) {
  if (x.size() != cfg.q) throw std::invalid_argument("demap_point: wrong vector length");
  if (x.isZero(0.0)) throw std::invalid_argument("demap_point: zero vector");

  int cell0 = 0;
  double best = std::norm(x(0));
  for (int i = 1; i < cfg.q; ++i) {
    double m = std::norm(x(i));
    if (m > best) {
      best = m;
      cell0 = i;
    }
  }

  const double sqrt2 = std::sqrt(2.0);
  CellCoordinates cc;
  cc.cell = cell0 + 1;
  cc.coords.reserve(cfg.bits_per_dim.size());
  for (int i = 0; i < cfg.q; ++i) {
    if (i == cell0) continue;
    Complex t = x(i) / x(cell0);
    double t2 = std::norm(t);
    Complex w(0.0, 0.0);
    if (t2 > 0.0) {
      // Off-cell ratios keep |t| < 1; clamp so the noisy boundary case stays
      // finite and snaps to the outer grid points.
      t2 = std::min(t2, 1.0 - 1e-12);
      double s = std::log((1.0 + t2) / (1.0 - t2));
      w = t * std::sqrt(s / std::norm(t));
    }
    int dim = static_cast<int>(cc.coords.size());
    int b_re = cfg.bits_per_dim[dim];
    int b_im = cfg.bits_per_dim[dim + 1];
    const auto grid_value = [](int idx, int bits) {
      return static_cast<double>(2 * idx + 1) / static_cast<double>(std::size_t{1} << (bits + 1));
    };
    cc.coords.push_back(grid_value(nearest_grid_index(normal_cdf(sqrt2 * w.real()), b_re), b_re));
    cc.coords.push_back(grid_value(nearest_grid_index(normal_cdf(sqrt2 * w.imag()), b_im), b_im));
  }
  return cc;
}

namespace {

BitVec index_to_bits(std::uint64_t index, const CubeSplitConfig& cfg) {
  BitVec bits;
  bits.reserve(cfg.bits_per_block());
  value_to_bits(index, cfg.bits_per_block(), bits);
  return bits;
}

}  // namespace

std::vector<GrassmannPoint> enumerate_constellation(const CubeSplitConfig& cfg, std::size_t cap) {
  std::size_t count = cfg.size();
  if (count > cap) throw std::length_error("enumerate_constellation: cardinality exceeds cap");
  std::vector<GrassmannPoint> points;
  points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i)
    points.push_back(map_point(encode_bits(index_to_bits(i, cfg), cfg), cfg));
  return points;
}

BitVec decode_ml(const ComplexVec& y, const CubeSplitConfig& cfg, std::size_t cap) {
  if (y.size() != cfg.q) throw std::invalid_argument("decode_ml: wrong vector length");
  if (y.isZero(0.0)) throw std::invalid_argument("decode_ml: zero vector");
  std::size_t count = cfg.size();
  if (count > cap) throw std::length_error("decode_ml: cardinality exceeds cap");

  std::uint64_t best_index = 0;
  double best_metric = -1.0;
  for (std::uint64_t i = 0; i < count; ++i) {
    GrassmannPoint p = map_point(encode_bits(index_to_bits(i, cfg), cfg), cfg);
    double metric = std::norm(y.dot(p.x));
    if (metric > best_metric) {
      best_metric = metric;
      best_index = i;
    }
  }
  return index_to_bits(best_index, cfg);
}

BitVec decode_greedy(const ComplexVec& y, const CubeSplitConfig& cfg) {
  return bits_from_coordinates(demap_point(y, cfg), cfg);
}

std::string bits_to_hex(const BitVec& bits) {
  check_bit_values(bits);
  std::size_t digits = (bits.size() + 3) / 4;
  std::uint64_t v = bits_to_value(bits, 0, bits.size());
  std::string out(digits, '0');
  static const char* hexdig = "0123456789abcdef";
  for (std::size_t i = 0; i < digits; ++i) out[digits - 1 - i] = hexdig[(v >> (4 * i)) & 0xF];
  return out;
}

BitVec hex_to_bits(std::string_view hex, int nbits) {
  if (nbits < 1 || nbits > 62) throw std::invalid_argument("hex_to_bits: bit count out of range");
  if (hex.empty() || hex.size() > 16) throw std::invalid_argument("hex_to_bits: bad digit count");
  std::uint64_t v = 0;
  for (char c : hex) {
    int d;
    if (c >= '0' && c <= '9')
      d = c - '0';
    else if (c >= 'a' && c <= 'f')
      d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F')
      d = c - 'A' + 10;
    else
      throw std::invalid_argument("hex_to_bits: invalid hex digit");
    v = (v << 4) | static_cast<std::uint64_t>(d);
  }
  if (nbits < 62 && v >= (std::uint64_t{1} << nbits))
    throw std::invalid_argument("hex_to_bits: value does not fit in bit count");
  BitVec bits;
  bits.reserve(nbits);
  value_to_bits(v, static_cast<std::size_t>(nbits), bits);
  return bits;
}

}  // namespace fdnc
