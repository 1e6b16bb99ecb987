#include "fdnc/qam.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdnc {

namespace {

int bits_for_order(int order) {
  switch (order) {
    case 4: return 2;
    case 16: return 4;
    case 64: return 6;
    case 128: return 7;
    default: throw std::invalid_argument("unsupported QAM order (expected 4, 16, 64 or 128)");
  }
}

// Axis level for Gray label position i on a 2^k-point axis: most positive
// level carries position 0.
int axis_level(int position, int k) { return ((1 << k) - 1) - 2 * position; }

std::pair<int, int> cross_fold(int x_rect, int y_rect) {
  if (std::abs(x_rect) <= 11) return {x_rect, y_rect};
  int wing_y = std::abs(x_rect) == 13 ? 9 : 11;
  int sx = x_rect > 0 ? 1 : -1;
  int sy = y_rect > 0 ? 1 : -1;
  return {sx * std::abs(y_rect), sy * wing_y};
}

QamTable build_table(int order) {
  QamTable t;
  t.order = order;
  t.bits_per_symbol = bits_for_order(order);
  t.grid.resize(order);

  if (order == 128) {
    // 16 Gray columns x 8 Gray rows; the two outermost column pairs fold
    // into the |Q| = 9 and |Q| = 11 wings.
    for (int label = 0; label < order; ++label) {
      int col = gray_decode(static_cast<std::uint32_t>(label >> 3));
      int row = gray_decode(static_cast<std::uint32_t>(label & 0x7));
      t.grid[label] = cross_fold(axis_level(col, 4), axis_level(row, 3));
    }
  } else {
    int k = t.bits_per_symbol / 2;
    for (int label = 0; label < order; ++label) {
      int col = gray_decode(static_cast<std::uint32_t>(label >> k));
      int row = gray_decode(static_cast<std::uint32_t>(label & ((1 << k) - 1)));
      t.grid[label] = {axis_level(col, k), axis_level(row, k)};
    }
  }

  double energy = 0.0;
  for (auto [x, y] : t.grid) energy += static_cast<double>(x * x + y * y);
  energy /= static_cast<double>(order);
  t.scale = 1.0 / std::sqrt(energy);

  t.points.resize(order);
  for (int label = 0; label < order; ++label)
    t.points[label] = Complex(t.grid[label].first * t.scale, t.grid[label].second * t.scale);
  return t;
}

// Inverse of cross_fold at an odd-integer cross point: recover the Gray
// rectangle cell and hence the label.
int cross_label(int x, int y) {
  int x_rect, y_rect;
  if (std::abs(y) <= 7) {
    x_rect = x;
    y_rect = y;
  } else {
    x_rect = (x > 0 ? 1 : -1) * (std::abs(y) == 9 ? 13 : 15);
    y_rect = (y > 0 ? 1 : -1) * std::abs(x);
  }
  auto col = static_cast<std::uint32_t>((15 - x_rect) / 2);
  auto row = static_cast<std::uint32_t>((7 - y_rect) / 2);
  return static_cast<int>((gray_encode(col) << 3) | gray_encode(row));
}

int nearest_odd(double v, int bound) {
  auto idx = static_cast<long>(std::lround((v - 1.0) / 2.0));
  long half = (bound - 1) / 2;
  idx = std::clamp(idx, -half - 1, half);
  return static_cast<int>(2 * idx + 1);
}

}  // namespace

Complex QamTable::modulate(const std::uint8_t* bits) const {
  int label = 0;
  for (int i = 0; i < bits_per_symbol; ++i) {
    if (bits[i] > 1) throw std::invalid_argument("qam modulate: bit values must be 0 or 1");
    label = (label << 1) | bits[i];
  }
  return points[static_cast<std::size_t>(label)];
}

void QamTable::demodulate(Complex z, std::uint8_t* bits) const {
  int label;
  double xi = z.real() / scale;
  double yi = z.imag() / scale;
  if (order == 128) {
    int xq = nearest_odd(xi, 11);
    int yq = nearest_odd(yi, 11);
    if (std::abs(xq) >= 9 && std::abs(yq) >= 9) {
      // Corner pocket: axis-wise snapping is not the nearest cross point.
      label = 0;
      double best = std::numeric_limits<double>::max();
      for (int l = 0; l < order; ++l) {
        double dx = xi - static_cast<double>(grid[l].first);
        double dy = yi - static_cast<double>(grid[l].second);
        double d2 = dx * dx + dy * dy;
        if (d2 < best) {
          best = d2;
          label = l;
        }
      }
    } else {
      label = cross_label(xq, yq);
    }
  } else {
    int k = bits_per_symbol / 2;
    int top = (1 << k) - 1;
    auto position = [&](double v) {
      return static_cast<int>(std::clamp<long>(std::lround((top - v) / 2.0), 0, top));
    };
    label = static_cast<int>((gray_encode(static_cast<std::uint32_t>(position(xi))) << k) |
                             gray_encode(static_cast<std::uint32_t>(position(yi))));
  }
  for (int i = 0; i < bits_per_symbol; ++i)
    bits[i] = static_cast<std::uint8_t>((label >> (bits_per_symbol - 1 - i)) & 1);
}

const QamTable& QamTable::get(int order) {
  bits_for_order(order);
  static const QamTable q4 = build_table(4);
  static const QamTable q16 = build_table(16);
  static const QamTable q64 = build_table(64);
  static const QamTable q128 = build_table(128);
  switch (order) {
    case 4: return q4;
    case 16: return q16;
    case 64: return q64;
    default: return q128;
  }
}

Complex qam_modulate(const BitVec& bits, int order) {
  const QamTable& t = QamTable::get(order);
  if (bits.size() != static_cast<std::size_t>(t.bits_per_symbol))
    throw std::invalid_argument("qam_modulate: wrong bit count");
  return t.modulate(bits.data());
}

BitVec qam_demodulate(Complex y, Complex h_est, double rho, int order) {
  const QamTable& t = QamTable::get(order);
  BitVec bits(static_cast<std::size_t>(t.bits_per_symbol), 0);
  if (h_est == Complex(0.0, 0.0)) return bits;
  t.demodulate(y / (std::sqrt(rho) * h_est), bits.data());
  return bits;
}

}  // namespace fdnc
