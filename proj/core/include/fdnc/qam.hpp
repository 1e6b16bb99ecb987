#pragma once

#include <cstdint>
#include <vector>

#include "fdnc/constellation.hpp"
#include "fdnc/mathcore.hpp"

namespace fdnc {

// Gray-labelled QAM alphabets with unit average symbol energy. Orders 4, 16
// and 64 are square grids; 128 is the cross built by folding a 16x8 Gray
// rectangle's outer columns into wings above and below the 12x12 core, so
// per-axis labels stay Gray everywhere except the fold seams.
struct QamTable {
  int order = 0;
  int bits_per_symbol = 0;
  double scale = 1.0;                         // integer grid -> unit energy
  std::vector<Complex> points;                // label-indexed
  std::vector<std::pair<int, int>> grid;      // odd-integer (I, Q) per label

  Complex modulate(const std::uint8_t* bits) const;
  void demodulate(Complex z, std::uint8_t* bits) const;  // nearest point's label

  static const QamTable& get(int order);  // 4, 16, 64, 128
};

Complex qam_modulate(const BitVec& bits, int order);

// Hard decision on y / (sqrt(rho) * h_est); a zero estimate decodes to the
// all-zero label.
BitVec qam_demodulate(Complex y, Complex h_est, double rho, int order);

}  // namespace fdnc
