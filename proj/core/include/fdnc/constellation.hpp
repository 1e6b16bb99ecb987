#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fdnc/mathcore.hpp"

namespace fdnc {

// One bit per element, values 0 or 1, most significant bit first.
using BitVec = std::vector<std::uint8_t>;

inline std::uint32_t gray_encode(std::uint32_t i) { return i ^ (i >> 1); }
std::uint32_t gray_decode(std::uint32_t g);

inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 20;

// Parameters of a cube-split constellation on the Grassmannian of lines in
// C^q: cell index plus 2(q-1) quantized local coordinates.
struct CubeSplitConfig {
  int q;                          // block length, power of two, >= 2
  std::vector<int> bits_per_dim;  // size 2(q-1), each >= 1

  CubeSplitConfig(int q, std::vector<int> bits_per_dim);
  static CubeSplitConfig uniform(int q, int bits);

  int cell_bits() const;       // log2(q)
  int bits_per_block() const;  // cell_bits() + sum(bits_per_dim)
  std::size_t size() const;    // q * 2^sum(bits_per_dim)
};

// Intermediate representation between bits and the unit vector.
struct CellCoordinates {
  int cell = 1;                // 1-based cell index
  std::vector<double> coords;  // 2(q-1) grid values in (0, 1)
};

struct GrassmannPoint {
  ComplexVec x;  // q entries, ||x||^2 = q
};

// The grid A_B: odd multiples of 2^-(B+1), ascending; adjacent points carry
// Gray labels differing in one bit (label of position i is gray_encode(i)).
std::vector<double> coordinate_grid(int bits);

CellCoordinates encode_bits(const BitVec& bits, const CubeSplitConfig& cfg);
BitVec bits_from_coordinates(const CellCoordinates& cc, const CubeSplitConfig& cfg);

GrassmannPoint map_point(const CellCoordinates& cc, const CubeSplitConfig& cfg);
CellCoordinates demap_point(const ComplexVec& x, const CubeSplitConfig& cfg);

// All q * 2^sum points in ascending bit-pattern order; throws if the
// cardinality exceeds cap.
std::vector<GrassmannPoint> enumerate_constellation(const CubeSplitConfig& cfg,
                                                    std::size_t cap = kDefaultEnumerationCap);

// Exhaustive decoder: maximizes |<y, x>|^2; ties resolve to the lowest bit
// pattern. Intended for small constellations.
BitVec decode_ml(const ComplexVec& y, const CubeSplitConfig& cfg,
                 std::size_t cap = kDefaultEnumerationCap);

// Single-shot decoder: applies the demapping chain directly to y. Invariant
// under y -> c*y for complex c != 0.
BitVec decode_greedy(const ComplexVec& y, const CubeSplitConfig& cfg);

// Hex text form used on the tool boundary: ceil(nbits/4) digits, bit vector
// read as a big-endian integer.
std::string bits_to_hex(const BitVec& bits);
BitVec hex_to_bits(std::string_view hex, int nbits);

}  // namespace fdnc
