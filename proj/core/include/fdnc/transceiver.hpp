#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "fdnc/beamforming.hpp"
#include "fdnc/channel.hpp"
#include "fdnc/constellation.hpp"
#include "fdnc/qam.hpp"

namespace fdnc {

enum class Scheme { FdNc, HdNc, HdCoherent, FdCoherent };

std::string_view scheme_name(Scheme s);
Scheme scheme_from_name(std::string_view name);

// Per-scheme signalling plan for one coherence block of q symbols at an
// average of avg_bits payload bits per user per symbol interval.
//
//   FdNc:        both users send one cube-split point per block.
//   HdNc:        users alternate blocks; odd/even blocks carry different
//                payload sizes so the two-block average meets avg_bits.
//   HdCoherent:  users alternate; 1 pilot + (q-1) QAM data symbols.
//   FdCoherent:  2 time-orthogonal pilots + (q-2) simultaneous QAM data
//                symbols per user, loop-back interference left in.
struct SchemeConfig {
  Scheme scheme = Scheme::FdNc;
  int q = 2;
  double avg_bits = 0.0;                 // per user per symbol interval
  std::optional<CubeSplitConfig> nc;     // FdNc
  std::optional<CubeSplitConfig> nc_even;  // HdNc, blocks 0, 2, ...
  std::optional<CubeSplitConfig> nc_odd;   // HdNc, blocks 1, 3, ...
  int qam_order = 0;                     // coherent schemes

  // Payload bits carried by one block in the given direction slot.
  int block_bits(int block_index) const;
};

// Derives the per-block constellations from (scheme, q, avg_bits); throws
// std::invalid_argument when the average is not attainable.
SchemeConfig make_scheme_config(Scheme scheme, int q, double avg_bits);

struct BlockResult {
  std::array<std::uint64_t, 2> bits_sent{0, 0};   // index = transmitting user
  std::array<std::uint64_t, 2> bit_errors{0, 0};
  bool feasible = true;
};

// Randomness consumed by one block, drawn up front so the same draws can be
// replayed against many channel/power operating points. Index = user.
struct BlockDraws {
  std::array<BitVec, 2> bits;
  std::array<ComplexVec, 2> noise;  // combiner noise per receive interval
};

// direction: transmitting user for the half-duplex schemes (0 or 1, from the
// block index); full-duplex schemes draw for both users and ignore it.
BlockDraws draw_block_inputs(RandomStream& stream, const SchemeConfig& cfg,
                             double noise_var, int direction);

// Pilot-based estimate of the effective channel from the unit pilot
// observation y = sqrt(rho) * h + z.
Complex mmse_estimate(Complex y_pilot, double rho, double noise_var);

// Scalar block cores on effective (post-beamforming) channels. h12 carries
// user 1 -> user 2; h_si_j is the residual loop-back at user j's combiner.
BlockResult fdnc_block(Complex h12, Complex h21, Complex h_si1, Complex h_si2,
                       const BlockDraws& draws, const SchemeConfig& cfg, double rho);
BlockResult hdnc_block(Complex h_fwd, const BlockDraws& draws, const SchemeConfig& cfg,
                       int direction, int block_index, double rho);
BlockResult hd_coherent_block(Complex h_fwd, const BlockDraws& draws, const SchemeConfig& cfg,
                              int direction, double rho, double noise_var);
BlockResult fd_coherent_block(Complex h12, Complex h21, Complex h_si1, Complex h_si2,
                              const BlockDraws& draws, const SchemeConfig& cfg, double rho,
                              double noise_var);

// Full block runners on channel realizations: form the effective channels
// from the users' beams, draw block inputs from the stream, run the core.
BlockResult run_block_fdnc(const ChannelRealization& h12, const ChannelRealization& h21,
                           const ChannelRealization& si1, const ChannelRealization& si2,
                           const BeamformerPair& user1, const BeamformerPair& user2,
                           RandomStream& stream, const SchemeConfig& cfg, double rho,
                           double noise_var);
BlockResult run_block_hdnc(const ChannelRealization& h_fwd, const BeamformerPair& tx_user,
                           const BeamformerPair& rx_user, RandomStream& stream,
                           const SchemeConfig& cfg, int direction, int block_index,
                           double rho, double noise_var);
BlockResult run_block_hd_coherent(const ChannelRealization& h_fwd, const BeamformerPair& tx_user,
                                  const BeamformerPair& rx_user, RandomStream& stream,
                                  const SchemeConfig& cfg, int direction, double rho,
                                  double noise_var);
BlockResult run_block_fd_coherent(const ChannelRealization& h12, const ChannelRealization& h21,
                                  const ChannelRealization& si1, const ChannelRealization& si2,
                                  const BeamformerPair& user1, const BeamformerPair& user2,
                                  RandomStream& stream, const SchemeConfig& cfg, double rho,
                                  double noise_var);

}  // namespace fdnc
