#include "fdnc/transceiver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fdnc {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::FdNc: return "fd-nc";
    case Scheme::HdNc: return "hd-nc";
    case Scheme::HdCoherent: return "hd-coherent";
    case Scheme::FdCoherent: return "fd-coherent";
  }
  throw std::invalid_argument("unknown scheme");
}

Scheme scheme_from_name(std::string_view name) {
  if (name == "fd-nc") return Scheme::FdNc;
  if (name == "hd-nc") return Scheme::HdNc;
  if (name == "hd-coherent") return Scheme::HdCoherent;
  if (name == "fd-coherent") return Scheme::FdCoherent;
  throw std::invalid_argument("unknown scheme name: " + std::string(name));
}

namespace {

int int_log2_checked(double v, const char* what) {
  int l = static_cast<int>(std::lround(std::log2(v)));
  if (std::abs(std::exp2(l) - v) > 1e-9)
    throw std::invalid_argument(std::string(what) + " must be a power of two");
  return l;
}

int checked_div(double num, int den, const char* what) {
  double q = num / den;
  int qi = static_cast<int>(std::lround(q));
  if (std::abs(q - qi) > 1e-9)
    throw std::invalid_argument(std::string(what) + ": rate not attainable with an integer split");
  return qi;
}

int qam_order_checked(int bits, const char* what) {
  if (bits < 1 || bits > 7)
    throw std::invalid_argument(std::string(what) + ": required QAM order unsupported");
  int order = 1 << bits;
  if (order != 4 && order != 16 && order != 64 && order != 128)
    throw std::invalid_argument(std::string(what) + ": required QAM order unsupported");
  return order;
}

}  // namespace

int SchemeConfig::block_bits(int block_index) const {
  switch (scheme) {
    case Scheme::FdNc: return nc->bits_per_block();
    case Scheme::HdNc: return (block_index % 2 == 0 ? nc_even : nc_odd)->bits_per_block();
    case Scheme::HdCoherent: return (q - 1) * QamTable::get(qam_order).bits_per_symbol;
    case Scheme::FdCoherent: return (q - 2) * QamTable::get(qam_order).bits_per_symbol;
  }
  throw std::invalid_argument("unknown scheme");
}

SchemeConfig make_scheme_config(Scheme scheme, int q, double avg_bits) {
  if (q < 2) throw std::invalid_argument("block length must be >= 2");
  int log2q = int_log2_checked(q, "block length");
  if (avg_bits <= 0.0) throw std::invalid_argument("average bits must be positive");

  SchemeConfig cfg;
  cfg.scheme = scheme;
  cfg.q = q;
  cfg.avg_bits = avg_bits;

  switch (scheme) {
    case Scheme::FdNc: {
      int bv = checked_div(avg_bits - log2q, 2 * (q - 1), "fd-nc");
      if (bv < 1) throw std::invalid_argument("fd-nc: average bits too small for the block length");
      cfg.nc = CubeSplitConfig::uniform(q, bv);
      break;
    }
    case Scheme::HdNc: {
      // Alternating payloads: two blocks together must carry what both
      // full-duplex users carry, 4 * avg_bits - 2 * log2(q) payload bits.
      int total = checked_div(4.0 * avg_bits - 2.0 * log2q, 2 * (q - 1), "hd-nc");
      int even = total / 2;
      int odd = total - even;
      if (even < 1) throw std::invalid_argument("hd-nc: average bits too small for the block length");
      cfg.nc_even = CubeSplitConfig::uniform(q, even);
      cfg.nc_odd = CubeSplitConfig::uniform(q, odd);
      break;
    }
    case Scheme::HdCoherent: {
      int bits = checked_div(4.0 * avg_bits / 2.0, q - 1, "hd-coherent");
      cfg.qam_order = qam_order_checked(bits, "hd-coherent");
      break;
    }
    case Scheme::FdCoherent: {
      if (q < 3) throw std::invalid_argument("fd-coherent needs q >= 3 for pilots plus data");
      int bits = checked_div(avg_bits, q - 2, "fd-coherent");
      cfg.qam_order = qam_order_checked(bits, "fd-coherent");
      break;
    }
  }
  return cfg;
}

namespace {

BitVec draw_bits(RandomStream& stream, int count) {
  BitVec bits(static_cast<std::size_t>(count));
  for (auto& b : bits) b = stream.uniform01() < 0.5 ? 0 : 1;
  return bits;
}

std::uint64_t hamming(const BitVec& a, const BitVec& b) {
  std::uint64_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

}  // namespace

BlockDraws draw_block_inputs(RandomStream& stream, const SchemeConfig& cfg, double noise_var,
                             int direction) {
  BlockDraws draws;
  switch (cfg.scheme) {
    case Scheme::FdNc:
    case Scheme::FdCoherent:
      draws.bits[0] = draw_bits(stream, cfg.block_bits(0));
      draws.bits[1] = draw_bits(stream, cfg.block_bits(0));
      draws.noise[0] = sample_complex_gaussian(stream, noise_var, cfg.q);
      draws.noise[1] = sample_complex_gaussian(stream, noise_var, cfg.q);
      break;
    case Scheme::HdNc:
    case Scheme::HdCoherent: {
      if (direction != 0 && direction != 1)
        throw std::invalid_argument("half-duplex block needs direction 0 or 1");
      draws.bits[direction] = draw_bits(stream, cfg.block_bits(direction));
      draws.noise[1 - direction] = sample_complex_gaussian(stream, noise_var, cfg.q);
      break;
    }
  }
  return draws;
}

Complex mmse_estimate(Complex y_pilot, double rho, double noise_var) {
  if (rho <= 0.0) throw std::invalid_argument("mmse_estimate: rho must be positive");
  return (std::sqrt(rho) / (noise_var + rho)) * y_pilot;
}

BlockResult fdnc_block(Complex h12, Complex h21, Complex h_si1, Complex h_si2,
                       const BlockDraws& draws, const SchemeConfig& cfg, double rho) {
  const CubeSplitConfig& nc = *cfg.nc;
  double sr = std::sqrt(rho);
  ComplexVec x1 = map_point(encode_bits(draws.bits[0], nc), nc).x;
  ComplexVec x2 = map_point(encode_bits(draws.bits[1], nc), nc).x;

  ComplexVec y2 = sr * (h12 * x1 + h_si2 * x2) + draws.noise[1];
  ComplexVec y1 = sr * (h21 * x2 + h_si1 * x1) + draws.noise[0];

  BlockResult res;
  res.bits_sent[0] = draws.bits[0].size();
  res.bits_sent[1] = draws.bits[1].size();
  res.bit_errors[0] = hamming(decode_greedy(y2, nc), draws.bits[0]);
  res.bit_errors[1] = hamming(decode_greedy(y1, nc), draws.bits[1]);
  return res;
}

BlockResult hdnc_block(Complex h_fwd, const BlockDraws& draws, const SchemeConfig& cfg,
                       int direction, int block_index, double rho) {
  const CubeSplitConfig& nc = block_index % 2 == 0 ? *cfg.nc_even : *cfg.nc_odd;
  double sr = std::sqrt(rho);
  ComplexVec x = map_point(encode_bits(draws.bits[direction], nc), nc).x;
  ComplexVec y = sr * h_fwd * x + draws.noise[1 - direction];

  BlockResult res;
  res.bits_sent[direction] = draws.bits[direction].size();
  res.bit_errors[direction] = hamming(decode_greedy(y, nc), draws.bits[direction]);
  return res;
}

BlockResult hd_coherent_block(Complex h_fwd, const BlockDraws& draws, const SchemeConfig& cfg,
                              int direction, double rho, double noise_var) {
  const QamTable& table = QamTable::get(cfg.qam_order);
  double sr = std::sqrt(rho);
  const BitVec& bits = draws.bits[direction];
  const ComplexVec& noise = draws.noise[1 - direction];

  Complex y_pilot = sr * h_fwd + noise(0);
  Complex h_est = mmse_estimate(y_pilot, rho, noise_var);

  BlockResult res;
  res.bits_sent[direction] = bits.size();
  int per_symbol = table.bits_per_symbol;
  for (int k = 1; k < cfg.q; ++k) {
    const std::uint8_t* slice = bits.data() + static_cast<std::size_t>((k - 1) * per_symbol);
    Complex s = table.modulate(slice);
    Complex y = sr * h_fwd * s + noise(k);
    BitVec decided = qam_demodulate(y, h_est, rho, cfg.qam_order);
    for (int i = 0; i < per_symbol; ++i) res.bit_errors[direction] += decided[i] != slice[i];
  }
  return res;
}

BlockResult fd_coherent_block(Complex h12, Complex h21, Complex h_si1, Complex h_si2,
                              const BlockDraws& draws, const SchemeConfig& cfg, double rho,
                              double noise_var) {
  const QamTable& table = QamTable::get(cfg.qam_order);
  double sr = std::sqrt(rho);

  // Time-orthogonal pilots: each user's pilot interval is interference-free
  // because the other user keeps silent in it.
  Complex h12_est = mmse_estimate(sr * h12 + draws.noise[1](0), rho, noise_var);
  Complex h21_est = mmse_estimate(sr * h21 + draws.noise[0](1), rho, noise_var);

  BlockResult res;
  res.bits_sent[0] = draws.bits[0].size();
  res.bits_sent[1] = draws.bits[1].size();
  int per_symbol = table.bits_per_symbol;
  for (int k = 2; k < cfg.q; ++k) {
    const std::uint8_t* slice1 = draws.bits[0].data() + static_cast<std::size_t>((k - 2) * per_symbol);
    const std::uint8_t* slice2 = draws.bits[1].data() + static_cast<std::size_t>((k - 2) * per_symbol);
    Complex s1 = table.modulate(slice1);
    Complex s2 = table.modulate(slice2);
    Complex y2 = sr * (h12 * s1 + h_si2 * s2) + draws.noise[1](k);
    Complex y1 = sr * (h21 * s2 + h_si1 * s1) + draws.noise[0](k);
    BitVec decided2 = qam_demodulate(y2, h12_est, rho, cfg.qam_order);
    BitVec decided1 = qam_demodulate(y1, h21_est, rho, cfg.qam_order);
    for (int i = 0; i < per_symbol; ++i) {
      res.bit_errors[0] += decided2[i] != slice1[i];
      res.bit_errors[1] += decided1[i] != slice2[i];
    }
  }
  return res;
}

BlockResult run_block_fdnc(const ChannelRealization& h12, const ChannelRealization& h21,
                           const ChannelRealization& si1, const ChannelRealization& si2,
                           const BeamformerPair& user1, const BeamformerPair& user2,
                           RandomStream& stream, const SchemeConfig& cfg, double rho,
                           double noise_var) {
  auto [eff12, eff_si2] = effective_channels(user1, user2, h12, si2);
  auto [eff21, eff_si1] = effective_channels(user2, user1, h21, si1);
  BlockDraws draws = draw_block_inputs(stream, cfg, noise_var, 0);
  return fdnc_block(eff12, eff21, eff_si1, eff_si2, draws, cfg, rho);
}

BlockResult run_block_hdnc(const ChannelRealization& h_fwd, const BeamformerPair& tx_user,
                           const BeamformerPair& rx_user, RandomStream& stream,
                           const SchemeConfig& cfg, int direction, int block_index, double rho,
                           double noise_var) {
  Complex h_eff = effective_scalar(rx_user.w, h_fwd, tx_user.f);
  BlockDraws draws = draw_block_inputs(stream, cfg, noise_var, direction);
  return hdnc_block(h_eff, draws, cfg, direction, block_index, rho);
}

BlockResult run_block_hd_coherent(const ChannelRealization& h_fwd, const BeamformerPair& tx_user,
                                  const BeamformerPair& rx_user, RandomStream& stream,
                                  const SchemeConfig& cfg, int direction, double rho,
                                  double noise_var) {
  Complex h_eff = effective_scalar(rx_user.w, h_fwd, tx_user.f);
  BlockDraws draws = draw_block_inputs(stream, cfg, noise_var, direction);
  return hd_coherent_block(h_eff, draws, cfg, direction, rho, noise_var);
}

BlockResult run_block_fd_coherent(const ChannelRealization& h12, const ChannelRealization& h21,
                                  const ChannelRealization& si1, const ChannelRealization& si2,
                                  const BeamformerPair& user1, const BeamformerPair& user2,
                                  RandomStream& stream, const SchemeConfig& cfg, double rho,
                                  double noise_var) {
  auto [eff12, eff_si2] = effective_channels(user1, user2, h12, si2);
  auto [eff21, eff_si1] = effective_channels(user2, user1, h21, si1);
  BlockDraws draws = draw_block_inputs(stream, cfg, noise_var, 0);
  return fd_coherent_block(eff12, eff21, eff_si1, eff_si2, draws, cfg, rho, noise_var);
}

}  // namespace fdnc
