#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdnc/constellation.hpp"
#include "fdnc/simulator.hpp"

namespace {

fdnc::CubeSplitConfig config_from_options(int q, const std::string& bits_list) {
  auto parts = [&] {
    std::vector<int> out;
    std::stringstream ss(bits_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
  }();
  if (parts.size() == 1) return fdnc::CubeSplitConfig::uniform(q, parts[0]);
  return fdnc::CubeSplitConfig(q, parts);
}

int run_sweep_command(const std::string& config_path, const std::string& output,
                      int workers_flag) {
  fdnc::SweepConfig cfg = fdnc::load_sweep_config(config_path);
  if (workers_flag > 0) {
    cfg.workers = workers_flag;
  } else if (const char* env = std::getenv("FDNC_WORKERS")) {
    cfg.workers = std::stoi(env);
    if (cfg.workers < 1) throw std::invalid_argument("FDNC_WORKERS must be >= 1");
  }
  auto records = fdnc::run_sweep(cfg);
  if (output.empty())
    fdnc::emit_csv(records, std::cout);
  else
    fdnc::emit_csv(records, output);
  return 0;
}

int run_encode(const fdnc::CubeSplitConfig& cfg) {
  std::string token;
  char buf[64];
  while (std::cin >> token) {
    fdnc::BitVec bits = fdnc::hex_to_bits(token, cfg.bits_per_block());
    fdnc::GrassmannPoint p = fdnc::map_point(fdnc::encode_bits(bits, cfg), cfg);
    for (int i = 0; i < cfg.q; ++i) {
      std::snprintf(buf, sizeof(buf), "%.12g %.12g", p.x(i).real(), p.x(i).imag());
      std::cout << (i > 0 ? " " : "") << buf;
    }
    std::cout << '\n';
  }
  return 0;
}

int run_decode(const fdnc::CubeSplitConfig& cfg, bool use_ml) {
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::stringstream ss(line);
    fdnc::ComplexVec y(cfg.q);
    for (int i = 0; i < cfg.q; ++i) {
      double re, im;
      if (!(ss >> re >> im)) throw std::runtime_error("decode: expected 2q numbers per line");
      y(i) = fdnc::Complex(re, im);
    }
    fdnc::BitVec bits = use_ml ? fdnc::decode_ml(y, cfg) : fdnc::decode_greedy(y, cfg);
    std::cout << fdnc::bits_to_hex(bits) << '\n';
  }
  return 0;
}

// Reference mapping table for the smallest constellation (q = 2, one bit per
// coordinate): all 8 blocks with their intermediate values.
int run_table1() {
  fdnc::CubeSplitConfig cfg(2, {1, 1});
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::printf("bits cell a1     a2     w1_re    w1_im    t1_re    t1_im    x1_re    x1_im    x2_re    x2_im\n");
  for (int v = 0; v < 8; ++v) {
    fdnc::BitVec bits{static_cast<std::uint8_t>((v >> 2) & 1), static_cast<std::uint8_t>((v >> 1) & 1),
                      static_cast<std::uint8_t>(v & 1)};
    fdnc::CellCoordinates cc = fdnc::encode_bits(bits, cfg);
    fdnc::Complex w(fdnc::inverse_normal_cdf(cc.coords[0]) * inv_sqrt2,
                    fdnc::inverse_normal_cdf(cc.coords[1]) * inv_sqrt2);
    double s = std::norm(w);
    double mag = std::sqrt((1.0 - std::exp(-s)) / (1.0 + std::exp(-s)));
    fdnc::Complex t = w * (mag / std::sqrt(s));
    fdnc::GrassmannPoint p = fdnc::map_point(cc, cfg);
    std::printf("%d%d%d  %d    %.4f %.4f %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f\n",
                bits[0], bits[1], bits[2], cc.cell, cc.coords[0], cc.coords[1], w.real(), w.imag(),
                t.real(), t.imag(), p.x(0).real(), p.x(0).imag(), p.x(1).real(), p.x(1).imag());
  }
  return 0;
}

int run_beams(const std::string& config_path, int m_flag, std::uint64_t trial) {
  fdnc::SweepConfig cfg = fdnc::load_sweep_config(config_path);
  int m = m_flag > 0 ? m_flag : cfg.array_sizes.front();
  fdnc::BeamReport rep = fdnc::beam_report(cfg, m, trial);
  std::printf("trial %llu, M = N = %d\n", static_cast<unsigned long long>(rep.trial), rep.m);
  if (!rep.feasible) {
    std::printf("infeasible: no codebook direction serves the wanted sector while avoiding the loop-back sector\n");
    return 0;
  }
  std::printf("user 1: tx angle %+.6f  rx angle %+.6f\n", rep.tx_angle_1, rep.rx_angle_1);
  std::printf("user 2: tx angle %+.6f  rx angle %+.6f\n", rep.tx_angle_2, rep.rx_angle_2);
  std::printf("|h12|^2 = %.6e   |h21|^2 = %.6e\n", std::norm(rep.h12), std::norm(rep.h21));
  std::printf("|h_si1|^2 = %.6e   |h_si2|^2 = %.6e   (isolation %.6g dB)\n", std::norm(rep.h_si1),
              std::norm(rep.h_si2), rep.p_is_db);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-duplex non-coherent massive-MIMO link simulator"};
  app.require_subcommand(1);

  std::string config_path, output;
  int workers = 0;
  auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo BER sweep and emit CSV");
  sweep->add_option("--config", config_path, "sweep configuration file")->required();
  sweep->add_option("--output", output, "output CSV path (default: stdout)");
  sweep->add_option("--workers", workers, "worker thread count (overrides FDNC_WORKERS and config)");

  int q = 2;
  std::string bits = "1";
  bool use_ml = false;
  auto* encode = app.add_subcommand("encode", "Map hex blocks from stdin to transmit vectors");
  encode->add_option("--q", q, "block length (power of two)");
  encode->add_option("--bits", bits, "payload bits per dimension: one value or a 2(q-1) list");
  auto* decode = app.add_subcommand("decode", "Decode 're im' observation lines from stdin to hex blocks");
  decode->add_option("--q", q, "block length (power of two)");
  decode->add_option("--bits", bits, "payload bits per dimension: one value or a 2(q-1) list");
  decode->add_flag("--ml", use_ml, "use the exhaustive decoder instead of the single-shot one");

  auto* table1 = app.add_subcommand("table1", "Print the q=2, 1-bit-per-dimension mapping table");

  std::string beams_config;
  int beams_m = 0;
  std::uint64_t beams_trial = 0;
  auto* beams = app.add_subcommand("beams", "Report selected beams for one drawn realization");
  beams->add_option("--config", beams_config, "sweep configuration file")->required();
  beams->add_option("--size", beams_m, "array size M = N (default: first config entry)");
  beams->add_option("--trial", beams_trial, "trial index to draw");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return run_sweep_command(config_path, output, workers);
    if (*encode) return run_encode(config_from_options(q, bits));
    if (*decode) return run_decode(config_from_options(q, bits), use_ml);
    if (*table1) return run_table1();
    if (*beams) return run_beams(beams_config, beams_m, beams_trial);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
