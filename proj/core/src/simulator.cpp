#include "fdnc/simulator.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fdnc {

double SweepConfig::alpha_linear() const {
  double a_db = alpha_db ? *alpha_db : 32.4 + 20.0 * std::log10(carrier_ghz);
  return db_to_linear(a_db);
}

double SweepConfig::noise_watts() const { return dbm_to_watts(noise_dbm); }

namespace {

double deg2rad(double deg) { return deg * kPi / 180.0; }

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = s.find(',', start);
    parts.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return parts;
}

double parse_double(const std::string& s, const std::string& key) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + s);
  }
  if (used != s.size()) throw std::invalid_argument("config: trailing junk for '" + key + "': " + s);
  return v;
}

long long parse_int(const std::string& s, const std::string& key) {
  double v = parse_double(s, key);
  auto i = static_cast<long long>(std::llround(v));
  if (static_cast<double>(i) != v)
    throw std::invalid_argument("config: '" + key + "' must be an integer");
  return i;
}

std::pair<double, double> parse_range(const std::string& s, const std::string& key) {
  auto parts = split_list(s);
  if (parts.size() != 2)
    throw std::invalid_argument("config: '" + key + "' needs two comma separated values");
  return {parse_double(parts[0], key), parse_double(parts[1], key)};
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& is) {
  SweepConfig cfg;
  bool saw_schemes = false, saw_rho = false, saw_sizes = false, saw_trials = false;

  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key or value");

    if (key == "schemes") {
      cfg.schemes.clear();
      for (const auto& name : split_list(value)) cfg.schemes.push_back(scheme_from_name(name));
      saw_schemes = true;
    } else if (key == "rho_dbm") {
      cfg.rho_dbm.clear();
      for (const auto& v : split_list(value)) cfg.rho_dbm.push_back(parse_double(v, key));
      saw_rho = true;
    } else if (key == "array_size") {
      cfg.array_sizes.clear();
      for (const auto& v : split_list(value)) cfg.array_sizes.push_back(static_cast<int>(parse_int(v, key)));
      saw_sizes = true;
    } else if (key == "p_is_db") {
      cfg.p_is_db.clear();
      for (const auto& v : split_list(value)) cfg.p_is_db.push_back(parse_double(v, key));
    } else if (key == "q") {
      cfg.q = static_cast<int>(parse_int(value, key));
    } else if (key == "avg_bits") {
      cfg.avg_bits = parse_double(value, key);
    } else if (key == "trials") {
      long long t = parse_int(value, key);
      if (t < 1) throw std::invalid_argument("config: trials must be >= 1");
      cfg.trials = static_cast<std::uint64_t>(t);
      saw_trials = true;
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "workers") {
      cfg.workers = static_cast<int>(parse_int(value, key));
    } else if (key == "carrier_ghz") {
      cfg.carrier_ghz = parse_double(value, key);
    } else if (key == "alpha_db") {
      cfg.alpha_db = parse_double(value, key);
    } else if (key == "eta") {
      cfg.eta = parse_double(value, key);
    } else if (key == "paths") {
      cfg.paths = static_cast<int>(parse_int(value, key));
    } else if (key == "si_paths") {
      cfg.si_paths = static_cast<int>(parse_int(value, key));
    } else if (key == "noise_dbm") {
      cfg.noise_dbm = parse_double(value, key);
    } else if (key == "dist_m") {
      cfg.dist_m = parse_range(value, key);
    } else if (key == "si_dist_m") {
      cfg.si_dist_m = parse_range(value, key);
    } else if (key == "spacing") {
      cfg.spacing = parse_double(value, key);
    } else if (key == "separation_h") {
      cfg.separation_h = parse_double(value, key);
    } else if (key == "separation_v") {
      cfg.separation_v = parse_double(value, key);
    } else if (key == "rotation_deg") {
      cfg.rotation_deg = parse_double(value, key);
    } else if (key == "aod_mean_deg") {
      cfg.aod_mean_deg = parse_double(value, key);
    } else if (key == "aod_spread_deg") {
      cfg.aod_spread_deg = parse_double(value, key);
    } else if (key == "aoa_mean_deg") {
      cfg.aoa_mean_deg = parse_double(value, key);
    } else if (key == "aoa_spread_deg") {
      cfg.aoa_spread_deg = parse_double(value, key);
    } else if (key == "si_aod_mean_deg") {
      cfg.si_aod_mean_deg = parse_double(value, key);
    } else if (key == "si_aod_spread_deg") {
      cfg.si_aod_spread_deg = parse_double(value, key);
    } else if (key == "si_aoa_mean_deg") {
      cfg.si_aoa_mean_deg = parse_double(value, key);
    } else if (key == "si_aoa_spread_deg") {
      cfg.si_aoa_spread_deg = parse_double(value, key);
    } else {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    }
  }

  if (!saw_schemes) throw std::invalid_argument("config: missing required key 'schemes'");
  if (!saw_rho) throw std::invalid_argument("config: missing required key 'rho_dbm'");
  if (!saw_sizes) throw std::invalid_argument("config: missing required key 'array_size'");
  if (!saw_trials) throw std::invalid_argument("config: missing required key 'trials'");
  if (cfg.schemes.empty() || cfg.rho_dbm.empty() || cfg.array_sizes.empty() || cfg.p_is_db.empty())
    throw std::invalid_argument("config: empty grid axis");
  for (int m : cfg.array_sizes)
    if (m < 1) throw std::invalid_argument("config: array_size entries must be >= 1");
  if (cfg.workers < 1) throw std::invalid_argument("config: workers must be >= 1");
  if (cfg.paths < 1 || cfg.si_paths < 1) throw std::invalid_argument("config: path counts must be >= 1");
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_sweep_config(in);
}

namespace {

struct Plan {
  SchemeConfig sc;
  UlaGeometry geom;
  AngularConfig intended, si;
  AngularSupport aod_int, aoa_int, aod_si, aoa_si;
  ComplexMat near_unit;        // near-field coupling at 0 dB isolation
  std::vector<double> kappa;   // per p_is index
  std::vector<double> rho_w;   // per rho index
  std::pair<double, double> dist, si_dist;
  double eta = 0.0, alpha = 0.0, noise_w = 0.0;
  int paths = 0, si_paths = 0;
  std::uint64_t sub_seed = 0;
  std::uint64_t trials = 0;
  bool trivial_beams = false;  // single-antenna arrays: identity beams
  bool feasible = true;
};

struct PlanAccum {
  std::vector<std::uint64_t> bits, errors;
  std::uint64_t infeasible = 0;

  explicit PlanAccum(std::size_t cells) : bits(cells, 0), errors(cells, 0) {}
  void merge(const PlanAccum& other) {
    for (std::size_t i = 0; i < bits.size(); ++i) {
      bits[i] += other.bits[i];
      errors[i] += other.errors[i];
    }
    infeasible += other.infeasible;
  }
};

Plan build_plan(const SweepConfig& cfg, Scheme scheme, int m) {
  Plan plan;
  plan.sc = make_scheme_config(scheme, cfg.q, cfg.avg_bits);
  plan.geom = UlaGeometry{m,
                          m,
                          cfg.spacing,
                          cfg.separation_h,
                          cfg.separation_v,
                          deg2rad(cfg.rotation_deg)};
  plan.intended = AngularConfig{deg2rad(cfg.aod_mean_deg), deg2rad(cfg.aod_spread_deg),
                                deg2rad(cfg.aoa_mean_deg), deg2rad(cfg.aoa_spread_deg)};
  plan.si = AngularConfig{deg2rad(cfg.si_aod_mean_deg), deg2rad(cfg.si_aod_spread_deg),
                          deg2rad(cfg.si_aoa_mean_deg), deg2rad(cfg.si_aoa_spread_deg)};
  plan.aod_int = support_from_angles(plan.intended.aod_mean, plan.intended.aod_spread);
  plan.aoa_int = support_from_angles(plan.intended.aoa_mean, plan.intended.aoa_spread);
  plan.aod_si = support_from_angles(plan.si.aod_mean, plan.si.aod_spread);
  plan.aoa_si = support_from_angles(plan.si.aoa_mean, plan.si.aoa_spread);
  plan.near_unit = near_field_si(plan.geom, 0.0);
  for (double p : cfg.p_is_db) plan.kappa.push_back(std::pow(10.0, -p / 20.0));
  for (double r : cfg.rho_dbm) plan.rho_w.push_back(dbm_to_watts(r));
  plan.dist = cfg.dist_m;
  plan.si_dist = cfg.si_dist_m;
  plan.eta = cfg.eta;
  plan.alpha = cfg.alpha_linear();
  plan.noise_w = cfg.noise_watts();
  plan.paths = cfg.paths;
  plan.si_paths = cfg.si_paths;
  plan.trials = cfg.trials;
  plan.sub_seed = mix_seed(mix_seed(mix_seed(cfg.seed, static_cast<std::uint64_t>(scheme)),
                                    static_cast<std::uint64_t>(m)),
                           static_cast<std::uint64_t>(cfg.q) * 1024 +
                               static_cast<std::uint64_t>(std::llround(cfg.avg_bits * 4)));
  plan.trivial_beams = (m == 1);
  if (!plan.trivial_beams) {
    plan.feasible = !feasible_angles(m, plan.aod_int, plan.aod_si).empty() &&
                    !feasible_angles(m, plan.aoa_int, plan.aoa_si).empty();
  }
  return plan;
}

BeamformerPair trivial_pair() {
  BeamformerPair pair;
  pair.f = ComplexVec::Ones(1);
  pair.w = ComplexVec::Ones(1);
  pair.tx_angle = 0.0;
  pair.rx_angle = 0.0;
  return pair;
}

void accumulate(PlanAccum& acc, std::size_t cell, const BlockResult& res) {
  acc.bits[cell] += res.bits_sent[0] + res.bits_sent[1];
  acc.errors[cell] += res.bit_errors[0] + res.bit_errors[1];
}

// Channel and beam state of one full-duplex trial, shared by the sweep and
// the diagnostic beam report so both see identical draws.
struct FdTrialSetup {
  BeamformerPair u1, u2;
  Complex h12, h21;
  Complex near1, near2;  // unit-isolation near-field loop-back
  Complex far1, far2;
};

FdTrialSetup fd_trial_setup(const Plan& plan, RandomStream& stream) {
  ChannelRealization ch12 =
      draw_intended(stream, plan.geom, plan.intended, plan.dist, plan.eta, plan.alpha, plan.paths);
  ChannelRealization ch21 =
      draw_intended(stream, plan.geom, plan.intended, plan.dist, plan.eta, plan.alpha, plan.paths);
  ChannelRealization si1 =
      draw_si_far(stream, plan.geom, plan.si, plan.si_dist, plan.eta, plan.alpha, plan.si_paths);
  ChannelRealization si2 =
      draw_si_far(stream, plan.geom, plan.si, plan.si_dist, plan.eta, plan.alpha, plan.si_paths);

  FdTrialSetup s;
  if (plan.trivial_beams) {
    s.u1 = trivial_pair();
    s.u2 = trivial_pair();
  } else {
    int m = plan.geom.tx_antennas;
    double d = plan.geom.spacing;
    double lam1 = select_tx_angle(ch12.phi_t, plan.aod_int, plan.aod_si, m, d);
    double gam2 = select_rx_angle(ch12.phi_r, plan.aoa_int, plan.aoa_si, m, d);
    double lam2 = select_tx_angle(ch21.phi_t, plan.aod_int, plan.aod_si, m, d);
    double gam1 = select_rx_angle(ch21.phi_r, plan.aoa_int, plan.aoa_si, m, d);
    s.u1 = build_pair(lam1, gam1, plan.geom);
    s.u2 = build_pair(lam2, gam2, plan.geom);
  }

  s.h12 = effective_scalar(s.u2.w, ch12, s.u1.f);
  s.h21 = effective_scalar(s.u1.w, ch21, s.u2.f);
  s.far1 = effective_scalar(s.u1.w, si1, s.u1.f);
  s.far2 = effective_scalar(s.u2.w, si2, s.u2.f);
  s.near1 = (s.u1.w.transpose() * (plan.near_unit * s.u1.f)).value();
  s.near2 = (s.u2.w.transpose() * (plan.near_unit * s.u2.f)).value();
  return s;
}

void run_trial(const Plan& plan, std::uint64_t t, PlanAccum& acc) {
  RandomStream stream(plan.sub_seed, t);
  const std::size_t n_rho = plan.rho_w.size();
  const std::size_t n_p = plan.kappa.size();

  switch (plan.sc.scheme) {
    case Scheme::FdNc:
    case Scheme::FdCoherent: {
      FdTrialSetup s = fd_trial_setup(plan, stream);
      BlockDraws draws = draw_block_inputs(stream, plan.sc, plan.noise_w, 0);
      for (std::size_t p = 0; p < n_p; ++p) {
        Complex hsi1 = plan.kappa[p] * s.near1 + s.far1;
        Complex hsi2 = plan.kappa[p] * s.near2 + s.far2;
        for (std::size_t r = 0; r < n_rho; ++r) {
          BlockResult res =
              plan.sc.scheme == Scheme::FdNc
                  ? fdnc_block(s.h12, s.h21, hsi1, hsi2, draws, plan.sc, plan.rho_w[r])
                  : fd_coherent_block(s.h12, s.h21, hsi1, hsi2, draws, plan.sc, plan.rho_w[r],
                                      plan.noise_w);
          accumulate(acc, p * n_rho + r, res);
        }
      }
      break;
    }
    case Scheme::HdNc:
    case Scheme::HdCoherent: {
      int direction = static_cast<int>(t % 2);
      ChannelRealization ch =
          draw_intended(stream, plan.geom, plan.intended, plan.dist, plan.eta, plan.alpha, plan.paths);

      BeamformerPair link;
      if (plan.trivial_beams) {
        link = trivial_pair();
      } else {
        int m = plan.geom.tx_antennas;
        double d = plan.geom.spacing;
        double lam = select_tx_angle(ch.phi_t, plan.aod_int, plan.aod_si, m, d);
        double gam = select_rx_angle(ch.phi_r, plan.aoa_int, plan.aoa_si, m, d);
        link = build_pair(lam, gam, plan.geom);
      }
      Complex h_eff = effective_scalar(link.w, ch, link.f);

      BlockDraws draws = draw_block_inputs(stream, plan.sc, plan.noise_w, direction);
      for (std::size_t r = 0; r < n_rho; ++r) {
        BlockResult res =
            plan.sc.scheme == Scheme::HdNc
                ? hdnc_block(h_eff, draws, plan.sc, direction, static_cast<int>(t % 2),
                             plan.rho_w[r])
                : hd_coherent_block(h_eff, draws, plan.sc, direction, plan.rho_w[r], plan.noise_w);
        // Half-duplex links do not see the loop-back channel: the same result
        // stands for every isolation setting.
        for (std::size_t p = 0; p < n_p; ++p) accumulate(acc, p * n_rho + r, res);
      }
      break;
    }
  }
}

PlanAccum run_plan(const Plan& plan, int workers) {
  const std::size_t cells = plan.rho_w.size() * plan.kappa.size();
  PlanAccum total(cells);
  if (!plan.feasible) {
    total.infeasible = plan.trials;
    return total;
  }

  const std::uint64_t chunk = 512;
  std::atomic<std::uint64_t> next{0};
  std::mutex merge_mutex;

  auto work = [&]() {
    PlanAccum local(cells);
    while (true) {
      std::uint64_t begin = next.fetch_add(chunk);
      if (begin >= plan.trials) break;
      std::uint64_t end = std::min(begin + chunk, plan.trials);
      for (std::uint64_t t = begin; t < end; ++t) {
        try {
          run_trial(plan, t, local);
        } catch (const FeasibleSetEmpty&) {
          ++local.infeasible;
        }
      }
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    total.merge(local);
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return total;
}

}  // namespace

std::vector<BerRecord> run_sweep(const SweepConfig& cfg) {
  if (cfg.schemes.empty() || cfg.rho_dbm.empty() || cfg.array_sizes.empty() || cfg.p_is_db.empty())
    throw std::invalid_argument("run_sweep: empty grid axis");

  std::vector<BerRecord> records;
  records.reserve(cfg.schemes.size() * cfg.array_sizes.size() * cfg.p_is_db.size() *
                  cfg.rho_dbm.size());

  for (Scheme scheme : cfg.schemes) {
    for (int m : cfg.array_sizes) {
      Plan plan = build_plan(cfg, scheme, m);
      PlanAccum acc = run_plan(plan, cfg.workers);
      for (std::size_t p = 0; p < cfg.p_is_db.size(); ++p) {
        for (std::size_t r = 0; r < cfg.rho_dbm.size(); ++r) {
          std::size_t cell = p * cfg.rho_dbm.size() + r;
          BerRecord rec;
          rec.scheme = std::string(scheme_name(scheme));
          rec.rho_dbm = cfg.rho_dbm[r];
          rec.m = m;
          rec.n = m;
          rec.p_is_db = cfg.p_is_db[p];
          rec.q = cfg.q;
          rec.avg_bits = cfg.avg_bits;
          rec.trials = cfg.trials;
          rec.bits = acc.bits[cell];
          rec.bit_errors = acc.errors[cell];
          rec.ber = rec.bits > 0 ? static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits)
                                 : 0.0;
          rec.ci95 = rec.bits > 0
                         ? 1.96 * std::sqrt(rec.ber * (1.0 - rec.ber) / static_cast<double>(rec.bits))
                         : 0.0;
          rec.infeasible = acc.infeasible;
          rec.censored = rec.bit_errors < 10;
          records.push_back(std::move(rec));
        }
      }
    }
  }
  return records;
}

BeamReport beam_report(const SweepConfig& cfg, int m, std::uint64_t trial) {
  Plan plan = build_plan(cfg, Scheme::FdNc, m);
  BeamReport report;
  report.trial = trial;
  report.m = m;
  report.p_is_db = cfg.p_is_db.front();
  report.feasible = plan.feasible;
  if (!plan.feasible) return report;

  RandomStream stream(plan.sub_seed, trial);
  FdTrialSetup s = fd_trial_setup(plan, stream);
  report.tx_angle_1 = s.u1.tx_angle;
  report.rx_angle_1 = s.u1.rx_angle;
  report.tx_angle_2 = s.u2.tx_angle;
  report.rx_angle_2 = s.u2.rx_angle;
  report.h12 = s.h12;
  report.h21 = s.h21;
  report.h_si1 = plan.kappa.front() * s.near1 + s.far1;
  report.h_si2 = plan.kappa.front() * s.near2 + s.far2;
  return report;
}

std::string csv_header() {
  return "scheme,rho_dbm,m,n,p_is_db,q,avg_bits,trials,bits,bit_errors,ber,ci95,infeasible,censored";
}

void emit_csv(const std::vector<BerRecord>& records, std::ostream& os) {
  os << csv_header() << '\n';
  char buf[320];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf),
                  "%s,%.10g,%d,%d,%.10g,%d,%.10g,%llu,%llu,%llu,%.6e,%.6e,%llu,%d",
                  r.scheme.c_str(), r.rho_dbm, r.m, r.n, r.p_is_db, r.q, r.avg_bits,
                  static_cast<unsigned long long>(r.trials),
                  static_cast<unsigned long long>(r.bits),
                  static_cast<unsigned long long>(r.bit_errors), r.ber, r.ci95,
                  static_cast<unsigned long long>(r.infeasible), r.censored ? 1 : 0);
    os << buf << '\n';
  }
}

void emit_csv(const std::vector<BerRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  emit_csv(records, out);
}

std::vector<BerRecord> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: empty input");
  if (trim(line) != csv_header()) throw std::runtime_error("csv: unexpected header");

  std::vector<BerRecord> records;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    auto fields = split_list(line);
    if (fields.size() != 14) throw std::runtime_error("csv: expected 14 fields");
    BerRecord r;
    r.scheme = fields[0];
    scheme_from_name(r.scheme);
    r.rho_dbm = parse_double(fields[1], "rho_dbm");
    r.m = static_cast<int>(parse_int(fields[2], "m"));
    r.n = static_cast<int>(parse_int(fields[3], "n"));
    r.p_is_db = parse_double(fields[4], "p_is_db");
    r.q = static_cast<int>(parse_int(fields[5], "q"));
    r.avg_bits = parse_double(fields[6], "avg_bits");
    r.trials = static_cast<std::uint64_t>(parse_int(fields[7], "trials"));
    r.bits = static_cast<std::uint64_t>(parse_int(fields[8], "bits"));
    r.bit_errors = static_cast<std::uint64_t>(parse_int(fields[9], "bit_errors"));
    r.ber = parse_double(fields[10], "ber");
    r.ci95 = parse_double(fields[11], "ci95");
    r.infeasible = static_cast<std::uint64_t>(parse_int(fields[12], "infeasible"));
    r.censored = parse_int(fields[13], "censored") != 0;
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace fdnc
