#include "petz/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace petz::harness {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> parse_numbers(std::string_view key, std::string_view s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ConfigError, std::string(key) + ": not a number: '" + item + "'");
    }
  }
  return out;
}

DensityMatrix system_reduced_state(const DensityMatrix& full) {
  const std::array<Eigen::Index, 3> dims{2, 2, 2};
  return partial_trace(full, 0, dims);
}

}  // namespace

ComplexVector NamedState::vector() const {
  ComplexVector v(2);
  v << alpha, beta;
  return v;
}

DensityMatrix NamedState::density() const { return DensityMatrix::pure(vector()); }

NamedState make_state(std::string label, Complex alpha, Complex beta) {
  const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (n == 0.0) throw Error(ErrorKind::InvalidState, "state '" + label + "' has zero norm");
  return {std::move(label), alpha / n, beta / n};
}

NamedState named_state(std::string_view label) {
  const double h = 1.0 / std::sqrt(2.0);
  if (label == "0") return make_state("0", 1.0, 0.0);
  if (label == "1") return make_state("1", 0.0, 1.0);
  if (label == "+") return make_state("+", h, h);
  if (label == "-") return make_state("-", h, -h);
  // The printed amplitudes have norm^2 = 0.99989; normalized here.
  if (label == "psi") return make_state("psi", 0.9268, Complex(0.0, 0.3754));
  throw Error(ErrorKind::ConfigError, "unknown input state '" + std::string(label) + "'");
}

Backend parse_backend(std::string_view name) {
  if (name == "kraus") return Backend::Kraus;
  if (name == "dqc") return Backend::Dqc;
  if (name == "pulses") return Backend::Pulses;
  throw Error(ErrorKind::ConfigError, "unknown backend '" + std::string(name) + "' (expected kraus, dqc or pulses)");
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::Kraus: return "kraus";
    case Backend::Dqc: return "dqc";
    case Backend::Pulses: return "pulses";
  }
  return "?";
}

void SweepConfig::validate() const {
  if (p_grid.empty()) throw Error(ErrorKind::ConfigError, "p_grid is empty");
  if (epsilons.empty()) throw Error(ErrorKind::ConfigError, "epsilons is empty");
  if (input_states.empty()) throw Error(ErrorKind::ConfigError, "no input states");
  for (double p : p_grid)
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::ConfigError, "p outside [0, 1]: " + std::to_string(p));
  for (double e : epsilons)
    if (!(e > 0.0 && e < 1.0)) throw Error(ErrorKind::ConfigError, "epsilon outside (0, 1): " + std::to_string(e));
}

SweepConfig default_config(DampingKind channel) {
  SweepConfig cfg;
  cfg.channel = channel;
  for (int i = 0; i <= 20; ++i) cfg.p_grid.push_back(i / 20.0);
  cfg.epsilons = {0.2, 0.5, 0.8};
  const auto labels = channel == DampingKind::AmplitudeDamping ? std::vector<std::string>{"0", "1", "+", "psi"}
                                                                : std::vector<std::string>{"+", "-", "0", "psi"};
  for (const auto& l : labels) cfg.input_states.push_back(named_state(l));
  return cfg;
}

SweepConfig parse_config(std::string_view text, const SweepConfig& base) {
  SweepConfig cfg = base;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "channel") {
      cfg.channel = parse_damping_kind(value);
    } else if (key == "backend") {
      cfg.backend = parse_backend(value);
    } else if (key == "p_grid") {
      cfg.p_grid = parse_numbers(key, value);
    } else if (key == "epsilons") {
      cfg.epsilons = parse_numbers(key, value);
    } else if (key == "states") {
      cfg.input_states.clear();
      for (const auto& label : split_list(value)) cfg.input_states.push_back(named_state(label));
    } else {
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_config(const std::filesystem::path& path, const SweepConfig& base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

FidelityPair evaluate_point(DampingKind channel, Backend backend, const NamedState& state, double p,
                            std::optional<double> epsilon) {
  const DensityMatrix rho = state.density();
  const ComplexVector psi = state.vector();
  FidelityPair out;

  switch (backend) {
    case Backend::Kraus: {
      const DensityMatrix damped = apply(damping_channel(channel, p), rho);
      out.damped = fidelity(damped, psi);
      if (epsilon) out.recovered = fidelity(apply(closed_form_petz(channel, p, *epsilon), damped), psi);
      break;
    }
    case Backend::Dqc: {
      const DensityMatrix damped = simulate(plan_dqc(damping_channel(channel, p)), rho).output;
      out.damped = fidelity(damped, psi);
      if (epsilon)
        out.recovered = fidelity(simulate(plan_dqc(closed_form_petz(channel, p, *epsilon)), damped).output, psi);
      break;
    }
    case Backend::Pulses: {
      const nmr::SpinSystem sys = nmr::default_spin_system();
      const DensityMatrix initial = nmr::pps_state(1.0).state;
      nmr::PulseSequence seq = nmr::state_preparation(nmr::kSystemQubit, state.alpha, state.beta);
      seq.append(nmr::compile_channel_stage(channel, p, sys).sequence);
      out.damped = fidelity(system_reduced_state(nmr::simulate_sequence(seq, sys, initial)), psi);
      if (epsilon) {
        seq.barrier();
        seq.append(nmr::compile_recovery_stage(channel, p, *epsilon, sys).sequence);
        out.recovered = fidelity(system_reduced_state(nmr::simulate_sequence(seq, sys, initial)), psi);
      }
      break;
    }
  }
  return out;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<double> ps = cfg.p_grid;
  std::vector<double> eps = cfg.epsilons;
  std::sort(ps.begin(), ps.end());
  std::sort(eps.begin(), eps.end());

  std::vector<SweepRecord> records;
  for (const auto& state : cfg.input_states) {
    for (double p : ps) {
      const auto f = evaluate_point(cfg.channel, cfg.backend, state, p, std::nullopt);
      records.push_back({state.label, cfg.channel, cfg.backend, p, std::nullopt, f.damped, std::nullopt});
    }
    for (double e : eps) {
      for (double p : ps) {
        const auto f = evaluate_point(cfg.channel, cfg.backend, state, p, e);
        records.push_back({state.label, cfg.channel, cfg.backend, p, e, f.damped, f.recovered});
      }
    }
  }
  return records;
}

}  // namespace petz::harness
