#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "petz/nmr.hpp"
#include "petz/petz.hpp"

namespace petz::harness {

struct NamedState {
  std::string label;
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};

  ComplexVector vector() const;
  DensityMatrix density() const;
};

/// Normalizes (alpha, beta); throws InvalidState for a zero vector.
NamedState make_state(std::string label, Complex alpha, Complex beta);

/// Known labels: "0", "1", "+", "-", "psi" (0.9268|0> + 0.3754i|1>, normalized).
NamedState named_state(std::string_view label);

enum class Backend { Kraus, Dqc, Pulses };

Backend parse_backend(std::string_view name);
std::string_view backend_name(Backend backend);

struct SweepConfig {
  DampingKind channel = DampingKind::AmplitudeDamping;
  std::vector<double> p_grid;
  std::vector<double> epsilons;
  std::vector<NamedState> input_states;
  Backend backend = Backend::Kraus;

  /// Throws ConfigError when a grid is empty or a value is out of range.
  void validate() const;
};

/// p in {0, 0.05, ..., 1}, eps in {0.2, 0.5, 0.8}; states |0>,|1>,|+>,psi for
/// AD and |+>,|->,|0>,psi for PD.
SweepConfig default_config(DampingKind channel);

/// Flat `key = value` text; lists comma-separated; `#` starts a comment.
/// Keys: channel, backend, p_grid, epsilons, states. Missing keys keep the
/// defaults of `base`.
SweepConfig parse_config(std::string_view text, const SweepConfig& base);
SweepConfig load_config(const std::filesystem::path& path, const SweepConfig& base);

struct SweepRecord {
  std::string state;
  DampingKind channel = DampingKind::AmplitudeDamping;
  Backend backend = Backend::Kraus;
  double p = 0;
  std::optional<double> epsilon;  // empty for damped-only rows
  double f_damped = 0;
  std::optional<double> f_recovered;
};

/// One damped-only record per (state, p) and one recovery record per
/// (state, eps, p), ordered by state (config order), eps (damped rows first,
/// then ascending), p ascending.
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg);

struct FidelityPair {
  double damped = 0;
  double recovered = 0;
};

/// Fidelities of one grid point against the input state.
FidelityPair evaluate_point(DampingKind channel, Backend backend, const NamedState& state, double p,
                            std::optional<double> epsilon);

std::string format_csv(const std::vector<SweepRecord>& records);
void emit_csv(const std::vector<SweepRecord>& records, const std::filesystem::path& path);

/// One panel per input state: damped curve plus one curve per epsilon.
std::string render_svg(const std::vector<SweepRecord>& records);
void emit_plot(const std::vector<SweepRecord>& records, const std::filesystem::path& path);

struct CheckResult {
  std::string name;
  bool passed = false;
  double max_residual = 0;
  double threshold = 0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  std::string to_text() const;
};

struct VerifyOptions {
  /// Replaces every residual threshold when set.
  std::optional<double> tolerance;
  /// Closed-form AD Petz map under test; swap in a perturbed one for negative controls.
  std::function<KrausChannel(double, double)> ad_closed_form = petz_ad_closed;
  std::function<KrausChannel(double, double)> pd_closed_form = petz_pd_closed;
  unsigned seed = 20240917u;
};

/// Runs the invariant suites of channels, petz, dqc and nmr.
VerifyReport verify_all(const VerifyOptions& options = {});

}  // namespace petz::harness
