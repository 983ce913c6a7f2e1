#pragma once

// Idealized three-spin NMR backend: rotating-frame Hamiltonian, a pulse-level
// intermediate representation, and compilation of DQC programs to pulses.
//
// Qubits are numbered from 1 (F = 1, H = 2, C = 3). In the full register the
// lowest-numbered qubit is the most significant tensor factor. Relaxation is
// not simulated; T1/T2 are carried as metadata only.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "petz/dqc.hpp"
#include "petz/petz.hpp"

namespace petz::nmr {

struct SpinSystem {
  std::vector<std::string> labels;
  std::vector<double> offsets_hz;  // omega_i - omega_i^rf
  Eigen::MatrixXd couplings_hz;    // symmetric J_ij
  std::vector<double> t1_s;        // NaN when unknown
  std::vector<double> t2_s;

  int size() const noexcept { return static_cast<int>(labels.size()); }
  double coupling(int qi, int qj) const;
  void set_coupling(int qi, int qj, double hz);
};

/// 19F (1), 1H (2), 13C (3) with J_FH = 47.50, J_CH = 161.42, J_FC = -191.90 Hz,
/// zero offsets.
SpinSystem default_spin_system();

/// H = -sum 2 pi nu_i I_iz + sum_{i<j} 2 pi J_ij I_iz I_jz over the `active`
/// qubits (all when empty), in angular units.
ComplexMatrix hamiltonian(const SpinSystem& sys, std::vector<int> active = {});

/// exp(-i H t) on the full register.
ComplexMatrix evolve_free(const SpinSystem& sys, double duration_s);

enum class Axis { X, Y, Z, MinusX, MinusY };

Axis parse_axis(std::string_view name);
std::string_view axis_name(Axis axis);

/// exp(-i angle sigma_axis / 2) on `qubit` of an n-qubit register.
ComplexMatrix rotation_unitary(int qubit, Axis axis, double angle, int n_qubits);

struct Rotation {
  int qubit = 1;
  Axis axis = Axis::X;
  double angle = 0;
};
struct FreeEvolution {
  double duration = 0;
};
struct Barrier {};

using PulseElement = std::variant<Rotation, FreeEvolution, Barrier>;

class PulseSequence {
 public:
  PulseSequence& rotate(int qubit, Axis axis, double angle);
  PulseSequence& free(double duration);
  PulseSequence& barrier();
  PulseSequence& append(const PulseSequence& other);

  const std::vector<PulseElement>& elements() const noexcept { return elements_; }
  bool empty() const noexcept { return elements_.empty(); }
  std::size_t size() const noexcept { return elements_.size(); }
  double total_free_time() const;

  /// One element per line: `ROT q=<i> axis=<a> angle=<radians>`, `FREE t=<seconds>`, `BARRIER`.
  std::string to_text() const;
  static PulseSequence from_text(std::string_view text);

 private:
  std::vector<PulseElement> elements_;
};

/// Product of element unitaries in playback order.
ComplexMatrix sequence_unitary(const PulseSequence& seq, const SpinSystem& sys);

DensityMatrix simulate_sequence(const PulseSequence& seq, const SpinSystem& sys, const DensityMatrix& rho);

/// min over phi of ||U1 - e^{i phi} U2||_F, attained at phi = arg Tr(U2^dag U1).
double phase_aligned_distance(const ComplexMatrix& u1, const ComplexMatrix& u2);
bool equiv_up_to_phase(const ComplexMatrix& u1, const ComplexMatrix& u2, double tol);

struct PpsState {
  double kappa = 1;
  DensityMatrix state = DensityMatrix::basis(8, 0);
};

/// (1 - kappa)/8 * 1 + kappa |000><000|
PpsState pps_state(double kappa);

// Building blocks. All act on the full register of `sys`.

/// ZZ evolution between a and b for 1/(2|J_ab|), other spins refocused by a
/// pi pulse pair at the midpoint.
PulseSequence coupled_evolution(const SpinSystem& sys, int a, int b);
PulseSequence cz_block(const SpinSystem& sys, int control, int target);
PulseSequence cnot_block(const SpinSystem& sys, int control, int target);
PulseSequence controlled_pauli_block(const SpinSystem& sys, Pauli pauli, int control, int target);

/// ZYZ Euler decomposition of a 2x2 unitary; returns the pulse list and
/// reports the y-rotation angle (in [0, pi]).
PulseSequence single_qubit_block(const ComplexMatrix& u, int qubit, double* y_angle = nullptr);

/// Rotations taking |0> to alpha|0> + beta|1> up to global phase.
PulseSequence state_preparation(int qubit, Complex alpha, Complex beta);

/// Pulses realizing assemble_unitary(program) on (system, ancilla).
struct CompiledStage {
  PulseSequence sequence;
  double v_angle = 0;  // y-rotation angle of the V block
  double w_angle = 0;  // y-rotation angle of the W block
};

CompiledStage compile_stage(const DqcProgram& program, const SpinSystem& sys, int system_qubit, int ancilla_qubit);

inline constexpr int kSystemQubit = 1;
inline constexpr int kChannelAncilla = 2;
inline constexpr int kRecoveryAncilla = 3;

/// Damping stage on (F, H).
CompiledStage compile_channel_stage(DampingKind kind, double p, const SpinSystem& sys);
/// Petz recovery stage on (F, C).
CompiledStage compile_recovery_stage(DampingKind kind, double p, double epsilon, const SpinSystem& sys);

/// Damping stage, barrier, recovery stage.
PulseSequence compile_ad_sequence(double p, double epsilon, const SpinSystem& sys = default_spin_system());
PulseSequence compile_pd_sequence(double p, double epsilon, const SpinSystem& sys = default_spin_system());

/// Embeds a (system, ancilla) operator into the full register.
ComplexMatrix embed_pair(const ComplexMatrix& op, int first, int second, int n_qubits);

}  // namespace petz::nmr
