#include "petz/nmr.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace petz::nmr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAngleEps = 1e-14;

void require_qubit(int qubit, int n, const char* who) {
  if (qubit < 1 || qubit > n) throw Error(ErrorKind::DimMismatch, std::string(who) + ": qubit index out of range");
}

// Bit of `qubit` (1-based, qubit 1 most significant) in basis index `index`.
int bit_of(Eigen::Index index, int qubit, int n) { return static_cast<int>((index >> (n - qubit)) & 1); }

ComplexMatrix pauli_for(Axis axis) {
  switch (axis) {
    case Axis::X:
    case Axis::MinusX: return pauli_matrix(Pauli::X);
    case Axis::Y:
    case Axis::MinusY: return pauli_matrix(Pauli::Y);
    case Axis::Z: return pauli_matrix(Pauli::Z);
  }
  return pauli_matrix(Pauli::I);
}

double signed_angle(Axis axis, double angle) {
  return (axis == Axis::MinusX || axis == Axis::MinusY) ? -angle : angle;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string_view field_value(std::string_view token, std::string_view key) {
  if (token.substr(0, key.size()) != key) throw Error(ErrorKind::ConfigError, "pulse text: expected " + std::string(key));
  return token.substr(key.size());
}

double parse_double(std::string_view s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigError, "pulse text: bad number '" + std::string(s) + "'");
  }
}

}  // namespace

double SpinSystem::coupling(int qi, int qj) const {
  require_qubit(qi, size(), "coupling");
  require_qubit(qj, size(), "coupling");
  return couplings_hz(qi - 1, qj - 1);
}

void SpinSystem::set_coupling(int qi, int qj, double hz) {
  require_qubit(qi, size(), "set_coupling");
  require_qubit(qj, size(), "set_coupling");
  couplings_hz(qi - 1, qj - 1) = hz;
  couplings_hz(qj - 1, qi - 1) = hz;
}

SpinSystem default_spin_system() {
  SpinSystem sys;
  sys.labels = {"F", "H", "C"};
  sys.offsets_hz = {0.0, 0.0, 0.0};
  sys.couplings_hz = Eigen::MatrixXd::Zero(3, 3);
  sys.set_coupling(1, 2, 47.50);    // J_FH
  sys.set_coupling(2, 3, 161.42);   // J_CH
  sys.set_coupling(1, 3, -191.90);  // J_FC
  const double unknown = std::numeric_limits<double>::quiet_NaN();
  sys.t1_s.assign(3, unknown);
  sys.t2_s.assign(3, unknown);
  return sys;
}

ComplexMatrix hamiltonian(const SpinSystem& sys, std::vector<int> active) {
  if (active.empty())
    for (int q = 1; q <= sys.size(); ++q) active.push_back(q);
  for (int q : active) require_qubit(q, sys.size(), "hamiltonian");
  const int n = static_cast<int>(active.size());
  const Eigen::Index dim = Eigen::Index{1} << n;

  // All terms are products of I_z = Z/2, so H is diagonal in the computational basis.
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    auto iz = [&](int k) { return bit_of(s, k + 1, n) ? -0.5 : 0.5; };
    double e = 0;
    for (int i = 0; i < n; ++i) e -= kTwoPi * sys.offsets_hz[static_cast<std::size_t>(active[i] - 1)] * iz(i);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) e += kTwoPi * sys.coupling(active[i], active[j]) * iz(i) * iz(j);
    h(s, s) = e;
  }
  return h;
}

ComplexMatrix evolve_free(const SpinSystem& sys, double duration_s) {
  if (!(duration_s >= 0.0)) throw Error(ErrorKind::OutOfRange, "evolve_free: duration must be non-negative");
  const ComplexMatrix h = hamiltonian(sys);
  ComplexMatrix u = ComplexMatrix::Zero(h.rows(), h.cols());
  for (Eigen::Index s = 0; s < h.rows(); ++s) u(s, s) = std::exp(Complex(0.0, -h(s, s).real() * duration_s));
  return u;
}

Axis parse_axis(std::string_view name) {
  if (name == "x") return Axis::X;
  if (name == "y") return Axis::Y;
  if (name == "z") return Axis::Z;
  if (name == "-x") return Axis::MinusX;
  if (name == "-y") return Axis::MinusY;
  throw Error(ErrorKind::BadAxis, "unknown rotation axis '" + std::string(name) + "'");
}

std::string_view axis_name(Axis axis) {
  switch (axis) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
    case Axis::MinusX: return "-x";
    case Axis::MinusY: return "-y";
  }
  return "?";
}

ComplexMatrix rotation_unitary(int qubit, Axis axis, double angle, int n_qubits) {
  require_qubit(qubit, n_qubits, "rotation_unitary");
  const double theta = signed_angle(axis, angle);
  const ComplexMatrix single = std::cos(theta / 2.0) * ComplexMatrix::Identity(2, 2) -
                               Complex(0.0, std::sin(theta / 2.0)) * pauli_for(axis);
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int q = 1; q <= n_qubits; ++q) out = tensor(out, q == qubit ? single : ComplexMatrix::Identity(2, 2));
  return out;
}

PulseSequence& PulseSequence::rotate(int qubit, Axis axis, double angle) {
  if (!std::isfinite(angle)) throw Error(ErrorKind::OutOfRange, "rotation angle must be finite");
  elements_.emplace_back(Rotation{qubit, axis, angle});
  return *this;
}

PulseSequence& PulseSequence::free(double duration) {
  if (!(duration >= 0.0) || !std::isfinite(duration))
    throw Error(ErrorKind::OutOfRange, "free evolution duration must be finite and non-negative");
  elements_.emplace_back(FreeEvolution{duration});
  return *this;
}

PulseSequence& PulseSequence::barrier() {
  elements_.emplace_back(Barrier{});
  return *this;
}

PulseSequence& PulseSequence::append(const PulseSequence& other) {
  elements_.insert(elements_.end(), other.elements_.begin(), other.elements_.end());
  return *this;
}

double PulseSequence::total_free_time() const {
  double t = 0;
  for (const auto& e : elements_)
    if (const auto* f = std::get_if<FreeEvolution>(&e)) t += f->duration;
  return t;
}

std::string PulseSequence::to_text() const {
  std::ostringstream os;
  for (const auto& e : elements_) {
    if (const auto* r = std::get_if<Rotation>(&e))
      os << "ROT q=" << r->qubit << " axis=" << axis_name(r->axis) << " angle=" << format_double(r->angle) << "\n";
    else if (const auto* f = std::get_if<FreeEvolution>(&e))
      os << "FREE t=" << format_double(f->duration) << "\n";
    else
      os << "BARRIER\n";
  }
  return os.str();
}

PulseSequence PulseSequence::from_text(std::string_view text) {
  PulseSequence seq;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::vector<std::string> tokens;
    for (std::string w; words >> w;) tokens.push_back(w);
    if (tokens.empty() || tokens[0].starts_with('#')) continue;
    if (tokens[0] == "BARRIER" && tokens.size() == 1) {
      seq.barrier();
    } else if (tokens[0] == "FREE" && tokens.size() == 2) {
      seq.free(parse_double(field_value(tokens[1], "t=")));
    } else if (tokens[0] == "ROT" && tokens.size() == 4) {
      const int q = static_cast<int>(parse_double(field_value(tokens[1], "q=")));
      seq.rotate(q, parse_axis(field_value(tokens[2], "axis=")), parse_double(field_value(tokens[3], "angle=")));
    } else {
      throw Error(ErrorKind::ConfigError, "pulse text: cannot parse line '" + line + "'");
    }
  }
  return seq;
}

ComplexMatrix sequence_unitary(const PulseSequence& seq, const SpinSystem& sys) {
  const int n = sys.size();
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (const auto& e : seq.elements()) {
    if (const auto* r = std::get_if<Rotation>(&e))
      u = rotation_unitary(r->qubit, r->axis, r->angle, n) * u;
    else if (const auto* f = std::get_if<FreeEvolution>(&e))
      u = evolve_free(sys, f->duration) * u;
  }
  return u;
}

DensityMatrix simulate_sequence(const PulseSequence& seq, const SpinSystem& sys, const DensityMatrix& rho) {
  if (rho.dim() != (Eigen::Index{1} << sys.size()))
    throw Error(ErrorKind::DimMismatch, "simulate_sequence: state dimension differs from the spin register");
  const ComplexMatrix u = sequence_unitary(seq, sys);
  return DensityMatrix(u * rho.matrix() * u.adjoint());
}

double phase_aligned_distance(const ComplexMatrix& u1, const ComplexMatrix& u2) {
  if (u1.rows() != u2.rows() || u1.cols() != u2.cols())
    throw Error(ErrorKind::DimMismatch, "phase_aligned_distance: shapes differ");
  const Complex overlap = (u2.adjoint() * u1).trace();
  const Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (u1 - phase * u2).norm();
}

bool equiv_up_to_phase(const ComplexMatrix& u1, const ComplexMatrix& u2, double tol) {
  if (unitarity_defect(u1) > 1e-8 || unitarity_defect(u2) > 1e-8)
    throw Error(ErrorKind::NotUnitary, "equiv_up_to_phase: inputs must be unitary");
  return phase_aligned_distance(u1, u2) <= tol;
}

PpsState pps_state(double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw Error(ErrorKind::OutOfRange, "pps_state: kappa must lie in [0, 1]");
  ComplexMatrix m = (1.0 - kappa) / 8.0 * ComplexMatrix::Identity(8, 8);
  m(0, 0) += kappa;
  return {kappa, DensityMatrix(m)};
}

ComplexMatrix embed_pair(const ComplexMatrix& op, int first, int second, int n_qubits) {
  require_qubit(first, n_qubits, "embed_pair");
  require_qubit(second, n_qubits, "embed_pair");
  if (first == second) throw Error(ErrorKind::DimMismatch, "embed_pair: qubits must differ");
  if (op.rows() != 4 || op.cols() != 4) throw Error(ErrorKind::DimMismatch, "embed_pair: expects a 4x4 operator");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      // Spectator bits must agree.
      bool same = true;
      for (int q = 1; q <= n_qubits && same; ++q)
        if (q != first && q != second && bit_of(r, q, n_qubits) != bit_of(c, q, n_qubits)) same = false;
      if (!same) continue;
      const int lr = 2 * bit_of(r, first, n_qubits) + bit_of(r, second, n_qubits);
      const int lc = 2 * bit_of(c, first, n_qubits) + bit_of(c, second, n_qubits);
      out(r, c) = op(lr, lc);
    }
  }
  return out;
}

PulseSequence coupled_evolution(const SpinSystem& sys, int a, int b) {
  const double j = sys.coupling(a, b);
  if (j == 0.0) throw Error(ErrorKind::OutOfRange, "coupled_evolution: qubits are not J-coupled");
  const double t = 1.0 / (2.0 * std::abs(j));
  PulseSequence seq;
  std::vector<int> spectators;
  for (int q = 1; q <= sys.size(); ++q)
    if (q != a && q != b) spectators.push_back(q);
  if (spectators.empty()) return seq.free(t);
  seq.free(t / 2.0);
  for (int q : spectators) seq.rotate(q, Axis::X, kPi);
  seq.free(t / 2.0);
  for (int q : spectators) seq.rotate(q, Axis::MinusX, kPi);
  return seq;
}

PulseSequence cz_block(const SpinSystem& sys, int control, int target) {
  // exp(-i s pi/4 ZZ) Rz(-s pi/2) (x) Rz(-s pi/2) = e^{-i s pi/4} CZ with s = sign(J).
  const double s = sys.coupling(control, target) > 0 ? 1.0 : -1.0;
  PulseSequence seq = coupled_evolution(sys, control, target);
  seq.rotate(control, Axis::Z, -s * kPi / 2.0);
  seq.rotate(target, Axis::Z, -s * kPi / 2.0);
  return seq;
}

PulseSequence cnot_block(const SpinSystem& sys, int control, int target) {
  // Ry(pi/2) Z Ry(-pi/2) = X on the target.
  PulseSequence seq;
  seq.rotate(target, Axis::MinusY, kPi / 2.0);
  seq.append(cz_block(sys, control, target));
  seq.rotate(target, Axis::Y, kPi / 2.0);
  return seq;
}

PulseSequence controlled_pauli_block(const SpinSystem& sys, Pauli pauli, int control, int target) {
  switch (pauli) {
    case Pauli::I: return {};
    case Pauli::Z: return cz_block(sys, control, target);
    case Pauli::X: return cnot_block(sys, control, target);
    case Pauli::Y: {
      // Rz(pi/2) X Rz(-pi/2) = Y on the target.
      PulseSequence seq;
      seq.rotate(target, Axis::Z, -kPi / 2.0);
      seq.append(cnot_block(sys, control, target));
      seq.rotate(target, Axis::Z, kPi / 2.0);
      return seq;
    }
  }
  return {};
}

PulseSequence single_qubit_block(const ComplexMatrix& u, int qubit, double* y_angle) {
  if (u.rows() != 2 || u.cols() != 2) throw Error(ErrorKind::DimMismatch, "single_qubit_block: expects 2x2");
  if (unitarity_defect(u) > 1e-8) throw Error(ErrorKind::NotUnitary, "single_qubit_block: input is not unitary");
  // u = e^{i g} Rz(a) Ry(b) Rz(c); su = u / sqrt(det u) is in SU(2):
  //   su = [[e^{-i(a+c)/2} cos(b/2), -e^{-i(a-c)/2} sin(b/2)],
  //         [e^{ i(a-c)/2} sin(b/2),  e^{ i(a+c)/2} cos(b/2)]]
  const ComplexMatrix su = u / std::sqrt(u.determinant());
  const double cb = std::abs(su(1, 1));
  const double sb = std::abs(su(1, 0));
  const double b = 2.0 * std::atan2(sb, cb);
  double sum = 0, diff = 0;  // a + c, a - c
  if (cb > 1e-12) sum = 2.0 * std::arg(su(1, 1));
  if (sb > 1e-12) diff = 2.0 * std::arg(su(1, 0));
  const double a = (sum + diff) / 2.0;
  const double c = (sum - diff) / 2.0;
  if (y_angle) *y_angle = b;

  PulseSequence seq;
  if (std::abs(c) > kAngleEps) seq.rotate(qubit, Axis::Z, c);
  if (std::abs(b) > kAngleEps) seq.rotate(qubit, Axis::Y, b);
  if (std::abs(a) > kAngleEps) seq.rotate(qubit, Axis::Z, a);
  return seq;
}

PulseSequence state_preparation(int qubit, Complex alpha, Complex beta) {
  const double theta = 2.0 * std::atan2(std::abs(beta), std::abs(alpha));
  const double phi = std::abs(beta) > 0 && std::abs(alpha) > 0 ? std::arg(beta) - std::arg(alpha) : 0.0;
  PulseSequence seq;
  if (std::abs(theta) > kAngleEps) seq.rotate(qubit, Axis::Y, theta);
  if (std::abs(phi) > kAngleEps) seq.rotate(qubit, Axis::Z, phi);
  return seq;
}

namespace {

// sum_j P_j (x) |j><j| = (P_0 (x) 1)(1 (x) diag(1, ph))(C-Q) where P_0 P_1 = ph Q.
PulseSequence controlled_sum_block(const SpinSystem& sys, const std::vector<Pauli>& paulis, int system_qubit,
                                   int ancilla_qubit) {
  const ComplexMatrix product = pauli_matrix(paulis[0]) * pauli_matrix(paulis[1]);
  Pauli q = Pauli::I;
  Complex phase = 1.0;
  for (Pauli cand : kPaulis) {
    const Complex overlap = (pauli_matrix(cand).adjoint() * product).trace() / 2.0;
    if (std::abs(overlap) > 0.5) {
      q = cand;
      phase = overlap;
    }
  }
  PulseSequence seq = controlled_pauli_block(sys, q, ancilla_qubit, system_qubit);
  // diag(1, e^{i t}) = e^{i t/2} Rz(t)
  const double t = std::arg(phase);
  if (std::abs(t) > kAngleEps) seq.rotate(ancilla_qubit, Axis::Z, t);
  switch (paulis[0]) {
    case Pauli::I: break;
    case Pauli::X: seq.rotate(system_qubit, Axis::X, kPi); break;
    case Pauli::Y: seq.rotate(system_qubit, Axis::Y, kPi); break;
    case Pauli::Z: seq.rotate(system_qubit, Axis::Z, kPi); break;
  }
  return seq;
}

}  // namespace

CompiledStage compile_stage(const DqcProgram& program, const SpinSystem& sys, int system_qubit, int ancilla_qubit) {
  if (program.u.size() != 2 || program.u_tilde.size() != 2)
    throw Error(ErrorKind::UnsupportedRank, "compile_stage: expects a single-ancilla program");
  CompiledStage stage;
  stage.sequence.append(single_qubit_block(program.v, ancilla_qubit, &stage.v_angle));
  stage.sequence.append(controlled_sum_block(sys, program.u, system_qubit, ancilla_qubit));
  stage.sequence.append(single_qubit_block(program.w, ancilla_qubit, &stage.w_angle));
  stage.sequence.append(controlled_sum_block(sys, program.u_tilde, system_qubit, ancilla_qubit));
  return stage;
}

CompiledStage compile_channel_stage(DampingKind kind, double p, const SpinSystem& sys) {
  return compile_stage(plan_dqc(damping_channel(kind, p)), sys, kSystemQubit, kChannelAncilla);
}

CompiledStage compile_recovery_stage(DampingKind kind, double p, double epsilon, const SpinSystem& sys) {
  return compile_stage(plan_dqc(closed_form_petz(kind, p, epsilon)), sys, kSystemQubit, kRecoveryAncilla);
}

namespace {

PulseSequence compile_full(DampingKind kind, double p, double epsilon, const SpinSystem& sys) {
  if (!(p >= 0.0 && p <= 1.0) || !(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorKind::OutOfRange, "compile: need p in [0, 1] and epsilon in (0, 1)");
  PulseSequence seq = compile_channel_stage(kind, p, sys).sequence;
  seq.barrier();
  seq.append(compile_recovery_stage(kind, p, epsilon, sys).sequence);
  return seq;
}

}  // namespace

PulseSequence compile_ad_sequence(double p, double epsilon, const SpinSystem& sys) {
  return compile_full(DampingKind::AmplitudeDamping, p, epsilon, sys);
}

PulseSequence compile_pd_sequence(double p, double epsilon, const SpinSystem& sys) {
  return compile_full(DampingKind::PhaseDamping, p, epsilon, sys);
}

}  // namespace petz::nmr
