#pragma once

// Duality-quantum-computing lowering of a rank-2 qubit channel.
//
// Each Kraus operator is factored as K_m = Ut_m L_m with L_m = sum_j beta_j^m U_j
// over Pauli unitaries. One ancilla qubit carries the index j (after V) and
// then m (after W):
//
//   |psi>|0> --V--> sum_j V_j0 |psi>|j> --cU--> sum_j V_j0 U_j|psi>|j>
//            --W--> sum_m L_m|psi>|m>   --cUt--> sum_m K_m|psi>|m>
//
// Gauge: V_j0 = ||(beta_j^m)_m||_2 (real, non-negative) and W_mj = beta_j^m / V_j0.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "petz/channels.hpp"

namespace petz {

enum class Pauli : int { I = 0, X = 1, Y = 2, Z = 3 };

inline constexpr std::array<Pauli, 4> kPaulis{Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

const ComplexMatrix& pauli_matrix(Pauli p);
std::string_view pauli_name(Pauli p);

/// K = post_factor * sum_j coefficients[j] * P_j, P ordered (I, X, Y, Z).
struct PauliExpansion {
  Pauli post_factor = Pauli::I;
  std::array<Complex, 4> coefficients{};

  ComplexMatrix reconstruct() const;
  int active_count(double tol = 1e-12) const;
  bool real_coefficients(double tol = 1e-12) const;
};

/// Expansion with a fixed post-factor: beta_j = Tr(P_j^dag Ut^dag K) / 2.
PauliExpansion pauli_expand(const ComplexMatrix& k, Pauli post_factor);

/// Expansion with the preferred post-factor: fewest active terms, then real
/// coefficients, then Pauli order.
PauliExpansion pauli_decompose(const ComplexMatrix& k);

/// Post-factors for `k` in order of preference (see pauli_decompose).
std::array<Pauli, 4> post_factor_preference(const ComplexMatrix& k);

struct DqcProgram {
  std::string label;
  std::vector<Pauli> u;        // U_j, controlled on ancilla |j>
  std::vector<Pauli> u_tilde;  // Ut_m, controlled on ancilla |m>
  ComplexMatrix v;
  ComplexMatrix w;
  int ancilla_qubits = 1;
  std::vector<PauliExpansion> decomposition;  // one entry per Kraus operator

  /// sum_j W_mj V_j0 U_j
  ComplexMatrix combination(std::size_t m) const;
  /// Ut_m * combination(m)
  ComplexMatrix kraus(std::size_t m) const;
};

/// Solves W_mj V_j0 = beta(m, j). Columns with V_j0 = 0 and beta(., j) = 0 are
/// unconstrained and filled by orthonormal completion.
/// Throws VColumnZero or WNotUnitary.
ComplexMatrix solve_combination_matrix(const ComplexVector& v_column, const ComplexMatrix& beta,
                                       double tol = 1e-9);

/// Lowers a qubit channel with at most two Kraus operators (a single operator
/// is padded with zero). Throws UnsupportedRank, NotTracePreserving,
/// WNotUnitary.
DqcProgram plan_dqc(const KrausChannel& channel);

/// sum_j U_j (x) |j><j| on system (x) ancilla.
ComplexMatrix controlled_sum(std::span<const Pauli> unitaries);

/// G = (sum_m Ut_m (x) |m><m|)(1 (x) W)(sum_j U_j (x) |j><j|)(1 (x) V).
ComplexMatrix assemble_unitary(const DqcProgram& program);

/// <m|_anc G |0>_anc for each ancilla outcome m.
std::vector<ComplexMatrix> effective_kraus(const DqcProgram& program);

struct BranchOutcome {
  int ancilla_outcome = 0;
  ComplexMatrix unnormalized_branch;
  double probability = 0;
};

struct DqcResult {
  DensityMatrix output;
  std::vector<BranchOutcome> branches;
};

/// Runs the circuit on rho (x) |0><0| and traces out the ancilla.
DqcResult simulate(const DqcProgram& program, const DensityMatrix& rho);

/// Runs programs in order, each with a fresh ancilla.
DensityMatrix simulate_cascade(std::span<const DqcProgram> programs, const DensityMatrix& rho);

/// Choi distance between the circuit's action on the system and `channel`.
double verify(const DqcProgram& program, const KrausChannel& channel);

/// Text listing of U_j, Ut_m, V, W with 12 significant digits.
std::string dump_program(const DqcProgram& program);

}  // namespace petz
