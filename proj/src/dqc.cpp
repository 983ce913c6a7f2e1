#include "petz/dqc.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>

namespace petz {

namespace {

constexpr double kActiveTol = 1e-12;
constexpr Eigen::Index kAncillaDim = 2;

ComplexMatrix make_pauli(Pauli p) {
  const Complex i(0.0, 1.0);
  ComplexMatrix m(2, 2);
  switch (p) {
    case Pauli::I: m << 1.0, 0.0, 0.0, 1.0; break;
    case Pauli::X: m << 0.0, 1.0, 1.0, 0.0; break;
    case Pauli::Y: m << 0.0, -i, i, 0.0; break;
    case Pauli::Z: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return m;
}

ComplexMatrix ket_bra(Eigen::Index dim, Eigen::Index row, Eigen::Index col) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return m;
}

// Orthonormal completion of the columns of `m` not flagged in `known`.
ComplexMatrix complete_columns(ComplexMatrix m, const std::vector<bool>& known) {
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> done;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    if (known[static_cast<std::size_t>(j)]) done.push_back(j);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (known[static_cast<std::size_t>(j)]) continue;
    ComplexVector best;
    double best_norm = -1;
    for (Eigen::Index e = 0; e < n; ++e) {
      ComplexVector r = ComplexVector::Unit(n, e);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index d : done) r -= m.col(d) * m.col(d).dot(r);
      if (r.norm() > best_norm) {
        best_norm = r.norm();
        best = r;
      }
    }
    m.col(j) = best / best_norm;
    done.push_back(j);
  }
  return m;
}

struct Layout {
  std::vector<PauliExpansion> expansions;
  std::vector<Pauli> active;
  std::vector<bool> padded;
};

std::optional<Layout> try_layout(const std::vector<ComplexMatrix>& kraus, const std::vector<Pauli>& posts) {
  Layout layout;
  std::array<bool, 4> used{};
  for (std::size_t m = 0; m < kraus.size(); ++m) {
    layout.expansions.push_back(pauli_expand(kraus[m], posts[m]));
    for (std::size_t j = 0; j < 4; ++j)
      if (std::abs(layout.expansions.back().coefficients[j]) > kActiveTol) used[j] = true;
  }
  for (std::size_t j = 0; j < 4; ++j)
    if (used[j]) layout.active.push_back(kPaulis[j]);
  if (layout.active.size() > kAncillaDim) return std::nullopt;
  layout.padded.assign(layout.active.size(), false);
  // spare slots repeat an active Pauli with zero weight, so an idle branch is a plain identity
  const Pauli pad = layout.active.empty() ? Pauli::I : layout.active.front();
  while (layout.active.size() < kAncillaDim) {
    layout.active.push_back(pad);
    layout.padded.push_back(true);
  }
  return layout;
}

std::string format_complex(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.12g,%.12g)", z.real() == 0.0 ? 0.0 : z.real(), z.imag() == 0.0 ? 0.0 : z.imag());
  return buf;
}

void dump_matrix(std::ostream& os, const std::string& name, const ComplexMatrix& m) {
  os << name << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << " ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << ' ' << format_complex(m(r, c));
    os << "\n";
  }
}

}  // namespace

const ComplexMatrix& pauli_matrix(Pauli p) {
  static const std::array<ComplexMatrix, 4> table{make_pauli(Pauli::I), make_pauli(Pauli::X), make_pauli(Pauli::Y),
                                                  make_pauli(Pauli::Z)};
  return table[static_cast<std::size_t>(p)];
}

std::string_view pauli_name(Pauli p) {
  switch (p) {
    case Pauli::I: return "I";
    case Pauli::X: return "X";
    case Pauli::Y: return "Y";
    case Pauli::Z: return "Z";
  }
  return "?";
}

ComplexMatrix PauliExpansion::reconstruct() const {
  ComplexMatrix l = ComplexMatrix::Zero(2, 2);
  for (std::size_t j = 0; j < 4; ++j) l += coefficients[j] * pauli_matrix(kPaulis[j]);
  return pauli_matrix(post_factor) * l;
}

int PauliExpansion::active_count(double tol) const {
  return static_cast<int>(std::count_if(coefficients.begin(), coefficients.end(),
                                        [tol](Complex z) { return std::abs(z) > tol; }));
}

bool PauliExpansion::real_coefficients(double tol) const {
  return std::all_of(coefficients.begin(), coefficients.end(), [tol](Complex z) { return std::abs(z.imag()) <= tol; });
}

PauliExpansion pauli_expand(const ComplexMatrix& k, Pauli post_factor) {
  if (k.rows() != 2 || k.cols() != 2) throw Error(ErrorKind::DimMismatch, "pauli_expand: expects a 2x2 operator");
  PauliExpansion e;
  e.post_factor = post_factor;
  const ComplexMatrix l = pauli_matrix(post_factor).adjoint() * k;
  for (std::size_t j = 0; j < 4; ++j) e.coefficients[j] = (pauli_matrix(kPaulis[j]).adjoint() * l).trace() / 2.0;
  return e;
}

std::array<Pauli, 4> post_factor_preference(const ComplexMatrix& k) {
  std::array<Pauli, 4> order = kPaulis;
  std::array<PauliExpansion, 4> exp;
  for (std::size_t i = 0; i < 4; ++i) exp[i] = pauli_expand(k, kPaulis[i]);
  std::stable_sort(order.begin(), order.end(), [&](Pauli a, Pauli b) {
    const auto& ea = exp[static_cast<std::size_t>(a)];
    const auto& eb = exp[static_cast<std::size_t>(b)];
    if (ea.active_count() != eb.active_count()) return ea.active_count() < eb.active_count();
    return ea.real_coefficients() && !eb.real_coefficients();
  });
  return order;
}

PauliExpansion pauli_decompose(const ComplexMatrix& k) { return pauli_expand(k, post_factor_preference(k).front()); }

ComplexMatrix DqcProgram::combination(std::size_t m) const {
  ComplexMatrix l = ComplexMatrix::Zero(2, 2);
  for (std::size_t j = 0; j < u.size(); ++j)
    l += w(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) * v(static_cast<Eigen::Index>(j), 0) *
         pauli_matrix(u[j]);
  return l;
}

ComplexMatrix DqcProgram::kraus(std::size_t m) const { return pauli_matrix(u_tilde[m]) * combination(m); }

ComplexMatrix solve_combination_matrix(const ComplexVector& v_column, const ComplexMatrix& beta, double tol) {
  const Eigen::Index n = v_column.size();
  if (beta.rows() != n || beta.cols() != n) throw Error(ErrorKind::DimMismatch, "solve_combination_matrix: shape");
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  std::vector<bool> known(static_cast<std::size_t>(n), true);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::abs(v_column(j)) <= kActiveTol) {
      if (beta.col(j).cwiseAbs().maxCoeff() > kActiveTol)
        throw Error(ErrorKind::VColumnZero, "V_j0 vanishes but beta_j is non-zero for j=" + std::to_string(j));
      known[static_cast<std::size_t>(j)] = false;
      continue;
    }
    w.col(j) = beta.col(j) / v_column(j);
  }
  if (std::find(known.begin(), known.end(), false) != known.end()) w = complete_columns(w, known);
  const double defect = unitarity_defect(w);
  if (defect > tol) {
    std::ostringstream os;
    os << "combination matrix is not unitary (defect " << defect << ")";
    throw Error(ErrorKind::WNotUnitary, os.str());
  }
  return w;
}

DqcProgram plan_dqc(const KrausChannel& channel) {
  if (channel.dim_in() != 2 || channel.dim_out() != 2)
    throw Error(ErrorKind::DimMismatch, "plan_dqc: only qubit channels are supported");
  if (channel.size() > kAncillaDim)
    throw Error(ErrorKind::UnsupportedRank, "plan_dqc: more than two Kraus operators need a second ancilla");
  if (channel.tp_residual() > 1e-8)
    throw Error(ErrorKind::NotTracePreserving, "plan_dqc: " + channel.label() + " is not trace preserving");

  std::vector<ComplexMatrix> kraus = channel.kraus();
  while (kraus.size() < kAncillaDim) kraus.push_back(ComplexMatrix::Zero(2, 2));

  const auto pref0 = post_factor_preference(kraus[0]);
  const auto pref1 = post_factor_preference(kraus[1]);
  std::optional<Error> last_error;
  for (Pauli p0 : pref0) {
    for (Pauli p1 : pref1) {
      auto layout = try_layout(kraus, {p0, p1});
      if (!layout) continue;

      ComplexMatrix beta(kAncillaDim, kAncillaDim);
      for (Eigen::Index m = 0; m < kAncillaDim; ++m)
        for (Eigen::Index j = 0; j < kAncillaDim; ++j)
          beta(m, j) = layout->padded[static_cast<std::size_t>(j)]
                           ? Complex(0.0)
                           : layout->expansions[static_cast<std::size_t>(m)]
                                 .coefficients[static_cast<std::size_t>(layout->active[static_cast<std::size_t>(j)])];

      ComplexVector v_column(kAncillaDim);
      for (Eigen::Index j = 0; j < kAncillaDim; ++j) v_column(j) = beta.col(j).norm();
      v_column /= v_column.norm();

      try {
        DqcProgram prog;
        prog.label = channel.label();
        prog.u = layout->active;
        prog.u_tilde = {p0, p1};
        prog.v = complete_unitary(v_column);
        prog.w = solve_combination_matrix(v_column, beta);
        prog.decomposition = std::move(layout->expansions);
        return prog;
      } catch (const Error& e) {
        last_error = e;
      }
    }
  }
  if (last_error) throw *last_error;
  throw Error(ErrorKind::WNotUnitary, "plan_dqc: no Pauli layout of " + channel.label() + " fits one ancilla");
}

ComplexMatrix controlled_sum(std::span<const Pauli> unitaries) {
  const auto n = static_cast<Eigen::Index>(unitaries.size());
  ComplexMatrix out = ComplexMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j)
    out += tensor(pauli_matrix(unitaries[static_cast<std::size_t>(j)]), ket_bra(n, j, j));
  return out;
}

ComplexMatrix assemble_unitary(const DqcProgram& program) {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  return controlled_sum(program.u_tilde) * tensor(id, program.w) * controlled_sum(program.u) * tensor(id, program.v);
}

std::vector<ComplexMatrix> effective_kraus(const DqcProgram& program) {
  const ComplexMatrix g = assemble_unitary(program);
  const Eigen::Index na = program.v.rows();
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index m = 0; m < na; ++m) {
    ComplexMatrix k(2, 2);
    for (Eigen::Index r = 0; r < 2; ++r)
      for (Eigen::Index c = 0; c < 2; ++c) k(r, c) = g(r * na + m, c * na);
    ops.push_back(std::move(k));
  }
  return ops;
}

DqcResult simulate(const DqcProgram& program, const DensityMatrix& rho) {
  if (rho.dim() != 2) throw Error(ErrorKind::DimMismatch, "simulate: expects a qubit input state");
  const Eigen::Index na = program.v.rows();
  const ComplexMatrix g = assemble_unitary(program);
  const ComplexMatrix total = g * tensor(rho.matrix(), ket_bra(na, 0, 0)) * g.adjoint();

  std::vector<BranchOutcome> branches;
  for (Eigen::Index m = 0; m < na; ++m) {
    ComplexMatrix block(2, 2);
    for (Eigen::Index r = 0; r < 2; ++r)
      for (Eigen::Index c = 0; c < 2; ++c) block(r, c) = total(r * na + m, c * na + m);
    const double prob = block.trace().real();
    branches.push_back({static_cast<int>(m), std::move(block), prob});
  }
  const std::array<Eigen::Index, 2> dims{2, na};
  return {partial_trace(DensityMatrix(total), 0, dims), std::move(branches)};
}

DensityMatrix simulate_cascade(std::span<const DqcProgram> programs, const DensityMatrix& rho) {
  DensityMatrix state = rho;
  for (const auto& prog : programs) state = simulate(prog, state).output;
  return state;
}

double verify(const DqcProgram& program, const KrausChannel& channel) {
  const KrausChannel simulated(effective_kraus(program), "dqc[" + program.label + "]");
  return choi_distance(simulated, channel);
}

std::string dump_program(const DqcProgram& program) {
  std::ostringstream os;
  os << "# dqc program " << program.label << "\n";
  os << "ancilla_qubits " << program.ancilla_qubits << "\n";
  for (std::size_t j = 0; j < program.u.size(); ++j)
    dump_matrix(os, "U[" + std::to_string(j) + "] " + std::string(pauli_name(program.u[j])), pauli_matrix(program.u[j]));
  for (std::size_t m = 0; m < program.u_tilde.size(); ++m)
    dump_matrix(os, "Ut[" + std::to_string(m) + "] " + std::string(pauli_name(program.u_tilde[m])),
                pauli_matrix(program.u_tilde[m]));
  dump_matrix(os, "V", program.v);
  dump_matrix(os, "W", program.w);
  return os.str();
}

}  // namespace petz
