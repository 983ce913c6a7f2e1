#pragma once

#include <string>
#include <vector>

#include "petz/linalg.hpp"

namespace petz {

inline constexpr double kTpTol = 1e-9;

/// How the Kraus list is normalized.
///  - TracePreserving: sum K^dag K = 1 (a channel).
///  - Unital: sum K K^dag = 1 (the adjoint of a channel).
///  - SupportRestricted: sum K^dag K is a projector; trace is preserved only on
///    its support (Petz maps built from a rank-deficient Lambda(sigma)).
enum class MapKind { TracePreserving, Unital, SupportRestricted };

/// Ordered Kraus operators, each dim_out x dim_in. Immutable after construction.
class KrausChannel {
 public:
  /// Checks shapes only. Use make_channel() for a validated CPTP map.
  KrausChannel(std::vector<ComplexMatrix> kraus, std::string label, MapKind kind = MapKind::TracePreserving);

  Eigen::Index dim_in() const noexcept { return dim_in_; }
  Eigen::Index dim_out() const noexcept { return dim_out_; }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }
  const std::string& label() const noexcept { return label_; }
  MapKind kind() const noexcept { return kind_; }
  bool support_deficient() const noexcept { return kind_ == MapKind::SupportRestricted; }
  std::size_t size() const noexcept { return kraus_.size(); }

  /// Frobenius norm of sum K^dag K - 1.
  double tp_residual() const;
  /// Frobenius norm of sum K K^dag - 1.
  double unital_residual() const;

 private:
  std::vector<ComplexMatrix> kraus_;
  std::string label_;
  MapKind kind_;
  Eigen::Index dim_in_ = 0;
  Eigen::Index dim_out_ = 0;
};

/// Validated channel: uniform shapes and trace preservation within tp_tol.
KrausChannel make_channel(std::vector<ComplexMatrix> kraus, std::string label, double tp_tol = kTpTol);

ComplexMatrix apply(const KrausChannel& channel, const ComplexMatrix& op);
DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho);

/// Kraus list {K_m^dag}; unital, not trace preserving in general.
KrausChannel adjoint(const KrausChannel& channel);

/// (R o Lambda): Kraus list {R_i K_m} ordered with m fastest.
KrausChannel compose(const KrausChannel& recovery, const KrausChannel& channel);

/// Drops Kraus operators with Frobenius norm below tol.
KrausChannel prune(const KrausChannel& channel, double tol = 1e-12);

/// Unnormalized Choi matrix sum_ij |i><j| (x) Lambda(|i><j|); input factor left.
struct ChoiMatrix {
  ComplexMatrix matrix;
  Eigen::Index dim_in = 0;
  Eigen::Index dim_out = 0;

  double min_eigenvalue() const;
  /// ||Tr_out C - 1||_F
  double tp_residual() const;
};

ChoiMatrix choi(const KrausChannel& channel);
double choi_distance(const KrausChannel& a, const KrausChannel& b);

KrausChannel identity_channel(Eigen::Index dim = 2);
KrausChannel amplitude_damping(double p);
KrausChannel phase_damping(double p);

struct DpiResult {
  double d_before = 0;
  double d_after = 0;
  bool holds = false;
};

DpiResult check_dpi(const KrausChannel& channel, const DensityMatrix& rho, const DensityMatrix& sigma,
                    double tol = 1e-8);

}  // namespace petz
