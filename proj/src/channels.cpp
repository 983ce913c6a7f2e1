#include "petz/channels.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace petz {

namespace {

std::string format_param(const char* name, double value) {
  std::ostringstream os;
  os << name << "(p=" << value << ")";
  return os.str();
}

void require_probability(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::OutOfRange, std::string(who) + ": p must lie in [0, 1]");
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus, std::string label, MapKind kind)
    : kraus_(std::move(kraus)), label_(std::move(label)), kind_(kind) {
  if (kraus_.empty()) throw Error(ErrorKind::ShapeMismatch, "channel needs at least one Kraus operator");
  dim_out_ = kraus_.front().rows();
  dim_in_ = kraus_.front().cols();
  if (dim_in_ == 0 || dim_out_ == 0) throw Error(ErrorKind::ShapeMismatch, "empty Kraus operator");
  for (const auto& k : kraus_)
    if (k.rows() != dim_out_ || k.cols() != dim_in_)
      throw Error(ErrorKind::ShapeMismatch, "Kraus operators of " + label_ + " have non-uniform shapes");
}

double KrausChannel::tp_residual() const {
  ComplexMatrix sum = ComplexMatrix::Zero(dim_in_, dim_in_);
  for (const auto& k : kraus_) sum.noalias() += k.adjoint() * k;
  return (sum - ComplexMatrix::Identity(dim_in_, dim_in_)).norm();
}

double KrausChannel::unital_residual() const {
  ComplexMatrix sum = ComplexMatrix::Zero(dim_out_, dim_out_);
  for (const auto& k : kraus_) sum.noalias() += k * k.adjoint();
  return (sum - ComplexMatrix::Identity(dim_out_, dim_out_)).norm();
}

KrausChannel make_channel(std::vector<ComplexMatrix> kraus, std::string label, double tp_tol) {
  KrausChannel channel(std::move(kraus), std::move(label), MapKind::TracePreserving);
  const double residual = channel.tp_residual();
  if (residual > tp_tol) {
    std::ostringstream os;
    os << channel.label() << ": ||sum K^dag K - 1|| = " << residual;
    throw Error(ErrorKind::NotTracePreserving, os.str());
  }
  return channel;
}

ComplexMatrix apply(const KrausChannel& channel, const ComplexMatrix& op) {
  if (op.rows() != channel.dim_in() || op.cols() != channel.dim_in())
    throw Error(ErrorKind::DimMismatch, "apply: operator dimension differs from channel input");
  ComplexMatrix out = ComplexMatrix::Zero(channel.dim_out(), channel.dim_out());
  for (const auto& k : channel.kraus()) out.noalias() += k * op * k.adjoint();
  return out;
}

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho) {
  return DensityMatrix(apply(channel, rho.matrix()));
}

KrausChannel adjoint(const KrausChannel& channel) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(channel.size());
  for (const auto& k : channel.kraus()) ops.emplace_back(k.adjoint());
  const MapKind kind = channel.kind() == MapKind::Unital ? MapKind::TracePreserving : MapKind::Unital;
  return KrausChannel(std::move(ops), channel.label() + "^dag", kind);
}

KrausChannel compose(const KrausChannel& recovery, const KrausChannel& channel) {
  if (channel.dim_out() != recovery.dim_in())
    throw Error(ErrorKind::DimMismatch, "compose: output of " + channel.label() + " does not match input of " +
                                            recovery.label());
  std::vector<ComplexMatrix> ops;
  ops.reserve(recovery.size() * channel.size());
  for (const auto& r : recovery.kraus())
    for (const auto& k : channel.kraus()) ops.emplace_back(r * k);

  MapKind kind = MapKind::SupportRestricted;
  if (recovery.kind() == MapKind::TracePreserving && channel.kind() == MapKind::TracePreserving)
    kind = MapKind::TracePreserving;
  else if (recovery.kind() == MapKind::Unital && channel.kind() == MapKind::Unital)
    kind = MapKind::Unital;
  return KrausChannel(std::move(ops), recovery.label() + " o " + channel.label(), kind);
}

KrausChannel prune(const KrausChannel& channel, double tol) {
  std::vector<ComplexMatrix> ops;
  for (const auto& k : channel.kraus())
    if (k.norm() >= tol) ops.push_back(k);
  if (ops.empty()) ops.push_back(ComplexMatrix::Zero(channel.dim_out(), channel.dim_in()));
  return KrausChannel(std::move(ops), channel.label(), channel.kind());
}

double ChoiMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((matrix + matrix.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double ChoiMatrix::tp_residual() const {
  ComplexMatrix reduced = ComplexMatrix::Zero(dim_in, dim_in);
  for (Eigen::Index i = 0; i < dim_in; ++i)
    for (Eigen::Index j = 0; j < dim_in; ++j) reduced(i, j) = matrix.block(i * dim_out, j * dim_out, dim_out, dim_out).trace();
  return (reduced - ComplexMatrix::Identity(dim_in, dim_in)).norm();
}

ChoiMatrix choi(const KrausChannel& channel) {
  const Eigen::Index din = channel.dim_in();
  const Eigen::Index dout = channel.dim_out();
  ChoiMatrix c{ComplexMatrix::Zero(din * dout, din * dout), din, dout};
  // Block (i, j) is Lambda(|i><j|) = sum_m K_m|i><j|K_m^dag.
  for (const auto& k : channel.kraus())
    for (Eigen::Index i = 0; i < din; ++i)
      for (Eigen::Index j = 0; j < din; ++j)
        c.matrix.block(i * dout, j * dout, dout, dout).noalias() += k.col(i) * k.col(j).adjoint();
  return c;
}

double choi_distance(const KrausChannel& a, const KrausChannel& b) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out())
    throw Error(ErrorKind::DimMismatch, "choi_distance: channel dimensions differ");
  return (choi(a).matrix - choi(b).matrix).norm();
}

KrausChannel identity_channel(Eigen::Index dim) {
  return make_channel({ComplexMatrix::Identity(dim, dim)}, "id");
}

KrausChannel amplitude_damping(double p) {
  require_probability(p, "amplitude_damping");
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - p);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(p);
  return make_channel({k0, k1}, format_param("AD", p));
}

KrausChannel phase_damping(double p) {
  require_probability(p, "phase_damping");
  const ComplexMatrix k0 = std::sqrt(1.0 - p / 2.0) * ComplexMatrix::Identity(2, 2);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 0) = std::sqrt(p / 2.0);
  k1(1, 1) = -std::sqrt(p / 2.0);
  return make_channel({k0, k1}, format_param("PD", p));
}

DpiResult check_dpi(const KrausChannel& channel, const DensityMatrix& rho, const DensityMatrix& sigma, double tol) {
  DpiResult r;
  r.d_before = relative_entropy(rho, sigma);
  r.d_after = relative_entropy(apply(channel, rho), apply(channel, sigma));
  if (std::isinf(r.d_before))
    r.holds = true;
  else
    r.holds = r.d_after <= r.d_before + tol;
  return r;
}

}  // namespace petz
