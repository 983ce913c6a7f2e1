#include "petz/petz.hpp"

#include <cmath>
#include <sstream>

namespace petz {

namespace {

void require_open_unit(double eps, const char* who) {
  if (!(eps > 0.0 && eps < 1.0))
    throw Error(ErrorKind::OutOfRange, std::string(who) + ": epsilon must lie in (0, 1) for a full-rank reference");
}

void require_closed_unit(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::OutOfRange, std::string(who) + ": p must lie in [0, 1]");
}

std::string petz_label(const char* name, double p, double eps) {
  std::ostringstream os;
  os << "Petz_" << name << "(p=" << p << ",eps=" << eps << ")";
  return os.str();
}

}  // namespace

ReferenceState reference_state(ReferenceBasis basis, double epsilon) {
  require_open_unit(epsilon, "reference_state");
  ComplexVector first(2), second(2);
  if (basis == ReferenceBasis::Computational) {
    first << 1.0, 0.0;
    second << 0.0, 1.0;
  } else {
    const double h = 1.0 / std::sqrt(2.0);
    first << h, h;
    second << h, -h;
  }
  const ComplexMatrix m = (1.0 - epsilon) * first * first.adjoint() + epsilon * second * second.adjoint();
  return {epsilon, basis, DensityMatrix(m)};
}

PetzCoefficients petz_coefficients(double p, double epsilon) {
  require_closed_unit(p, "petz_coefficients");
  require_open_unit(epsilon, "petz_coefficients");
  PetzCoefficients k;
  const double e = epsilon;
  k.c = std::sqrt((1.0 - e) / (1.0 - (1.0 - p) * e));
  k.a = 1.0 / (std::sqrt(2.0) * std::sqrt(p * e + (2.0 - p) * (1.0 - e)));
  k.b = 1.0 / (std::sqrt(2.0) * std::sqrt(p - p * e + e * (2.0 - p)));
  const double keep = std::sqrt(1.0 - p / 2.0);
  const double flip = std::sqrt(p / 2.0);
  k.lambda_plus = keep * (k.a * std::sqrt(1.0 - e) + k.b * std::sqrt(e));
  k.lambda_minus = keep * (k.a * std::sqrt(1.0 - e) - k.b * std::sqrt(e));
  k.mu_plus = flip * (k.a * std::sqrt(e) + k.b * std::sqrt(1.0 - e));
  k.mu_minus = flip * (k.a * std::sqrt(e) - k.b * std::sqrt(1.0 - e));
  return k;
}

KrausChannel petz_general(const KrausChannel& channel, const DensityMatrix& sigma, double rank_tol) {
  if (sigma.dim() != channel.dim_in()) throw Error(ErrorKind::DimMismatch, "petz_general: reference state dimension");
  const ComplexMatrix image = apply(channel, sigma.matrix());
  const ComplexMatrix inv_sqrt = psd_inv_sqrt(image, rank_tol);
  const ComplexMatrix sqrt_sigma = psd_sqrt(sigma.matrix());

  std::vector<ComplexMatrix> ops;
  ops.reserve(channel.size());
  for (const auto& k : channel.kraus()) ops.emplace_back(sqrt_sigma * k.adjoint() * inv_sqrt);

  const ComplexMatrix projector = support_projector(image, rank_tol);
  const bool full_rank = (projector - ComplexMatrix::Identity(image.rows(), image.cols())).norm() < 1e-12;
  return KrausChannel(std::move(ops), "Petz[" + channel.label() + "]",
                      full_rank ? MapKind::TracePreserving : MapKind::SupportRestricted);
}

KrausChannel petz_ad_closed(double p, double epsilon) {
  require_closed_unit(p, "petz_ad_closed");
  require_open_unit(epsilon, "petz_ad_closed");
  const double denom = 1.0 - (1.0 - p) * epsilon;
  ComplexMatrix m0 = ComplexMatrix::Zero(2, 2);
  m0(0, 0) = std::sqrt((1.0 - epsilon) / denom);
  m0(1, 1) = 1.0;
  ComplexMatrix m1 = ComplexMatrix::Zero(2, 2);
  m1(1, 0) = std::sqrt(p * epsilon / denom);
  return make_channel({m0, m1}, petz_label("AD", p, epsilon), 1e-10);
}

KrausChannel petz_pd_closed(double p, double epsilon) {
  const PetzCoefficients k = petz_coefficients(p, epsilon);
  ComplexMatrix m0(2, 2), m1(2, 2);
  m0 << k.lambda_plus, k.lambda_minus, k.lambda_minus, k.lambda_plus;
  m1 << k.mu_plus, k.mu_minus, -k.mu_minus, -k.mu_plus;
  return make_channel({m0, m1}, petz_label("PD", p, epsilon), 1e-10);
}

bool channels_equal(const KrausChannel& a, const KrausChannel& b, double tol) { return choi_distance(a, b) <= tol; }

}  // namespace petz

namespace petz {

DampingKind parse_damping_kind(std::string_view name) {
  if (name == "ad" || name == "AD") return DampingKind::AmplitudeDamping;
  if (name == "pd" || name == "PD") return DampingKind::PhaseDamping;
  throw Error(ErrorKind::ConfigError, "unknown channel '" + std::string(name) + "' (expected ad or pd)");
}

std::string_view short_name(DampingKind kind) { return kind == DampingKind::AmplitudeDamping ? "ad" : "pd"; }

ReferenceBasis reference_basis(DampingKind kind) {
  return kind == DampingKind::AmplitudeDamping ? ReferenceBasis::Computational : ReferenceBasis::PlusMinus;
}

KrausChannel damping_channel(DampingKind kind, double p) {
  return kind == DampingKind::AmplitudeDamping ? amplitude_damping(p) : phase_damping(p);
}

KrausChannel closed_form_petz(DampingKind kind, double p, double epsilon) {
  return kind == DampingKind::AmplitudeDamping ? petz_ad_closed(p, epsilon) : petz_pd_closed(p, epsilon);
}

}  // namespace petz
