#pragma once

#include <string_view>

#include "petz/channels.hpp"

namespace petz {

enum class ReferenceBasis { Computational, PlusMinus };

/// Full-rank qubit reference state (1-eps)|a><a| + eps|b><b| with
/// (a, b) = (0, 1) for Computational and (+, -) for PlusMinus.
struct ReferenceState {
  double epsilon = 0.5;
  ReferenceBasis basis = ReferenceBasis::Computational;
  DensityMatrix state = DensityMatrix::maximally_mixed(2);
};

ReferenceState reference_state(ReferenceBasis basis, double epsilon);

/// Scalars appearing in the closed-form Petz Kraus operators.
/// `c` belongs to the amplitude-damping map; the rest to phase damping.
struct PetzCoefficients {
  double c = 1;
  double lambda_plus = 1;
  double lambda_minus = 0;
  double mu_plus = 0;
  double mu_minus = 0;
  double a = 0;
  double b = 0;
};

PetzCoefficients petz_coefficients(double p, double epsilon);

/// Petz map sigma^{1/2} Lambda^dag[Lambda(sigma)^{-1/2} (.) Lambda(sigma)^{-1/2}] sigma^{1/2}
/// in Kraus form M_m = sigma^{1/2} K_m^dag Lambda(sigma)^{-1/2}, ordered like the
/// source channel. A rank-deficient Lambda(sigma) is pseudo-inverted and the
/// result is flagged MapKind::SupportRestricted.
KrausChannel petz_general(const KrausChannel& channel, const DensityMatrix& sigma, double rank_tol = kRankTol);

/// Closed form for amplitude damping with a Computational reference state:
/// M0 = diag(c, 1), M1 = sqrt(p eps / (1 - (1-p) eps)) |1><0|.
KrausChannel petz_ad_closed(double p, double epsilon);

/// Closed form for phase damping with a PlusMinus reference state:
/// M0 = [[l+, l-], [l-, l+]], M1 = [[m+, m-], [-m-, -m+]].
KrausChannel petz_pd_closed(double p, double epsilon);

/// Channel equality via Choi matrices: ||C1 - C2||_F <= tol.
bool channels_equal(const KrausChannel& a, const KrausChannel& b, double tol = 1e-8);

}  // namespace petz

namespace petz {

/// The two damping families studied, each paired with its natural reference basis.
enum class DampingKind { AmplitudeDamping, PhaseDamping };

DampingKind parse_damping_kind(std::string_view name);  // "ad" | "pd"
std::string_view short_name(DampingKind kind);          // "ad" | "pd"
ReferenceBasis reference_basis(DampingKind kind);
KrausChannel damping_channel(DampingKind kind, double p);
KrausChannel closed_form_petz(DampingKind kind, double p, double epsilon);

}  // namespace petz
