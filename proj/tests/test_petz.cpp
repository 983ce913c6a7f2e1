#include "support.hpp"

using namespace petz;
using namespace testing;

namespace {

// Closed forms transcribed directly, used as oracles for the library.
std::vector<ComplexMatrix> ad_petz_oracle(double p, double e) {
  const double den = 1 - (1 - p) * e;
  return {diag({std::sqrt((1 - e) / den), 1.0}), mat2(0, 0, std::sqrt(p * e / den), 0)};
}

std::vector<ComplexMatrix> pd_petz_oracle(double p, double e) {
  const double a = 1 / (std::sqrt(2.0) * std::sqrt(p * e + (2 - p) * (1 - e)));
  const double b = 1 / (std::sqrt(2.0) * std::sqrt(p - p * e + e * (2 - p)));
  const double lp = std::sqrt(1 - p / 2) * (a * std::sqrt(1 - e) + b * std::sqrt(e));
  const double lm = std::sqrt(1 - p / 2) * (a * std::sqrt(1 - e) - b * std::sqrt(e));
  const double mp = std::sqrt(p / 2) * (a * std::sqrt(e) + b * std::sqrt(1 - e));
  const double mm = std::sqrt(p / 2) * (a * std::sqrt(e) - b * std::sqrt(1 - e));
  return {mat2(lp, lm, lm, lp), mat2(mp, mm, -mm, -mp)};
}

// Petz map evaluated straight from the superoperator definition.
ComplexMatrix petz_superop(const KrausChannel& ch, const DensityMatrix& sigma, const ComplexMatrix& x) {
  const ComplexMatrix s = psd_sqrt(sigma.matrix());
  const ComplexMatrix g = psd_inv_sqrt(kraus_sum(ch.kraus(), sigma.matrix()));
  ComplexMatrix inner = g * x * g, out = ComplexMatrix::Zero(2, 2);
  for (const auto& k : ch.kraus()) out += k.adjoint() * inner * k;
  return s * out * s;
}

double ad_one_recovered(double p, double e) { return (1 - p) + p * p * e / (1 - (1 - p) * e); }

}  // namespace

TEST_CASE("reference_state examples") {
  CHECK(max_abs(reference_state(ReferenceBasis::Computational, 0.5).state.matrix() - diag({0.5, 0.5})) < 1e-15);
  CHECK(max_abs(reference_state(ReferenceBasis::PlusMinus, 0.5).state.matrix() - diag({0.5, 0.5})) < 1e-15);
  CHECK(max_abs(reference_state(ReferenceBasis::Computational, 0.2).state.matrix() - diag({0.8, 0.2})) < 1e-15);

  const auto pm = reference_state(ReferenceBasis::PlusMinus, 0.2).state.matrix();
  CHECK(max_abs(pm - mat2(0.5, 0.3, 0.3, 0.5)) < 1e-15);
}

TEST_CASE("reference_state is full rank and rejects the endpoints") {
  for (double e : {0.01, 0.2, 0.5, 0.8, 0.99})
    for (auto basis : {ReferenceBasis::Computational, ReferenceBasis::PlusMinus})
      CHECK(herm_eig(reference_state(basis, e).state.matrix()).eigenvalues(0) >= std::min(e, 1 - e) - 1e-12);
  CHECK(error_kind_of([] { reference_state(ReferenceBasis::Computational, 0.0); }) == ErrorKind::OutOfRange);
  CHECK(error_kind_of([] { reference_state(ReferenceBasis::PlusMinus, 1.0); }) == ErrorKind::OutOfRange);
}

TEST_CASE("petz_coefficients match the transcribed formulas and trace preservation") {
  for (double p : coarse_p())
    for (double e : {0.1, 0.2, 0.5, 0.8, 0.9}) {
      const auto k = petz_coefficients(p, e);
      const auto oracle = pd_petz_oracle(p, e);
      CHECK(k.c == doctest::Approx(std::sqrt((1 - e) / (1 - (1 - p) * e))).epsilon(1e-14));
      CHECK(k.c > 0.0);
      CHECK(k.c <= 1.0 + 1e-15);
      CHECK(k.lambda_plus == doctest::Approx(oracle[0](0, 0).real()).epsilon(1e-14));
      CHECK(k.lambda_minus == doctest::Approx(oracle[0](0, 1).real()).epsilon(1e-14));
      CHECK(k.mu_plus == doctest::Approx(oracle[1](0, 0).real()).epsilon(1e-14));
      CHECK(k.mu_minus == doctest::Approx(oracle[1](0, 1).real()).epsilon(1e-14));
      // M0^T M0 + M1^T M1 = 1 reduces to these two scalar identities
      const double diag_sum = k.lambda_plus * k.lambda_plus + k.lambda_minus * k.lambda_minus +
                              k.mu_plus * k.mu_plus + k.mu_minus * k.mu_minus;
      const double off_sum = 2 * (k.lambda_plus * k.lambda_minus + k.mu_plus * k.mu_minus);
      CHECK(std::abs(diag_sum - 1.0) < 1e-10);
      CHECK(std::abs(off_sum) < 1e-10);
    }
}

TEST_CASE("petz_general examples") {
  std::mt19937_64 rng(31);
  const auto sigma = random_density(2, rng);
  CHECK(choi_distance(petz_general(identity_channel(), sigma), identity_channel()) < 1e-10);

  const auto sig02 = reference_state(ReferenceBasis::Computational, 0.2).state;
  CHECK(choi_distance(petz_general(amplitude_damping(0.5), sig02), petz_ad_closed(0.5, 0.2)) < 1e-10);

  const auto sig08 = reference_state(ReferenceBasis::PlusMinus, 0.8).state;
  CHECK(choi_distance(petz_general(phase_damping(0.7), sig08), petz_pd_closed(0.7, 0.8)) < 1e-10);
}

TEST_CASE("petz_general agrees with the superoperator definition") {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 20; ++t) {
    const double p = 0.05 + 0.045 * t;
    const auto ch = t % 2 ? amplitude_damping(p) : phase_damping(p);
    const auto sigma = random_density(2, rng);
    const auto rec = petz_general(ch, sigma);
    CHECK(rec.tp_residual() < 1e-9);
    for (int k = 0; k < 3; ++k) {
      const ComplexMatrix x = random_ginibre(2, 2, rng);
      CHECK(max_abs(petz::apply(rec, x) - petz_superop(ch, sigma, x)) < 1e-10);
    }
  }
}

TEST_CASE("petz_general keeps the source ordering") {
  const auto sigma = reference_state(ReferenceBasis::Computational, 0.3).state;
  const auto rec = petz_general(amplitude_damping(0.4), sigma);
  REQUIRE(rec.size() == 2);
  // M_1 = sigma^{1/2} K_1^dag (...) maps |0> to |1>
  CHECK(std::abs(rec.kraus()[1](1, 0)) > 0.1);
  CHECK(std::abs(rec.kraus()[1](0, 0)) < 1e-15);
}

TEST_CASE("petz_general flags a rank-deficient channel output") {
  const auto sigma = reference_state(ReferenceBasis::Computational, 0.3).state;
  const auto rec = petz_general(amplitude_damping(1.0), sigma);
  CHECK(rec.support_deficient());
  CHECK(rec.kind() == MapKind::SupportRestricted);
  // the closed form is finite at p = 1 and agrees on the support of Lambda(sigma) = |0><0|
  const ComplexMatrix zero = diag({1, 0});
  CHECK(max_abs(petz::apply(rec, zero) - petz::apply(petz_ad_closed(1.0, 0.3), zero)) < 1e-12);
  CHECK_FALSE(petz_general(amplitude_damping(0.5), sigma).support_deficient());
}

TEST_CASE("petz_general rejects a reference of the wrong size") {
  CHECK(error_kind_of([] { petz_general(identity_channel(), DensityMatrix::maximally_mixed(4)); }) ==
        ErrorKind::DimMismatch);
}

TEST_CASE("petz_ad_closed examples") {
  for (double e : epsilons()) CHECK(choi_distance(petz_ad_closed(0.0, e), identity_channel()) < 1e-12);

  const auto both = compose(petz_ad_closed(0.5, 0.8), amplitude_damping(0.5));
  const DensityMatrix out = petz::apply(both, DensityMatrix::basis(2, 1));
  CHECK(fidelity(out, vec2(0, 1)) == doctest::Approx(0.5 + 0.2 / 0.6).epsilon(1e-12));
  CHECK(fidelity(out, vec2(0, 1)) == doctest::Approx(0.8333333333333334).epsilon(1e-12));

  const auto sig = reference_state(ReferenceBasis::Computational, 0.2).state;
  const DensityMatrix back = petz::apply(petz_ad_closed(0.5, 0.2), petz::apply(amplitude_damping(0.5), sig));
  CHECK(std::abs(fidelity(back, sig) - 1.0) < 1e-10);
}

TEST_CASE("petz_ad_closed matches the transcribed Kraus operators") {
  for (double p : coarse_p())
    for (double e : epsilons()) {
      const auto rec = petz_ad_closed(p, e);
      const auto oracle = ad_petz_oracle(p, e);
      CHECK(max_abs(rec.kraus()[0] - oracle[0]) < 1e-14);
      CHECK(max_abs(rec.kraus()[1] - oracle[1]) < 1e-14);
    }
}

TEST_CASE("petz_pd_closed examples") {
  for (double e : epsilons()) {
    const auto rec = petz_pd_closed(0.0, e);
    CHECK(max_abs(rec.kraus()[1]) < 1e-15);
    CHECK(unitarity_defect(rec.kraus()[0]) < 1e-12);
  }

  for (double p : interior_p()) {
    const auto rec = petz_pd_closed(p, 0.5);
    // sigma = 1/2 is a fixed point, so the map collapses to the adjoint: PD itself
    CHECK(choi_distance(rec, phase_damping(p)) < 1e-12);
    const ComplexMatrix plus = mat2(0.5, 0.5, 0.5, 0.5);
    const double f_damped = fidelity(petz::apply(phase_damping(p), DensityMatrix(plus)), vec2(1, 1));
    const double f_rec =
        fidelity(petz::apply(rec, petz::apply(phase_damping(p), DensityMatrix(plus))), vec2(1, 1));
    CHECK(f_rec <= f_damped + 1e-9);
  }

  const auto rec = petz_pd_closed(0.6, 0.2);
  CHECK(rec.tp_residual() < 1e-10);
  CHECK(choi_distance(rec, petz_general(phase_damping(0.6), reference_state(ReferenceBasis::PlusMinus, 0.2).state)) <
        1e-10);
}

TEST_CASE("petz_pd_closed matches the transcribed Kraus operators") {
  for (double p : coarse_p())
    for (double e : {0.2, 0.5, 0.8}) {
      const auto rec = petz_pd_closed(p, e);
      const auto oracle = pd_petz_oracle(p, e);
      CHECK(max_abs(rec.kraus()[0] - oracle[0]) < 1e-14);
      CHECK(max_abs(rec.kraus()[1] - oracle[1]) < 1e-14);
    }
}

TEST_CASE("closed forms reject out-of-range parameters") {
  CHECK(error_kind_of([] { petz_ad_closed(0.5, 0.0); }) == ErrorKind::OutOfRange);
  CHECK(error_kind_of([] { petz_ad_closed(-0.5, 0.5); }) == ErrorKind::OutOfRange);
  CHECK(error_kind_of([] { petz_pd_closed(0.5, 1.0); }) == ErrorKind::OutOfRange);
  CHECK(error_kind_of([] { petz_pd_closed(1.5, 0.5); }) == ErrorKind::OutOfRange);
}

TEST_CASE("channels_equal examples") {
  const auto ad = amplitude_damping(0.3);
  CHECK(channels_equal(ad, ad));
  CHECK_FALSE(channels_equal(ad, phase_damping(0.3)));
  for (int i = 1; i <= 9; ++i)
    for (double e : epsilons()) {
      const double p = i / 10.0;
      const auto sig = reference_state(ReferenceBasis::Computational, e).state;
      CHECK(channels_equal(petz_general(amplitude_damping(p), sig), petz_ad_closed(p, e), 1e-8));
    }
}

TEST_CASE("closed forms equal the general construction over the full grid") {
  for (double p : interior_p())
    for (double e : epsilons()) {
      const auto sc = reference_state(ReferenceBasis::Computational, e).state;
      const auto spm = reference_state(ReferenceBasis::PlusMinus, e).state;
      CHECK(choi_distance(petz_general(amplitude_damping(p), sc), petz_ad_closed(p, e)) < 1e-8);
      CHECK(choi_distance(petz_general(phase_damping(p), spm), petz_pd_closed(p, e)) < 1e-8);
    }
}

TEST_CASE("Petz maps recover their reference state") {
  for (auto kind : {DampingKind::AmplitudeDamping, DampingKind::PhaseDamping})
    for (double p : coarse_p())
      for (double e : epsilons()) {
        const auto sigma = reference_state(reference_basis(kind), e).state;
        const auto both = compose(closed_form_petz(kind, p, e), damping_channel(kind, p));
        CHECK(std::abs(fidelity(petz::apply(both, sigma), sigma) - 1.0) < 1e-9);
      }
}

TEST_CASE("Petz maps and their compositions are CPTP") {
  for (auto kind : {DampingKind::AmplitudeDamping, DampingKind::PhaseDamping})
    for (double p : coarse_p())
      for (double e : epsilons()) {
        const auto rec = closed_form_petz(kind, p, e);
        const auto both = compose(rec, damping_channel(kind, p));
        for (const auto& ch : {rec, both}) {
          CHECK(ch.tp_residual() < 1e-8);
          CHECK(choi(ch).min_eigenvalue() > -1e-9);
        }
      }
}

TEST_CASE("AD recovery of |1> follows the closed-form fidelity and grows with eps") {
  for (double p : interior_p()) {
    double prev = -1;
    for (int i = 1; i <= 9; ++i) {
      const double e = i / 10.0;
      const DensityMatrix out =
          petz::apply(compose(petz_ad_closed(p, e), amplitude_damping(p)), DensityMatrix::basis(2, 1));
      const double f = fidelity(out, vec2(0, 1));
      CHECK(std::abs(f - ad_one_recovered(p, e)) < 1e-12);
      CHECK(f > prev);
      prev = f;
    }
  }
}

TEST_CASE("AD recovery of |0> is non-increasing in eps") {
  for (double p : interior_p()) {
    double prev = 2;
    for (int i = 1; i <= 9; ++i) {
      const double e = i / 10.0;
      const DensityMatrix out =
          petz::apply(compose(petz_ad_closed(p, e), amplitude_damping(p)), DensityMatrix::basis(2, 0));
      const double f = fidelity(out, vec2(1, 0));
      CHECK(f <= prev + 1e-12);
      prev = f;
    }
  }
}

TEST_CASE("damping kind helpers") {
  CHECK(parse_damping_kind("ad") == DampingKind::AmplitudeDamping);
  CHECK(parse_damping_kind("pd") == DampingKind::PhaseDamping);
  CHECK(parse_damping_kind("AD") == DampingKind::AmplitudeDamping);
  CHECK(error_kind_of([] { parse_damping_kind("amplitude"); }) == ErrorKind::ConfigError);
  CHECK(short_name(DampingKind::PhaseDamping) == "pd");
  CHECK(reference_basis(DampingKind::PhaseDamping) == ReferenceBasis::PlusMinus);
  CHECK(closed_form_petz(DampingKind::AmplitudeDamping, 0.3, 0.2).label() == petz_ad_closed(0.3, 0.2).label());
}
