#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "petz/harness.hpp"
#include "petz/random.hpp"

namespace petz::harness {

namespace {

std::vector<double> grid(double start, double stop, double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::lround((stop - start) / step));
  for (int i = 0; i <= n; ++i) out.push_back(start + i * step);
  return out;
}

const std::vector<double> kCoarseP = grid(0.0, 1.0, 0.1);
const std::vector<double> kInteriorP = grid(0.05, 0.95, 0.05);
const std::vector<double> kEpsilons{0.2, 0.5, 0.8};

class Suite {
 public:
  explicit Suite(const VerifyOptions& options) : options_(options) {}

  template <typename Body>
  void run(std::string name, double threshold, Body&& body) {
    CheckResult r;
    r.name = std::move(name);
    r.threshold = options_.tolerance.value_or(threshold);
    try {
      r.max_residual = body();
      r.passed = std::isfinite(r.max_residual) && r.max_residual <= r.threshold;
    } catch (const std::exception& e) {
      r.passed = false;
      r.max_residual = std::numeric_limits<double>::infinity();
      r.detail = e.what();
    }
    report_.checks.push_back(std::move(r));
  }

  VerifyReport take() { return std::move(report_); }

 private:
  const VerifyOptions& options_;
  VerifyReport report_;
};

double min_choi_eig_violation(const KrausChannel& ch) { return std::max(0.0, -choi(ch).min_eigenvalue()); }

KrausChannel closed_form(const VerifyOptions& o, DampingKind kind, double p, double e) {
  return kind == DampingKind::AmplitudeDamping ? o.ad_closed_form(p, e) : o.pd_closed_form(p, e);
}

std::vector<KrausChannel> channel_families(const VerifyOptions& o, double p, double e) {
  return {amplitude_damping(p), phase_damping(p), closed_form(o, DampingKind::AmplitudeDamping, p, e),
          closed_form(o, DampingKind::PhaseDamping, p, e)};
}

DensityMatrix reduced_system(const DensityMatrix& full) {
  const std::array<Eigen::Index, 3> dims{2, 2, 2};
  return partial_trace(full, 0, dims);
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e <= %.1e", c.max_residual, c.threshold);
    os << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << "  (" << buf << ")";
    if (!c.detail.empty()) os << "  " << c.detail;
    os << "\n";
  }
  const auto failed = std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; });
  os << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " checks passed\n";
  return os.str();
}

VerifyReport verify_all(const VerifyOptions& options) {
  Suite suite(options);
  std::mt19937_64 rng(options.seed);

  // --- channels -----------------------------------------------------------
  suite.run("channels: built-ins are trace preserving", 1e-9, [&] {
    double worst = 0;
    for (double p : kCoarseP)
      worst = std::max({worst, amplitude_damping(p).tp_residual(), phase_damping(p).tp_residual()});
    return worst;
  });

  suite.run("channels: apply preserves trace", 1e-10, [&] {
    double worst = 0;
    for (double p : kCoarseP)
      for (const auto& ch : {amplitude_damping(p), phase_damping(p)})
        for (int t = 0; t < 5; ++t)
          worst = std::max(worst, std::abs(petz::apply(ch, random_density(2, rng).matrix()).trace().real() - 1.0));
    return worst;
  });

  suite.run("channels: apply preserves positivity", 1e-9, [&] {
    double worst = 0;
    for (double p : kCoarseP)
      for (const auto& ch : {amplitude_damping(p), phase_damping(p)})
        for (int t = 0; t < 5; ++t)
          worst = std::max(worst, -herm_eig(petz::apply(ch, random_density(2, rng).matrix())).eigenvalues(0));
    return worst;
  });

  suite.run("channels: Choi matrices are PSD", 1e-9, [&] {
    double worst = 0;
    for (double p : kCoarseP)
      worst = std::max({worst, min_choi_eig_violation(amplitude_damping(p)), min_choi_eig_violation(phase_damping(p))});
    return worst;
  });

  suite.run("channels: data processing inequality (200 trials)", 1e-8, [&] {
    double worst = 0;
    std::uniform_int_distribution<int> pick_p(0, 10);
    for (int t = 0; t < 200; ++t) {
      const double p = kCoarseP[static_cast<std::size_t>(pick_p(rng))];
      const KrausChannel ch = (t % 2 == 0) ? amplitude_damping(p) : phase_damping(p);
      const auto r = check_dpi(ch, random_density(2, rng), random_density(2, rng), 0.0);
      if (!std::isinf(r.d_before)) worst = std::max(worst, r.d_after - r.d_before);
    }
    return worst;
  });

  suite.run("channels: composition is associative", 1e-9, [&] {
    double worst = 0;
    for (double p : kCoarseP) {
      const auto a = amplitude_damping(p), b = phase_damping(1.0 - p), c = options.ad_closed_form(p, 0.3);
      worst = std::max(worst, choi_distance(compose(compose(c, b), a), compose(c, compose(b, a))));
    }
    return worst;
  });

  // --- petz ---------------------------------------------------------------
  for (DampingKind kind : {DampingKind::AmplitudeDamping, DampingKind::PhaseDamping}) {
    const std::string tag = kind == DampingKind::AmplitudeDamping ? "AD" : "PD";
    suite.run("petz: closed form equals general formula (" + tag + ")", 1e-8, [&] {
      double worst = 0;
      for (double p : kInteriorP)
        for (double e : kEpsilons) {
          const auto sigma = reference_state(reference_basis(kind), e).state;
          worst = std::max(worst, choi_distance(petz_general(damping_channel(kind, p), sigma),
                                                closed_form(options, kind, p, e)));
        }
      return worst;
    });
  }

  suite.run("petz: reference state is recovered exactly", 1e-9, [&] {
    double worst = 0;
    for (DampingKind kind : {DampingKind::AmplitudeDamping, DampingKind::PhaseDamping})
      for (double p : kCoarseP)
        for (double e : kEpsilons) {
          const auto sigma = reference_state(reference_basis(kind), e).state;
          const auto ch = damping_channel(kind, p);
          const auto rec = closed_form(options, kind, p, e);
          worst = std::max(worst, 1.0 - fidelity(DensityMatrix(petz::apply(rec, petz::apply(ch, sigma.matrix()))), sigma));
        }
    return worst;
  });

  suite.run("petz: recovery maps and compositions are trace preserving", 1e-8, [&] {
    double worst = 0;
    for (DampingKind kind : {DampingKind::AmplitudeDamping, DampingKind::PhaseDamping})
      for (double p : kCoarseP)
        for (double e : kEpsilons) {
          const auto rec = closed_form(options, kind, p, e);
          worst = std::max({worst, rec.tp_residual(), compose(rec, damping_channel(kind, p)).tp_residual()});
        }
    return worst;
  });

  suite.run("petz: recovery maps and compositions are completely positive", 1e-9, [&] {
    double worst = 0;
    for (DampingKind kind : {DampingKind::AmplitudeDamping, DampingKind::PhaseDamping})
      for (double p : kCoarseP)
        for (double e : kEpsilons) {
          const auto rec = closed_form(options, kind, p, e);
          worst = std::max({worst, min_choi_eig_violation(rec),
                            min_choi_eig_violation(compose(rec, damping_channel(kind, p)))});
        }
    return worst;
  });

  suite.run("petz: AD recovery of |0> is non-increasing in eps", 1e-12, [&] {
    double worst = 0;
    const auto eps = grid(0.1, 0.9, 0.1);
    const DensityMatrix zero = DensityMatrix::basis(2, 0);
    for (double p : kInteriorP) {
      double prev = 2.0;
      for (double e : eps) {
        const double f = fidelity(petz::apply(options.ad_closed_form(p, e), petz::apply(amplitude_damping(p), zero)), zero);
        worst = std::max(worst, f - prev);
        prev = f;
      }
    }
    return worst;
  });

  // --- dqc ----------------------------------------------------------------
  suite.run("dqc: programs reproduce all four channel families", 1e-8, [&] {
    double worst = 0;
    for (double p : kCoarseP)
      for (double e : kEpsilons)
        for (const auto& ch : channel_families(options, p, e)) worst = std::max(worst, verify(plan_dqc(ch), ch));
    return worst;
  });

  suite.run("dqc: ancilla branches reconstruct the output", 1e-10, [&] {
    double worst = 0;
    for (double p : kCoarseP)
      for (const auto& ch : channel_families(options, p, 0.2)) {
        const auto prog = plan_dqc(ch);
        const auto rho = random_density(2, rng);
        const auto res = simulate(prog, rho);
        ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
        double prob = 0;
        for (std::size_t m = 0; m < res.branches.size(); ++m) {
          sum += res.branches[m].unnormalized_branch;
          prob += res.branches[m].probability;
          if (m >= ch.size()) continue;
          const auto& k = ch.kraus()[m];
          worst = std::max(worst, (res.branches[m].unnormalized_branch - k * rho.matrix() * k.adjoint()).norm());
        }
        worst = std::max({worst, (sum - res.output.matrix()).norm(), std::abs(prob - 1.0)});
      }
    return worst;
  });

  suite.run("dqc: two-stage cascade equals composed channel", 1e-8, [&] {
    double worst = 0;
    for (DampingKind kind : {DampingKind::AmplitudeDamping, DampingKind::PhaseDamping})
      for (double p : kCoarseP)
        for (double e : kEpsilons) {
          const auto ch = damping_channel(kind, p);
          const auto rec = closed_form(options, kind, p, e);
          const std::vector<DqcProgram> stages{plan_dqc(ch), plan_dqc(rec)};
          const auto rho = random_density(2, rng);
          worst = std::max(worst,
                           (simulate_cascade(stages, rho).matrix() - petz::apply(compose(rec, ch), rho.matrix())).norm());
        }
    return worst;
  });

  // --- nmr ----------------------------------------------------------------
  const nmr::SpinSystem sys = nmr::default_spin_system();

  suite.run("nmr: CZ and CNOT blocks match ideal gates up to phase", 1e-8, [&] {
    ComplexMatrix cz = ComplexMatrix::Identity(4, 4);
    cz(3, 3) = -1.0;
    ComplexMatrix cnot = ComplexMatrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
    double worst = 0;
    for (int anc : {nmr::kChannelAncilla, nmr::kRecoveryAncilla}) {
      worst = std::max(worst, nmr::phase_aligned_distance(
                                  nmr::sequence_unitary(nmr::cz_block(sys, anc, nmr::kSystemQubit), sys),
                                  nmr::embed_pair(cz, anc, nmr::kSystemQubit, sys.size())));
      worst = std::max(worst, nmr::phase_aligned_distance(
                                  nmr::sequence_unitary(nmr::cnot_block(sys, anc, nmr::kSystemQubit), sys),
                                  nmr::embed_pair(cnot, anc, nmr::kSystemQubit, sys.size())));
    }
    return worst;
  });

  suite.run("nmr: stage unitaries match DQC circuits up to phase", 1e-8, [&] {
    double worst = 0;
    for (DampingKind kind : {DampingKind::AmplitudeDamping, DampingKind::PhaseDamping})
      for (double p : kCoarseP)
        for (double e : kEpsilons) {
          const auto ch_prog = plan_dqc(damping_channel(kind, p));
          const auto rec_prog = plan_dqc(closed_form(options, kind, p, e));
          const auto ch_stage = nmr::compile_stage(ch_prog, sys, nmr::kSystemQubit, nmr::kChannelAncilla);
          const auto rec_stage = nmr::compile_stage(rec_prog, sys, nmr::kSystemQubit, nmr::kRecoveryAncilla);
          worst = std::max(worst, nmr::phase_aligned_distance(
                                      nmr::sequence_unitary(ch_stage.sequence, sys),
                                      nmr::embed_pair(assemble_unitary(ch_prog), nmr::kSystemQubit,
                                                      nmr::kChannelAncilla, sys.size())));
          worst = std::max(worst, nmr::phase_aligned_distance(
                                      nmr::sequence_unitary(rec_stage.sequence, sys),
                                      nmr::embed_pair(assemble_unitary(rec_prog), nmr::kSystemQubit,
                                                      nmr::kRecoveryAncilla, sys.size())));
        }
    return worst;
  });

  suite.run("nmr: compiled sequences are unitary", 1e-9, [&] {
    double worst = 0;
    for (double p : kCoarseP)
      for (double e : kEpsilons) {
        worst = std::max(worst, unitarity_defect(nmr::sequence_unitary(nmr::compile_ad_sequence(p, e, sys), sys)));
        worst = std::max(worst, unitarity_defect(nmr::sequence_unitary(nmr::compile_pd_sequence(p, e, sys), sys)));
      }
    return worst;
  });

  suite.run("nmr: pulse playback equals composed channel on the system", 1e-7, [&] {
    double worst = 0;
    for (DampingKind kind : {DampingKind::AmplitudeDamping, DampingKind::PhaseDamping})
      for (double p : kCoarseP)
        for (double e : kEpsilons) {
          const auto seq = kind == DampingKind::AmplitudeDamping ? nmr::compile_ad_sequence(p, e, sys)
                                                                 : nmr::compile_pd_sequence(p, e, sys);
          const auto both = compose(closed_form(options, kind, p, e), damping_channel(kind, p));
          for (const char* label : {"0", "1", "+", "psi"}) {
            const auto st = named_state(label);
            nmr::PulseSequence full = nmr::state_preparation(nmr::kSystemQubit, st.alpha, st.beta);
            full.append(seq);
            const auto out = reduced_system(nmr::simulate_sequence(full, sys, nmr::pps_state(1.0).state));
            worst = std::max(worst, (out.matrix() - petz::apply(both, st.density().matrix())).cwiseAbs().maxCoeff());
          }
        }
    return worst;
  });

  suite.run("nmr: pseudopure state evolves like the pure state", 1e-7, [&] {
    double worst = 0;
    const double kappa = 1e-5;
    for (double p : {0.3, 0.7}) {
      const auto st = named_state("psi");
      nmr::PulseSequence full = nmr::state_preparation(nmr::kSystemQubit, st.alpha, st.beta);
      full.append(nmr::compile_ad_sequence(p, 0.5, sys));
      const auto pure = reduced_system(nmr::simulate_sequence(full, sys, nmr::pps_state(1.0).state));
      const auto mixed = reduced_system(nmr::simulate_sequence(full, sys, nmr::pps_state(kappa).state));
      const ComplexMatrix deviation =
          (mixed.matrix() - (1.0 - kappa) / 2.0 * ComplexMatrix::Identity(2, 2)) / kappa;
      worst = std::max(worst, (deviation - pure.matrix()).cwiseAbs().maxCoeff());
    }
    return worst;
  });

  return suite.take();
}

}  // namespace petz::harness
