#include "cvqkd/error.hpp"
#include "cvqkd/models.hpp"
#include "oracle/oracle_values.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <array>
#include <random>

using namespace cvqkd;

namespace {

const SourceParams kAtt = SourceParams::from_excess_noise(20.0, 0.9, 0.1);
const SourceParams kAmp = SourceParams::from_excess_noise(20.0, 1.1, 0.1);
const SourceParams kAmpFeasible = SourceParams::from_excess_noise(20.0, 1.1, 0.3);

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

std::vector<double> t_values() {
  std::vector<double> t;
  for (int k = 1; k <= 20; ++k) t.push_back(0.05 * k);
  return t;
}

}  // namespace

TEST(ExcessNoise, ChiExamples) {
  EXPECT_NEAR(chi_from_excess_noise(0.5, 0.04), 1.08, 1e-15);
  EXPECT_NEAR(chi_from_excess_noise(0.9, 0.1), 0.2 / 0.9, 1e-15);
  EXPECT_NEAR(chi_from_excess_noise(1.1, 0.1), 0.0, 1e-15);
  EXPECT_EQ(chi_from_excess_noise(1.0, 0.0), 0.0);
  EXPECT_THROW(chi_from_excess_noise(1.2, 0.1), ParameterError);
  EXPECT_THROW(chi_from_excess_noise(0.0, 0.1), ParameterError);
  EXPECT_THROW(chi_from_excess_noise(0.5, -0.1), ParameterError);
}

TEST(ExcessNoise, RoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> t(0.01, 1.0), e(0.0, 0.5);
  for (int i = 0; i < 200; ++i) {
    const auto ch = ChannelParams::from_excess_noise(t(rng), e(rng));
    const double eps = ch.epsilon();
    EXPECT_NEAR(ChannelParams::from_excess_noise(ch.T, eps).chi, ch.chi, 1e-12);
  }
}

TEST(Params, Validation) {
  EXPECT_THROW((SourceParams{0.5, 1.0, 0.0}.validate()), ParameterError);
  EXPECT_THROW((SourceParams{20.0, 0.0, 0.0}.validate()), ParameterError);
  EXPECT_THROW((SourceParams{20.0, 0.9, 0.0}.validate()), ParameterError);  // eps_A < 0
  EXPECT_THROW((ChannelParams{1.5, 0.0}.validate()), ParameterError);
  EXPECT_THROW((ChannelParams{0.5, 0.5}.validate()), ParameterError);       // chi < (1-T)/T
  EXPECT_NO_THROW((ChannelParams{0.5, 1.0}.validate()));
}

TEST(ModelKindNames, RoundTrip) {
  for (auto k : {ModelKind::NeutralParty, ModelKind::BeamSplitter, ModelKind::UntrustedSource}) {
    EXPECT_EQ(parse_model_kind(to_string(k)), k);
  }
  EXPECT_EQ(parse_model_kind("fred"), ModelKind::NeutralParty);
  EXPECT_FALSE(parse_model_kind("eve").has_value());
}

TEST(GammaAB, NoiselessIsEpr) {
  const auto g = build_gamma_ab(SourceParams{20.0, 1.0, 0.0}, ChannelParams{1.0, 0.0});
  EXPECT_LT(max_abs_diff(g.data(), cvqkd::testing::epr_matrix(20.0)), 1e-12);
}

TEST(GammaAB, BobVariance) {
  const auto g = build_gamma_ab(kAtt, ChannelParams::from_excess_noise(0.5, 0.04));
  EXPECT_NEAR(g(2, 2), 9.64, 1e-12);
  EXPECT_NEAR(g(3, 3), 9.64, 1e-12);
  EXPECT_NEAR(g(0, 0), 20.0, 0.0);
  EXPECT_NEAR(g(0, 2), std::sqrt(0.5 * 0.9 * 399.0), 1e-12);
  EXPECT_NEAR(g(1, 3), -std::sqrt(0.5 * 0.9 * 399.0), 1e-12);
}

TEST(GammaPrime, EffectiveVariance) {
  const auto g = build_gamma_prime_fab(kAtt, ChannelParams{1.0, 0.0});
  EXPECT_NEAR(kAtt.effective_variance(), 18.2, 1e-12);
  EXPECT_NEAR(g(2, 2), 18.2, 1e-12);
  EXPECT_EQ(g.block(0, 0), Eigen::Matrix2d::Identity());
  EXPECT_EQ(g.block(0, 1), Eigen::Matrix2d::Zero());
  EXPECT_EQ(g.block(0, 2), Eigen::Matrix2d::Zero());
}

TEST(GammaPrime, PreChannelStateIsPure) {
  for (const auto& src : {kAtt, kAmp, kAmpFeasible}) {
    const auto g = build_gamma_prime_fab(src, ChannelParams{1.0, 0.0});
    for (double nu : symplectic_eigenvalues(g)) EXPECT_NEAR(nu, 1.0, 1e-9);
    EXPECT_LE(von_neumann_entropy(g), 1e-7);
  }
}

TEST(GammaPrime, SharesBobMarginalWithUntrusted) {
  for (const auto& src : {kAtt, kAmp}) {
    for (double T : t_values()) {
      const auto ch = ChannelParams::from_excess_noise(T, 0.04);
      const auto np = build_gamma_prime_fab(src, ch);
      const auto ab = build_gamma_ab(src, ch);
      EXPECT_LT(max_abs_diff(np.block(2, 2), ab.block(1, 1)), 1e-12);
    }
  }
}

TEST(BeamSplitterAttenuation, AncillaVariance) {
  const auto bs = build_bs_attenuation(kAtt, ChannelParams::from_excess_noise(0.5, 0.04));
  EXPECT_EQ(bs.derived.regime, BsRegime::Attenuation);
  EXPECT_NEAR(bs.derived.N, oracle::kAttN, 1e-12);
}

TEST(BeamSplitterAttenuation, ReducedBlockMatchesGammaAB) {
  const std::array<int, 2> ab{2, 3};
  for (double T : t_values()) {
    const auto ch = ChannelParams::from_excess_noise(T, 0.04);
    const auto bs = build_bs_attenuation(kAtt, ch);
    EXPECT_LT(max_abs_diff(bs.gamma.reduced(ab).data(), build_gamma_ab(kAtt, ch).data()), 1e-12);
    EXPECT_TRUE(is_physical(bs.gamma));
  }
}

TEST(BeamSplitterAttenuation, NoiselessChannelPurity) {
  const auto bs = build_bs_attenuation(kAtt, ChannelParams{1.0, 0.0});
  // With T = 1 the FGAB state is a pure four-mode state.
  EXPECT_LE(von_neumann_entropy(bs.gamma), 1e-7);
}

TEST(BeamSplitterAttenuation, RegimeErrors) {
  const ChannelParams ch{0.5, 1.0};
  EXPECT_THROW(build_bs_attenuation(SourceParams{20.0, 1.0, 0.0}, ch), RegimeError);
  EXPECT_THROW(build_bs_attenuation(kAmp, ch), RegimeError);
}

TEST(BeamSplitterAttenuation, AncillaPhysicalExactlyWhenSourceNoiseNonnegative) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ta_d(0.05, 0.99), eps_d(-0.3, 0.5);
  int positives = 0;
  for (int i = 0; i < 2000; ++i) {
    const double ta = ta_d(rng);
    const double eps_a = eps_d(rng);
    if (std::abs(eps_a) < 1e-9) continue;
    const double chi_a = (eps_a + 1.0 - ta) / ta;
    const double N = ta * chi_a / (1.0 - ta);
    EXPECT_EQ(N >= 1.0, eps_a >= 0.0) << "T_A=" << ta << " eps_A=" << eps_a;
    if (eps_a >= 0.0) {
      ++positives;
      const auto bs = build_bs_attenuation(SourceParams::from_excess_noise(20.0, ta, eps_a),
                                           ChannelParams::from_excess_noise(0.5, 0.04));
      EXPECT_NEAR(bs.derived.N, N, 1e-9 * N);
      EXPECT_TRUE(is_physical(bs.gamma));
    }
  }
  EXPECT_GT(positives, 100);
}

TEST(BeamSplitterAmplification, DerivedParameters) {
  const auto d = amplification_params(kAmp);
  EXPECT_EQ(d.regime, BsRegime::Amplification);
  EXPECT_NEAR(d.V_B, 22.0, 1e-12);
  EXPECT_NEAR(d.T_B, oracle::kAmpTB, 1e-12);
  EXPECT_NEAR(d.chi_B, oracle::kAmpChiB, 1e-12);
  EXPECT_NEAR(d.N_B, oracle::kAmpNB, 1e-12);
}

TEST(BeamSplitterAmplification, UndefinedWhenAncillaBelowVacuum) {
  // chi_A = 0 at T_A = 1.1 gives N_B < 1.
  EXPECT_THROW(build_bs_amplification(kAmp, ChannelParams::from_excess_noise(0.5, 0.04)),
               ParameterError);
}

TEST(BeamSplitterAmplification, ReducedBlockMatchesGammaAB) {
  const std::array<int, 2> ab{2, 3};
  for (double T : t_values()) {
    const auto ch = ChannelParams::from_excess_noise(T, 0.04);
    const auto bs = build_bs_amplification(kAmpFeasible, ch);
    EXPECT_LT(max_abs_diff(bs.gamma.reduced(ab).data(), build_gamma_ab(kAmpFeasible, ch).data()),
              1e-10);
    EXPECT_TRUE(is_physical(bs.gamma));
  }
}

TEST(BeamSplitterAmplification, DerivedConstraintsOnFeasibleRegion) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> v_d(1.5, 50.0), ta_d(1.001, 3.0), extra_d(0.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double V = v_d(rng);
    const double ta = ta_d(rng);
    const double chi_a = (ta - 1.0) / ta + extra_d(rng);
    const SourceParams src{V, ta, chi_a};
    ASSERT_TRUE(check_amplification_feasibility(src).feasible);
    const auto d = amplification_params(src);
    EXPECT_LT(d.T_B, 1.0);
    EXPECT_GT(d.T_B, 0.0);
    EXPECT_GE(d.chi_B, (1.0 - d.T_B) / d.T_B - 1e-9);
    EXPECT_GE(d.N_B, 1.0 - 1e-9);
  }
}

TEST(BeamSplitterAmplification, BoundaryPolynomialVanishes) {
  for (double ta : {1.05, 1.1, 1.5, 2.0}) {
    for (double V : {2.0, 20.0, 100.0}) {
      const SourceParams src{V, ta, (ta - 1.0) / ta};
      const auto r = check_amplification_feasibility(src);
      EXPECT_NEAR(r.value, 0.0, 1e-9);
      EXPECT_TRUE(r.feasible);
      EXPECT_NEAR(amplification_params(src).N_B, 1.0, 1e-9);
    }
  }
}

TEST(AmplificationFeasibility, Examples) {
  const auto bad = check_amplification_feasibility(kAmp);
  EXPECT_FALSE(bad.feasible);
  EXPECT_NEAR(bad.value, -(22.0 - 1.0) * 0.1 / 1.21, 1e-12);
  EXPECT_FALSE(bad.diagnostic.empty());
  EXPECT_TRUE(check_amplification_feasibility(SourceParams{20.0, 1.1, 1.0}).feasible);
  EXPECT_THROW(check_amplification_feasibility(kAtt), RegimeError);
}

TEST(ModelState, Roles) {
  const auto ch = ChannelParams::from_excess_noise(0.5, 0.04);
  const auto np = build_model_state(ModelKind::NeutralParty, kAtt, ch);
  EXPECT_EQ(np.gamma.n_modes(), 3);
  EXPECT_EQ(np.roles.F, 0);
  EXPECT_FALSE(np.roles.G.has_value());
  EXPECT_EQ(np.roles.A, 1);
  EXPECT_EQ(np.roles.B, 2);
  const auto un = build_model_state(ModelKind::UntrustedSource, kAtt, ch);
  EXPECT_EQ(un.gamma.n_modes(), 2);
  EXPECT_FALSE(un.roles.F.has_value());
  const auto bs = build_model_state(ModelKind::BeamSplitter, kAtt, ch);
  EXPECT_EQ(bs.gamma.n_modes(), 4);
  ASSERT_TRUE(bs.bs.has_value());
  EXPECT_EQ(bs.roles.G, 1);
}

TEST(ModelState, BeamSplitterUndefinedAtUnitGain) {
  EXPECT_THROW(build_model_state(ModelKind::BeamSplitter, SourceParams{20.0, 1.0, 0.1},
                                 ChannelParams{0.5, 1.0}),
               RegimeError);
}

TEST(ModelState, AllBuildableStatesPhysicalOnGrid) {
  for (const auto& src : {kAtt, kAmp, kAmpFeasible}) {
    for (double T : t_values()) {
      const auto ch = ChannelParams::from_excess_noise(T, 0.04);
      EXPECT_TRUE(is_physical(build_model_state(ModelKind::NeutralParty, src, ch).gamma));
      if (src.T_A < 1.0) {
        EXPECT_TRUE(is_physical(build_model_state(ModelKind::UntrustedSource, src, ch).gamma));
      }
      if (src.amplifier_noise_feasible()) {
        EXPECT_TRUE(is_physical(build_model_state(ModelKind::BeamSplitter, src, ch).gamma));
      }
    }
  }
}

TEST(ModelState, UntrustedAmplifiedStateCanViolateUncertainty) {
  // Gain without matching noise leaves A-B correlations too strong at T = 1.
  const auto g = build_model_state(ModelKind::UntrustedSource, kAmp, ChannelParams{1.0, 0.0});
  EXPECT_FALSE(is_physical(g.gamma));
  EXPECT_TRUE(is_physical(
      build_model_state(ModelKind::UntrustedSource, kAmp, ChannelParams::from_excess_noise(0.5, 0.04))
          .gamma));
}
