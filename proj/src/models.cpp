#include "cvqkd/models.hpp"

#include "cvqkd/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace cvqkd {
namespace {

constexpr double kParamTol = 1e-12;

// Fills a symmetric covariance matrix two-by-two, mirroring off-diagonal blocks.
class BlockBuilder {
 public:
  explicit BlockBuilder(int n_modes)
      : m_(Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes)) {}

  // s * I at (i, j) and (j, i)
  BlockBuilder& identity(int i, int j, double s) {
    return put(i, j, s, s);
  }

  // s * sigma_z at (i, j) and (j, i)
  BlockBuilder& zeta(int i, int j, double s) {
    return put(i, j, s, -s);
  }

  CovarianceMatrix build() { return CovarianceMatrix(std::move(m_)); }

 private:
  BlockBuilder& put(int i, int j, double xx, double pp) {
    m_(2 * i, 2 * j) = xx;
    m_(2 * i + 1, 2 * j + 1) = pp;
    m_(2 * j, 2 * i) = xx;
    m_(2 * j + 1, 2 * i + 1) = pp;
    return *this;
  }

  Eigen::MatrixXd m_;
};

// sqrt of a quantity that is nonnegative up to rounding.
double sqrt_nonneg(double x) { return std::sqrt(std::max(x, 0.0)); }

bool is_unit_gain(double t_a) { return std::abs(t_a - 1.0) < kParamTol; }

}  // namespace

double chi_from_excess_noise(double transmittance, double epsilon) {
  if (!(transmittance > 0.0)) {
    throw ParameterError(
        fmt::format("transmittance must satisfy T > 0, got {}", transmittance));
  }
  if (!(epsilon >= 0.0)) {
    throw ParameterError(fmt::format("excess noise must satisfy eps >= 0, got {}", epsilon));
  }
  const double chi = (epsilon + 1.0 - transmittance) / transmittance;
  if (chi < -kParamTol) {
    throw ParameterError(fmt::format(
        "chi = (eps + 1 - T)/T >= 0 violated: T = {} > 1 + eps = {}", transmittance,
        1.0 + epsilon));
  }
  return std::max(chi, 0.0);
}

SourceParams SourceParams::from_excess_noise(double V, double T_A, double epsilon_A) {
  SourceParams p{V, T_A, chi_from_excess_noise(T_A, epsilon_A)};
  p.validate();
  return p;
}

bool SourceParams::amplifier_noise_feasible() const {
  if (T_A <= 1.0) return true;
  return chi_A >= (T_A - 1.0) / T_A - kParamTol;
}

void SourceParams::validate() const {
  if (!(V >= 1.0)) {
    throw ParameterError(fmt::format("source variance V >= 1 violated: V = {}", V));
  }
  if (!(T_A > 0.0)) {
    throw ParameterError(fmt::format("source transmittance T_A > 0 violated: T_A = {}", T_A));
  }
  if (!(chi_A >= 0.0)) {
    throw ParameterError(fmt::format("source noise chi_A >= 0 violated: chi_A = {}", chi_A));
  }
  if (epsilon_A() < -kParamTol) {
    throw ParameterError(fmt::format(
        "source excess noise eps_A = T_A chi_A - 1 + T_A >= 0 violated: eps_A = {}",
        epsilon_A()));
  }
}

ChannelParams ChannelParams::from_excess_noise(double T, double epsilon) {
  ChannelParams p{T, chi_from_excess_noise(T, epsilon)};
  p.validate();
  return p;
}

void ChannelParams::validate() const {
  if (!(T > 0.0 && T <= 1.0)) {
    throw ParameterError(fmt::format("channel transmittance 0 < T <= 1 violated: T = {}", T));
  }
  if (!(chi >= (1.0 - T) / T - kParamTol)) {
    throw ParameterError(fmt::format(
        "channel noise chi >= (1 - T)/T violated: chi = {}, (1 - T)/T = {}", chi,
        (1.0 - T) / T));
  }
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::NeutralParty:
      return "neutral";
    case ModelKind::BeamSplitter:
      return "beamsplitter";
    case ModelKind::UntrustedSource:
      return "untrusted";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  if (name == "neutral" || name == "fred" || name == "np") return ModelKind::NeutralParty;
  if (name == "beamsplitter" || name == "bs") return ModelKind::BeamSplitter;
  if (name == "untrusted" || name == "un") return ModelKind::UntrustedSource;
  return std::nullopt;
}

CovarianceMatrix build_gamma_ab(const SourceParams& src, const ChannelParams& ch) {
  src.validate();
  ch.validate();
  const double V = src.V;
  return BlockBuilder(2)
      .identity(0, 0, V)
      .zeta(0, 1, std::sqrt(ch.T * src.T_A * (V * V - 1.0)))
      .identity(1, 1, ch.T * (src.effective_variance() + ch.chi))
      .build();
}

CovarianceMatrix build_gamma_prime_fab(const SourceParams& src, const ChannelParams& ch) {
  src.validate();
  ch.validate();
  const double vp = src.effective_variance();
  if (vp < 1.0 - kParamTol) {
    throw ParameterError(
        fmt::format("effective variance T_A (V + chi_A) >= 1 violated: {}", vp));
  }
  return BlockBuilder(3)
      .identity(0, 0, 1.0)
      .identity(1, 1, vp)
      .zeta(1, 2, sqrt_nonneg(ch.T * (vp * vp - 1.0)))
      .identity(2, 2, ch.T * (vp + ch.chi))
      .build();
}

BsState build_bs_attenuation(const SourceParams& src, const ChannelParams& ch) {
  src.validate();
  ch.validate();
  const double ta = src.T_A;
  if (!(ta < 1.0) || is_unit_gain(ta)) {
    throw RegimeError(fmt::format(
        "beam-splitter attenuation needs T_A < 1 (ancilla variance N = T_A chi_A/(1 - T_A)), "
        "got T_A = {}",
        ta));
  }
  const double N = ta * src.chi_A / (1.0 - ta);
  if (N < 1.0 - kParamTol) {
    throw ParameterError(fmt::format("ancilla variance N = T_A chi_A/(1 - T_A) >= 1 violated: N = {}", N));
  }
  const double V = src.V;
  const double T = ch.T;
  const double n2 = sqrt_nonneg(N * N - 1.0);
  BsState out{BlockBuilder(4)
                  .identity(0, 0, N)
                  .zeta(0, 1, std::sqrt(ta) * n2)
                  .zeta(0, 3, -std::sqrt(T * (1.0 - ta)) * n2)
                  .identity(1, 1, ta * N + (1.0 - ta) * V)
                  .zeta(1, 2, std::sqrt((1.0 - ta) * (V * V - 1.0)))
                  .identity(1, 3, std::sqrt(T * ta * (1.0 - ta)) * (V - N))
                  .identity(2, 2, V)
                  .zeta(2, 3, std::sqrt(T * ta * (V * V - 1.0)))
                  .identity(3, 3, T * (src.effective_variance() + ch.chi))
                  .build(),
              BsDerivedParams{}};
  out.derived.regime = BsRegime::Attenuation;
  out.derived.N = N;
  return out;
}

BsDerivedParams amplification_params(const SourceParams& src) {
  src.validate();
  const double ta = src.T_A;
  if (!(ta > 1.0) || is_unit_gain(ta)) {
    throw RegimeError(
        fmt::format("beam-splitter amplification needs T_A > 1, got T_A = {}", ta));
  }
  const double V = src.V;
  const double vpc = V + src.chi_A;
  BsDerivedParams d;
  d.regime = BsRegime::Amplification;
  d.V_B = ta * vpc;
  d.T_B = ta * (V * V - 1.0) / (ta * ta * vpc * vpc - 1.0);
  d.chi_B = (ta * ta * vpc * (V * src.chi_A + 1.0) - V) / (ta * (V * V - 1.0));
  d.N_B = d.T_B * d.chi_B / (1.0 - d.T_B);
  return d;
}

BsState build_bs_amplification(const SourceParams& src, const ChannelParams& ch) {
  ch.validate();
  const BsDerivedParams d = amplification_params(src);
  if (!(d.T_B < 1.0)) {
    throw ParameterError(fmt::format("amplification T_B < 1 violated: T_B = {}", d.T_B));
  }
  const double chi_min = (1.0 - d.T_B) / d.T_B;
  if (d.chi_B < chi_min - kParamTol || d.N_B < 1.0 - kParamTol) {
    throw ParameterError(fmt::format(
        "amplification chi_B >= (1 - T_B)/T_B violated: chi_B = {:.12g} < {:.12g} "
        "(ancilla N_B = {:.12g} < 1; needs chi_A >= (T_A - 1)/T_A = {:.12g}, got {:.12g})",
        d.chi_B, chi_min, d.N_B, (src.T_A - 1.0) / src.T_A, src.chi_A));
  }
  const double T = ch.T;
  const double tb = d.T_B;
  const double nb = d.N_B;
  const double vb = d.V_B;
  const double n2 = sqrt_nonneg(nb * nb - 1.0);
  const double v2 = vb * vb - 1.0;
  return {BlockBuilder(4)
              .identity(0, 0, nb)
              .zeta(0, 1, std::sqrt(tb) * n2)
              .zeta(0, 2, -std::sqrt(1.0 - tb) * n2)
              .identity(1, 1, tb * nb + (1.0 - tb) * vb)
              .identity(1, 2, std::sqrt(tb * (1.0 - tb)) * (vb - nb))
              .zeta(1, 3, std::sqrt(T * (1.0 - tb) * v2))
              .identity(2, 2, tb * (vb + d.chi_B))
              .zeta(2, 3, std::sqrt(T * tb * v2))
              .identity(3, 3, T * (vb + ch.chi))
              .build(),
          d};
}

FeasibilityReport check_amplification_feasibility(const SourceParams& src) {
  const double ta = src.T_A;
  if (!(ta > 1.0)) {
    throw RegimeError(fmt::format("feasibility polynomial applies to T_A > 1, got {}", ta));
  }
  const double c = src.chi_A;
  const double value =
      c * c + (src.V - 1.0) * c - (ta * src.V - 1.0) * (ta - 1.0) / (ta * ta);
  FeasibilityReport r{value >= -kParamTol, value, {}};
  if (!r.feasible) {
    r.diagnostic = fmt::format(
        "amplifier source noise infeasible: chi_A^2 + (V - 1) chi_A - (T_A V - 1)(T_A - 1)/T_A^2 "
        "= {:.6g} < 0 (chi_A = {:.6g} < (T_A - 1)/T_A = {:.6g}, i.e. eps_A < 2 (T_A - 1))",
        value, c, (ta - 1.0) / ta);
  }
  return r;
}

ModelState build_model_state(ModelKind kind, const SourceParams& src,
                             const ChannelParams& ch) {
  switch (kind) {
    case ModelKind::NeutralParty:
      return {kind, build_gamma_prime_fab(src, ch), {0, std::nullopt, 1, 2}, std::nullopt};
    case ModelKind::UntrustedSource:
      return {kind, build_gamma_ab(src, ch), {std::nullopt, std::nullopt, 0, 1}, std::nullopt};
    case ModelKind::BeamSplitter: {
      if (is_unit_gain(src.T_A)) {
        throw RegimeError(fmt::format(
            "beam-splitter model undefined at T_A = 1 (N = T_A chi_A/(1 - T_A) divides by "
            "1 - T_A = 0); use T_A < 1 or T_A > 1"));
      }
      auto bs = src.T_A < 1.0 ? build_bs_attenuation(src, ch) : build_bs_amplification(src, ch);
      return {kind, std::move(bs.gamma), {0, 1, 2, 3}, bs.derived};
    }
  }
  throw InternalError("unknown model kind");
}

}  // namespace cvqkd
