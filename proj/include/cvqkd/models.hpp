#pragma once

// Covariance matrices of the three source-noise models: the neutral-party
// model (Fred holds an uncorrelated vacuum, the signal is an effective EPR
// pair), the beam-splitter model (an ancillary EPR pair mixed into the signal
// or the retained mode), and the untrusted-source model (only the A-B block).

#include "cvqkd/gaussian.hpp"

#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace cvqkd {

/// Noise referred to the input for a transmittance (or gain) and an excess
/// noise: chi = (epsilon + 1 - t) / t. Throws ParameterError if chi < 0.
double chi_from_excess_noise(double transmittance, double epsilon);

/// Source: EPR variance V, source transmittance/gain T_A, added noise chi_A.
struct SourceParams {
  double V = 20.0;
  double T_A = 1.0;
  double chi_A = 0.0;

  static SourceParams from_excess_noise(double V, double T_A, double epsilon_A);

  double epsilon_A() const { return T_A * chi_A - 1.0 + T_A; }
  /// Variance of the effective EPR pair seen by the channel, T_A (V + chi_A).
  double effective_variance() const { return T_A * (V + chi_A); }

  /// For T_A > 1 a phase-insensitive amplifier needs chi_A >= (T_A - 1)/T_A.
  /// Always true for T_A <= 1.
  bool amplifier_noise_feasible() const;

  /// Throws ParameterError on V < 1, T_A <= 0, chi_A < 0 or epsilon_A < 0.
  void validate() const;
};

/// Gaussian channel with transmittance T and added noise chi (input referred).
struct ChannelParams {
  double T = 1.0;
  double chi = 0.0;

  static ChannelParams from_excess_noise(double T, double epsilon);

  double epsilon() const { return T * chi - 1.0 + T; }

  /// Throws ParameterError unless T in (0, 1] and chi >= (1 - T)/T.
  void validate() const;
};

enum class ModelKind { NeutralParty, BeamSplitter, UntrustedSource };

std::string_view to_string(ModelKind kind);
/// Accepts "neutral", "beamsplitter", "untrusted" and a few short aliases.
std::optional<ModelKind> parse_model_kind(std::string_view name);

enum class BsRegime { Attenuation, Amplification };

/// Parameters derived for the beam-splitter model. Attenuation fills N,
/// amplification fills V_B, T_B, chi_B and N_B; the rest stay NaN.
struct BsDerivedParams {
  BsRegime regime = BsRegime::Attenuation;
  double N = std::numeric_limits<double>::quiet_NaN();
  double V_B = std::numeric_limits<double>::quiet_NaN();
  double T_B = std::numeric_limits<double>::quiet_NaN();
  double chi_B = std::numeric_limits<double>::quiet_NaN();
  double N_B = std::numeric_limits<double>::quiet_NaN();
};

struct BsState {
  CovarianceMatrix gamma;  // modes (F, G, A, B)
  BsDerivedParams derived;
};

/// Two-mode A-B covariance after the channel.
CovarianceMatrix build_gamma_ab(const SourceParams& src, const ChannelParams& ch);

/// Three-mode (F, A, B) state with F in vacuum and (A, B) an EPR pair of
/// variance T_A (V + chi_A) sent through the channel. T = 1, chi = 0 gives the
/// pure pre-channel state.
CovarianceMatrix build_gamma_prime_fab(const SourceParams& src, const ChannelParams& ch);

/// Attenuating beam-splitter model (T_A < 1), modes (F, G, A, B).
BsState build_bs_attenuation(const SourceParams& src, const ChannelParams& ch);

/// Amplifying beam-splitter model (T_A > 1), modes (F, G, A, B).
BsState build_bs_amplification(const SourceParams& src, const ChannelParams& ch);

/// Derived amplification parameters without building the matrix.
BsDerivedParams amplification_params(const SourceParams& src);

struct FeasibilityReport {
  bool feasible;
  /// chi_A^2 + (V - 1) chi_A - (T_A V - 1)(T_A - 1)/T_A^2
  double value;
  std::string diagnostic;
};

/// Evaluates the amplification feasibility polynomial; feasible iff value is
/// at least -1e-12. Requires T_A > 1.
FeasibilityReport check_amplification_feasibility(const SourceParams& src);

/// Mode indices of each party inside a model state.
struct ModeRoles {
  std::optional<int> F;
  std::optional<int> G;
  int A;
  int B;
};

struct ModelState {
  ModelKind kind;
  CovarianceMatrix gamma;
  ModeRoles roles;
  std::optional<BsDerivedParams> bs;
};

/// Dispatches to the builder of `kind`. BeamSplitter picks the regime from
/// T_A and throws RegimeError at T_A == 1.
ModelState build_model_state(ModelKind kind, const SourceParams& src,
                             const ChannelParams& ch);

}  // namespace cvqkd
