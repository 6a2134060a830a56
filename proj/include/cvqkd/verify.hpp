#pragma once

// Executable checks of the model relations: equality of the reverse
// reconciliation bounds, the direction of the direct reconciliation bound,
// the entanglement-based / prepare-and-measure equivalence of the source, and
// the W-parameterized conditional state of the direct-reconciliation proof.

#include "cvqkd/keyrate.hpp"

#include <span>
#include <string>
#include <vector>

namespace cvqkd::verify {

enum class CheckStatus { Pass, Fail, Skip };

std::string_view to_string(CheckStatus status);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double deviation = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Machine-readable result of a verification run.
///
/// Text form, one record per line:
///   # <title>
///   check <name> <PASS|FAIL|SKIP> deviation=<%.6e> tol=<%.3e>[ <detail>]
///   warning <text>
///   summary <PASS|FAIL> checks=<n> passed=<n> failed=<n> skipped=<n>
/// Skipped checks do not fail a report.
struct Report {
  std::string title;
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;

  bool passed() const;
  std::size_t count(CheckStatus status) const;
  void add(CheckResult check) { checks.push_back(std::move(check)); }
  /// Concatenates checks and warnings of `other`.
  void merge(const Report& other);
  std::string to_text() const;
};

/// Heterodynes A on the pre-channel A-B1 state and compares Bob's conditional
/// covariance with T_A (chi_A + 1) I and the conditional mean of a unit
/// outcome (X_A, P_A) with sqrt(2 T_A (V - 1)/(V + 1)) (X_A, -P_A).
Report eb_pm_equivalence_check(const SourceParams& src, double tol = 1e-10);

struct WPoint {
  double w;
  CovarianceMatrix gamma_b_af;
};

/// Conditional covariance of B after Alice's and Fred's measurements for a
/// general Fred unitary summarized by w in (0, 1):
///   x: T V'' - T (V'^2 - 1) / (V' - 1 + 1/w)
///   p: T V'' - T (V'^2 - 1) / (V' - 1 + 1/(1 - w))
/// with V' = T_A (V + chi_A) and V'' = V' + chi. Throws DomainError for w
/// outside (0, 1).
CovarianceMatrix gamma_b_af_of_w(const SourceParams& src, const ChannelParams& ch, double w);

WPoint w_point(const SourceParams& src, const ChannelParams& ch, double w);

/// Samples w on a uniform grid of `samples` interior points plus 1e-3 and
/// 1 - 1e-3, and checks that the entropy is minimal at w = 1/2, nonincreasing
/// below and nondecreasing above.
Report w_monotonicity_check(const SourceParams& src, const ChannelParams& ch, int samples,
                            double tol = 1e-10);

struct LemmaTolerances {
  double reverse_equality = 1e-8;
  double direct_order = 1e-10;
};

/// Reverse: |holevo(NeutralParty) - holevo(BeamSplitter)| <= tol at each T.
/// Direct: holevo(NeutralParty) >= holevo(BeamSplitter) - tol at each T.
/// Points where the beam-splitter model can not be built are skipped with a
/// warning. Throws RegimeError at T_A = 1.
Report lemma_suite(const SourceParams& src, double epsilon, std::span<const double> t_grid,
                   LemmaTolerances tol = {});

}  // namespace cvqkd::verify
