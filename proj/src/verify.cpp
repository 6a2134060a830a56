#include "cvqkd/verify.hpp"

#include "cvqkd/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace cvqkd::verify {
namespace {

CheckResult make_check(std::string name, double deviation, double tol, std::string detail = {}) {
  const bool ok = std::isfinite(deviation) && deviation <= tol;
  return {std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, deviation, tol,
          std::move(detail)};
}

void add_amplifier_warning(Report& report, const SourceParams& src) {
  if (src.T_A > 1.0 && !src.amplifier_noise_feasible()) {
    report.warnings.push_back(check_amplification_feasibility(src).diagnostic);
  }
}

}  // namespace

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass:
      return "PASS";
    case CheckStatus::Fail:
      return "FAIL";
    case CheckStatus::Skip:
      return "SKIP";
  }
  return "?";
}

bool Report::passed() const { return count(CheckStatus::Fail) == 0; }

std::size_t Report::count(CheckStatus status) const {
  return static_cast<std::size_t>(std::count_if(
      checks.begin(), checks.end(), [status](const CheckResult& c) { return c.status == status; }));
}

void Report::merge(const Report& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  for (const auto& w : other.warnings) {
    if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
  }
}

std::string Report::to_text() const {
  std::string out;
  if (!title.empty()) out += fmt::format("# {}\n", title);
  for (const auto& c : checks) {
    out += fmt::format("check {} {} deviation={:.6e} tol={:.3e}", c.name, to_string(c.status),
                       c.deviation, c.tolerance);
    if (!c.detail.empty()) out += " " + c.detail;
    out += '\n';
  }
  for (const auto& w : warnings) out += fmt::format("warning {}\n", w);
  out += fmt::format("summary {} checks={} passed={} failed={} skipped={}\n",
                     passed() ? "PASS" : "FAIL", checks.size(), count(CheckStatus::Pass),
                     count(CheckStatus::Fail), count(CheckStatus::Skip));
  return out;
}

Report eb_pm_equivalence_check(const SourceParams& src, double tol) {
  src.validate();
  Report report;
  report.title = fmt::format("eb_pm_equivalence V={} T_A={} chi_A={:.12g}", src.V, src.T_A,
                             src.chi_A);
  add_amplifier_warning(report, src);

  // Pre-channel A-B1 block; a perfect channel leaves it untouched.
  const CovarianceMatrix ab1 = build_gamma_ab(src, ChannelParams{1.0, 0.0});
  const ModePartition alice_measures{{1}, {0}};

  const CovarianceMatrix cond = condition_on_heterodyne(ab1, alice_measures);
  const double expected_var = src.T_A * (src.chi_A + 1.0);
  const double cov_dev =
      (cond.data() - expected_var * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
  report.add(make_check("conditional_covariance", cov_dev, tol,
                        fmt::format("expected={:.12g}I got=[{:.12g},{:.12g};{:.12g},{:.12g}]",
                                    expected_var, cond(0, 0), cond(0, 1), cond(1, 0),
                                    cond(1, 1))));

  const double coefficient = std::sqrt(2.0 * src.T_A * (src.V - 1.0) / (src.V + 1.0));
  const auto zero = DisplacementVector::zero(2);
  const std::array<double, 2> unit_x{1.0, 0.0};
  const std::array<double, 2> unit_p{0.0, 1.0};
  const auto mean_x = heterodyne_conditional_mean(ab1, zero, alice_measures, unit_x);
  const auto mean_p = heterodyne_conditional_mean(ab1, zero, alice_measures, unit_p);

  report.add(make_check("mean_coefficient_x", std::abs(mean_x[0] - coefficient), tol,
                        fmt::format("expected={:.12g} got={:.12g}", coefficient, mean_x[0])));
  // The p readout enters with a flipped sign.
  report.add(make_check("mean_coefficient_p_sign", std::abs(mean_p[1] + coefficient), tol,
                        fmt::format("expected={:.12g} got={:.12g}", -coefficient, mean_p[1])));
  report.add(make_check("mean_cross_terms", std::max(std::abs(mean_x[1]), std::abs(mean_p[0])),
                        tol));
  return report;
}

CovarianceMatrix gamma_b_af_of_w(const SourceParams& src, const ChannelParams& ch, double w) {
  if (!(w > 0.0 && w < 1.0)) {
    throw DomainError(fmt::format("W must satisfy 0 < W < 1, got {}", w));
  }
  src.validate();
  ch.validate();
  const double vp = src.effective_variance();
  const double diag = ch.T * (vp + ch.chi);
  const double num = ch.T * (vp * vp - 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = diag - num / (vp - 1.0 + 1.0 / w);
  m(1, 1) = diag - num / (vp - 1.0 + 1.0 / (1.0 - w));
  return CovarianceMatrix(std::move(m));
}

WPoint w_point(const SourceParams& src, const ChannelParams& ch, double w) {
  return {w, gamma_b_af_of_w(src, ch, w)};
}

Report w_monotonicity_check(const SourceParams& src, const ChannelParams& ch, int samples,
                            double tol) {
  if (samples < 1) {
    throw ParameterError(fmt::format("samples >= 1 violated: {}", samples));
  }
  Report report;
  report.title = fmt::format("w_monotonicity T={:.12g} samples={}", ch.T, samples);

  std::map<double, double> entropy;  // ordered by w
  auto eval = [&](double w) { entropy.emplace(w, von_neumann_entropy(gamma_b_af_of_w(src, ch, w))); };
  eval(0.5);
  eval(1e-3);
  eval(1.0 - 1e-3);
  for (int k = 1; k <= samples; ++k) eval(static_cast<double>(k) / (samples + 1));

  const double s_half = entropy.at(0.5);
  double worst = 0.0;
  double worst_w = 0.5;
  for (const auto& [w, s] : entropy) {
    if (s_half - s > worst) {
      worst = s_half - s;
      worst_w = w;
    }
  }
  report.add(make_check("minimum_at_half", worst, tol,
                        worst > tol ? fmt::format("first_violation_w={:.6g}", worst_w) : ""));

  double down = 0.0, up = 0.0;
  double down_w = 0.0, up_w = 0.0;
  for (auto it = entropy.begin(); std::next(it) != entropy.end(); ++it) {
    const auto next = std::next(it);
    const double rise = next->second - it->second;
    if (next->first <= 0.5 && rise > down) {
      down = rise;
      down_w = next->first;
    }
    if (it->first >= 0.5 && -rise > up) {
      up = -rise;
      up_w = next->first;
    }
  }
  report.add(make_check("nonincreasing_below_half", down, tol,
                        down > tol ? fmt::format("first_violation_w={:.6g}", down_w) : ""));
  report.add(make_check("nondecreasing_above_half", up, tol,
                        up > tol ? fmt::format("first_violation_w={:.6g}", up_w) : ""));
  return report;
}

Report lemma_suite(const SourceParams& src, double epsilon, std::span<const double> t_grid,
                   LemmaTolerances tol) {
  src.validate();
  if (std::abs(src.T_A - 1.0) < 1e-12) {
    throw RegimeError("lemma suite needs T_A != 1: the beam-splitter model is undefined there");
  }
  Report report;
  report.title = fmt::format("lemma_suite V={} T_A={} eps_A={:.12g} eps={}", src.V, src.T_A,
                             src.epsilon_A(), epsilon);
  add_amplifier_warning(report, src);

  double max_rr = 0.0;
  double max_dr = 0.0;
  std::size_t skipped = 0;
  for (double T : t_grid) {
    const auto ch = ChannelParams::from_excess_noise(T, epsilon);
    const std::string rr_name = fmt::format("lemma1_reverse_equality T={:.6g}", T);
    const std::string dr_name = fmt::format("lemma2_direct_order T={:.6g}", T);
    try {
      const double np_rr = holevo_bound(ModelKind::NeutralParty, Reconciliation::Reverse, src, ch);
      const double bs_rr = holevo_bound(ModelKind::BeamSplitter, Reconciliation::Reverse, src, ch);
      const double np_dr = holevo_bound(ModelKind::NeutralParty, Reconciliation::Direct, src, ch);
      const double bs_dr = holevo_bound(ModelKind::BeamSplitter, Reconciliation::Direct, src, ch);
      const double rr_dev = std::abs(np_rr - bs_rr);
      const double dr_dev = std::max(0.0, bs_dr - np_dr);
      max_rr = std::max(max_rr, rr_dev);
      max_dr = std::max(max_dr, dr_dev);
      report.add(make_check(rr_name, rr_dev, tol.reverse_equality,
                            fmt::format("neutral={:.12g} beamsplitter={:.12g}", np_rr, bs_rr)));
      report.add(make_check(dr_name, dr_dev, tol.direct_order,
                            fmt::format("neutral={:.12g} beamsplitter={:.12g}", np_dr, bs_dr)));
    } catch (const Error& e) {
      ++skipped;
      report.add({rr_name, CheckStatus::Skip, 0.0, tol.reverse_equality, "model_undefined"});
      report.add({dr_name, CheckStatus::Skip, 0.0, tol.direct_order, "model_undefined"});
      const std::string why = fmt::format("beam-splitter reference undefined: {}", e.what());
      if (std::find(report.warnings.begin(), report.warnings.end(), why) == report.warnings.end()) {
        report.warnings.push_back(why);
      }
    }
  }
  if (skipped < t_grid.size()) {
    report.add(make_check("lemma1_max_deviation", max_rr, tol.reverse_equality));
    report.add(make_check("lemma2_max_violation", max_dr, tol.direct_order));
  }
  return report;
}

}  // namespace cvqkd::verify
