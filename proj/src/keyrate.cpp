#include "cvqkd/keyrate.hpp"

#include "cvqkd/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace cvqkd {
namespace {

constexpr double kFormTol = 1e-9;
constexpr double kHolevoFloor = -1e-9;

KeyRatePoint infeasible_point(ModelKind kind, Reconciliation recon, double T, double beta,
                              std::string why) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  KeyRatePoint p;
  p.T = T;
  p.model = kind;
  p.recon = recon;
  p.i_ab = nan;
  p.holevo = nan;
  p.key_rate = nan;
  p.beta = beta;
  p.feasible = false;
  p.diagnostic = std::move(why);
  return p;
}

}  // namespace

std::string_view to_string(Reconciliation recon) {
  return recon == Reconciliation::Reverse ? "reverse" : "direct";
}

std::optional<Reconciliation> parse_reconciliation(std::string_view name) {
  if (name == "reverse" || name == "rr" || name == "RR") return Reconciliation::Reverse;
  if (name == "direct" || name == "dr" || name == "DR") return Reconciliation::Direct;
  return std::nullopt;
}

double mutual_information_no_switching(const CovarianceMatrix& gamma_ab) {
  if (gamma_ab.n_modes() != 2) {
    throw ProtocolMismatchError(
        fmt::format("expected a 2-mode A-B matrix, got {} modes", gamma_ab.n_modes()));
  }
  const auto& g = gamma_ab.data();
  const double a = g(0, 0);
  const double b = g(2, 2);
  const double c = g(0, 2);
  const bool form_ok = std::abs(g(1, 1) - a) <= kFormTol && std::abs(g(3, 3) - b) <= kFormTol &&
                       std::abs(g(1, 3) + c) <= kFormTol && std::abs(g(0, 1)) <= kFormTol &&
                       std::abs(g(2, 3)) <= kFormTol && std::abs(g(0, 3)) <= kFormTol &&
                       std::abs(g(1, 2)) <= kFormTol;
  if (!form_ok) {
    throw ProtocolMismatchError(
        "A-B matrix is not of the form [[a I, c Z], [c Z, b I]] required by the "
        "no-switching protocol");
  }
  const double conditional = b + 1.0 - c * c / (a + 1.0);
  if (!(conditional > 0.0)) {
    throw UnphysicalStateError(fmt::format(
        "Bob's conditional heterodyne variance b + 1 - c^2/(a + 1) = {} is not positive",
        conditional));
  }
  return std::log2((b + 1.0) / conditional);
}

double holevo_bound(ModelKind kind, Reconciliation recon, const SourceParams& src,
                    const ChannelParams& ch) {
  const ModelState state = build_model_state(kind, src, ch);
  const int measured = recon == Reconciliation::Reverse ? state.roles.B : state.roles.A;
  ModePartition partition;
  partition.measured = {measured};
  for (int m = 0; m < state.gamma.n_modes(); ++m) {
    if (m != measured) partition.kept.push_back(m);
  }
  const double s_e = von_neumann_entropy(state.gamma);
  const double s_e_given_m = von_neumann_entropy(condition_on_heterodyne(state.gamma, partition));
  const double holevo = s_e - s_e_given_m;
  if (holevo < kHolevoFloor) {
    throw InternalError(fmt::format("negative Holevo quantity {:.3e} for model {}", holevo,
                                    to_string(kind)));
  }
  return holevo;
}

KeyRatePoint key_rate(ModelKind kind, Reconciliation recon, const SourceParams& src,
                      const ChannelParams& ch, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw ParameterError(
        fmt::format("reconciliation efficiency 0 < beta <= 1 violated: beta = {}", beta));
  }
  KeyRatePoint p;
  p.T = ch.T;
  p.model = kind;
  p.recon = recon;
  p.beta = beta;
  p.i_ab = mutual_information_no_switching(build_gamma_ab(src, ch));
  p.holevo = holevo_bound(kind, recon, src, ch);
  p.key_rate = beta * p.i_ab - p.holevo;
  return p;
}

std::vector<double> make_t_grid(double t_min, double t_max, double t_step) {
  if (!(t_step > 0.0)) {
    throw ParameterError(fmt::format("t_step > 0 violated: {}", t_step));
  }
  if (!(t_min <= t_max)) {
    throw ParameterError(fmt::format("t_min <= t_max violated: {} > {}", t_min, t_max));
  }
  const auto count = static_cast<long>(std::floor((t_max - t_min) / t_step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (long k = 0; k < count; ++k) {
    double t = t_min + static_cast<double>(k) * t_step;
    if (std::abs(t - t_max) < 1e-9) t = t_max;
    grid.push_back(t);
  }
  return grid;
}

std::vector<KeyRatePoint> sweep(std::span<const ModelKind> kinds, Reconciliation recon,
                                const SourceParams& src, double epsilon,
                                std::span<const double> t_grid, double beta,
                                unsigned threads) {
  std::vector<ModelKind> models(kinds.begin(), kinds.end());
  std::sort(models.begin(), models.end());
  models.erase(std::unique(models.begin(), models.end()), models.end());
  std::vector<double> grid(t_grid.begin(), t_grid.end());
  std::sort(grid.begin(), grid.end());

  std::vector<KeyRatePoint> rows(models.size() * grid.size());
  auto evaluate = [&](std::size_t index) {
    const ModelKind kind = models[index / grid.size()];
    const double T = grid[index % grid.size()];
    try {
      rows[index] = key_rate(kind, recon, src, ChannelParams::from_excess_noise(T, epsilon), beta);
    } catch (const Error& e) {
      rows[index] = infeasible_point(kind, recon, T, beta, e.what());
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(rows.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) evaluate(i);
    return rows;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < rows.size(); i += workers) evaluate(i);
    });
  }
  pool.clear();  // joins
  return rows;
}

}  // namespace cvqkd
