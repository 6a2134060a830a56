#pragma once

// Secret key rates of the no-switching protocol (coherent states, heterodyne
// detection at both ends) for each source-noise model.

#include "cvqkd/models.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cvqkd {

enum class Reconciliation { Reverse, Direct };

std::string_view to_string(Reconciliation recon);
/// Accepts "reverse"/"rr" and "direct"/"dr".
std::optional<Reconciliation> parse_reconciliation(std::string_view name);

struct KeyRatePoint {
  double T = 0.0;
  ModelKind model = ModelKind::NeutralParty;
  Reconciliation recon = Reconciliation::Reverse;
  double i_ab = 0.0;     // bits
  double holevo = 0.0;   // bits
  double key_rate = 0.0; // beta * i_ab - holevo
  double beta = 1.0;
  bool feasible = true;
  std::string diagnostic;  // why the point is infeasible
};

/// I(a:b) when both parties heterodyne a state [[a I, c Z], [c Z, b I]]:
/// log2[(b + 1) / (b + 1 - c^2/(a + 1))]. Throws ProtocolMismatchError when
/// gamma_ab is not of that form within 1e-9.
double mutual_information_no_switching(const CovarianceMatrix& gamma_ab);

/// Holevo bound on Eve's information about Bob's (reverse) or Alice's
/// (direct) heterodyne outcome, S(E) - S(E|m), evaluated on the model state.
double holevo_bound(ModelKind kind, Reconciliation recon, const SourceParams& src,
                    const ChannelParams& ch);

/// Throws ParameterError unless 0 < beta <= 1; other errors propagate.
KeyRatePoint key_rate(ModelKind kind, Reconciliation recon, const SourceParams& src,
                      const ChannelParams& ch, double beta = 1.0);

/// Inclusive grid t_min, t_min + t_step, ... up to t_max (snapped to t_max
/// within 1e-9 of it).
std::vector<double> make_t_grid(double t_min, double t_max, double t_step);

/// One point per (kind, T), channel chi recomputed from `epsilon` at each T.
/// Rows come out ordered by model (enum order) then ascending T, whatever
/// `threads` is. Parameter or physicality errors mark the row infeasible.
std::vector<KeyRatePoint> sweep(std::span<const ModelKind> kinds, Reconciliation recon,
                                const SourceParams& src, double epsilon,
                                std::span<const double> t_grid, double beta = 1.0,
                                unsigned threads = 1);

}  // namespace cvqkd
