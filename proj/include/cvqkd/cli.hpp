#pragma once

#include "cvqkd/error.hpp"
#include "cvqkd/keyrate.hpp"
#include "cvqkd/verify.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cvqkd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Thrown for invalid flags, presets or config files (exit status 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class OutputFormat { Csv, Svg, Both };

struct RunConfig {
  double V = 20.0;
  double epsilon = 0.04;
  double epsilon_A = 0.1;
  double T_A = 0.9;
  std::vector<ModelKind> models{ModelKind::NeutralParty, ModelKind::BeamSplitter,
                                ModelKind::UntrustedSource};
  Reconciliation recon = Reconciliation::Reverse;
  double t_min = 0.01;
  double t_max = 1.0;
  double t_step = 0.01;
  double beta = 1.0;
  bool clamp_zero = false;
  std::filesystem::path output = "keyrate.csv";
  OutputFormat format = OutputFormat::Csv;
  unsigned threads = 1;

  /// Throws UsageError naming the violated constraint.
  void validate() const;
  SourceParams source() const;
  std::vector<double> t_grid() const;
};

/// fig2a/fig2b: reverse reconciliation, T_A = 0.9 / 1.1.
/// fig3a/fig3b: direct reconciliation, T_A = 0.9 / 1.1.
/// All use V = 20, eps = 0.04, eps_A = 0.1, T in [0.01, 1] step 0.01.
RunConfig preset(std::string_view name);

/// Applies `key = value` lines (same keys as the long flags without dashes;
/// '#' starts a comment) on top of `config`.
void apply_config_text(RunConfig& config, std::string_view text);
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

std::vector<ModelKind> parse_model_list(std::string_view text);

/// Header `model,recon,T,i_ab,holevo,key_rate,feasible`, LF line endings,
/// 12 significant digits. With clamp_zero negative key rates print as 0.
std::string format_csv(const std::vector<KeyRatePoint>& rows, bool clamp_zero);

/// 800x600 SVG line chart of key rate against transmittance, one polyline per
/// model; infeasible points break the line.
std::string format_svg(const std::vector<KeyRatePoint>& rows, const RunConfig& config);

/// One line of `key=value` pairs.
std::string format_point(const KeyRatePoint& point, bool clamp_zero);

/// Runs the sweep and writes the requested files. `out` receives "-" output
/// and file names, `err` warnings.
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_point(const RunConfig& config, double T, std::ostream& out, std::ostream& err);

/// Lemma suite over the configured grid, the equivalence check and the
/// W-monotonicity check at each grid point. Exit 0 iff nothing failed.
int cmd_verify(const RunConfig& config, const verify::LemmaTolerances& tol, std::ostream& out,
               std::ostream& err);

/// Full command line entry point: `cvqkd <sweep|point|verify> [flags]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvqkd::cli
