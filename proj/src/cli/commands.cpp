#include "cvqkd/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <ostream>

namespace cvqkd::cli {
namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError(fmt::format("cannot write '{}'", path.string()));
  f << content;
  if (!f) throw UsageError(fmt::format("write to '{}' failed", path.string()));
}

void warn_source(const SourceParams& src, bool wants_beamsplitter, std::ostream& err) {
  if (src.T_A > 1.0 && !src.amplifier_noise_feasible()) {
    err << "warning: " << check_amplification_feasibility(src).diagnostic << '\n';
  }
  if (wants_beamsplitter && std::abs(src.T_A - 1.0) < 1e-12) {
    err << "warning: the beam-splitter model is undefined at T_A = 1; its rows are "
           "marked infeasible\n";
  }
}

bool has_model(const RunConfig& c, ModelKind kind) {
  return std::find(c.models.begin(), c.models.end(), kind) != c.models.end();
}

}  // namespace

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    const SourceParams src = config.source();
    warn_source(src, has_model(config, ModelKind::BeamSplitter), err);
    const auto grid = config.t_grid();
    const auto rows =
        sweep(config.models, config.recon, src, config.epsilon, grid, config.beta, config.threads);

    const auto infeasible = std::count_if(rows.begin(), rows.end(),
                                          [](const KeyRatePoint& p) { return !p.feasible; });
    if (infeasible > 0) {
      const auto first = std::find_if(rows.begin(), rows.end(),
                                      [](const KeyRatePoint& p) { return !p.feasible; });
      err << fmt::format("warning: {} of {} points infeasible (first: {} T={}: {})\n", infeasible,
                         rows.size(), to_string(first->model), first->T, first->diagnostic);
    }

    const bool want_csv = config.format != OutputFormat::Svg;
    const bool want_svg = config.format != OutputFormat::Csv;
    if (config.output == "-") {
      if (want_csv) out << format_csv(rows, config.clamp_zero);
      if (want_svg) out << format_svg(rows, config);
      return kExitOk;
    }
    auto path = config.output;
    if (want_csv) {
      if (config.format == OutputFormat::Both) path.replace_extension(".csv");
      write_file(path, format_csv(rows, config.clamp_zero));
      out << "wrote " << path.string() << '\n';
    }
    if (want_svg) {
      path.replace_extension(".svg");
      write_file(path, format_svg(rows, config));
      out << "wrote " << path.string() << '\n';
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_point(const RunConfig& config, double T, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    const SourceParams src = config.source();
    warn_source(src, false, err);
    const auto ch = ChannelParams::from_excess_noise(T, config.epsilon);
    std::string text;
    for (ModelKind kind : config.models) {
      text += format_point(key_rate(kind, config.recon, src, ch, config.beta), config.clamp_zero);
    }
    out << text;
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_verify(const RunConfig& config, const verify::LemmaTolerances& tol, std::ostream& out,
               std::ostream& err) {
  verify::Report report;
  try {
    config.validate();
    const SourceParams src = config.source();
    const auto grid = config.t_grid();
    report.title = fmt::format("verify V={} T_A={} eps_A={} eps={}", config.V, config.T_A,
                               config.epsilon_A, config.epsilon);
    if (std::abs(src.T_A - 1.0) >= 1e-12) {
      report.merge(verify::lemma_suite(src, config.epsilon, grid, tol));
    } else {
      report.warnings.push_back("lemma suite skipped: beam-splitter model undefined at T_A = 1");
    }
    report.merge(verify::eb_pm_equivalence_check(src));
    for (double T : grid) {
      const auto ch = ChannelParams::from_excess_noise(T, config.epsilon);
      auto w = verify::w_monotonicity_check(src, ch, 99);
      for (auto& c : w.checks) c.name = fmt::format("w_{} T={:.6g}", c.name, T);
      report.merge(w);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  out << report.to_text();
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  return report.passed() ? kExitOk : kExitVerifyFailed;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secret key rate bounds for CV-QKD with trusted Gaussian source noise", "cvqkd"};
  app.require_subcommand(1);

  std::string preset_name;
  std::string config_path;
  double V = 0, eps = 0, eps_a = 0, t_a = 0, t_min = 0, t_max = 0, t_step = 0, beta = 0;
  double T = 0, lemma1_tol = 0, lemma2_tol = 0;
  std::vector<std::string> models;
  std::string recon, out_path, format;
  unsigned threads = 1;
  bool clamp_zero = false;

  auto* sweep_cmd = app.add_subcommand("sweep", "key rate against channel transmittance");
  auto* point_cmd = app.add_subcommand("point", "key rate at a single transmittance");
  auto* verify_cmd = app.add_subcommand("verify", "run the model consistency checks");
  for (auto* sub : {sweep_cmd, point_cmd, verify_cmd}) {
    sub->add_option("--preset", preset_name, "fig2a | fig2b | fig3a | fig3b");
    sub->add_option("--config", config_path, "key=value file; flags override it");
    sub->add_option("--V", V, "EPR variance (shot-noise units)");
    sub->add_option("--eps", eps, "channel excess noise");
    sub->add_option("--epsA", eps_a, "source excess noise");
    sub->add_option("--TA", t_a, "source transmittance or gain");
    sub->add_option("--model", models, "neutral | beamsplitter | untrusted | all (repeatable, comma list)");
    sub->add_option("--recon", recon, "reverse | direct");
    sub->add_option("--t-min", t_min, "smallest channel transmittance");
    sub->add_option("--t-max", t_max, "largest channel transmittance");
    sub->add_option("--t-step", t_step, "transmittance step");
    sub->add_option("--beta", beta, "reconciliation efficiency in (0, 1]");
    sub->add_flag("--clamp-zero", clamp_zero, "print negative key rates as 0");
    sub->add_option("--threads", threads, "worker threads for the sweep");
  }
  sweep_cmd->add_option("--out", out_path, "output path, '-' for standard output");
  sweep_cmd->add_option("--format", format, "csv | svg | both");
  point_cmd->add_option("--T", T, "channel transmittance")->required();
  auto* l1 = verify_cmd->add_option("--lemma1-tol", lemma1_tol)->group("");
  auto* l2 = verify_cmd->add_option("--lemma2-tol", lemma2_tol)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  auto given = [sub](const char* name) { return sub->count(name) > 0; };

  try {
    RunConfig config = given("--preset") ? preset(preset_name) : RunConfig{};
    if (sub == point_cmd && !given("--preset")) config.models = {ModelKind::NeutralParty};
    if (given("--config")) apply_config_file(config, config_path);
    if (given("--V")) config.V = V;
    if (given("--eps")) config.epsilon = eps;
    if (given("--epsA")) config.epsilon_A = eps_a;
    if (given("--TA")) config.T_A = t_a;
    if (given("--t-min")) config.t_min = t_min;
    if (given("--t-max")) config.t_max = t_max;
    if (given("--t-step")) config.t_step = t_step;
    if (given("--beta")) config.beta = beta;
    if (given("--clamp-zero")) config.clamp_zero = clamp_zero;
    if (given("--threads")) config.threads = threads;
    if (given("--model")) {
      config.models.clear();
      for (const auto& m : models) {
        for (ModelKind k : parse_model_list(m)) {
          if (std::find(config.models.begin(), config.models.end(), k) == config.models.end()) {
            config.models.push_back(k);
          }
        }
      }
    }
    if (given("--recon")) {
      auto r = parse_reconciliation(recon);
      if (!r) throw UsageError(fmt::format("unknown --recon '{}'", recon));
      config.recon = *r;
    }
    if (sub == sweep_cmd) {
      if (given("--out")) config.output = out_path;
      if (given("--format")) {
        if (format == "csv") config.format = OutputFormat::Csv;
        else if (format == "svg") config.format = OutputFormat::Svg;
        else if (format == "both") config.format = OutputFormat::Both;
        else throw UsageError(fmt::format("unknown --format '{}'", format));
      }
      return cmd_sweep(config, out, err);
    }
    if (sub == point_cmd) return cmd_point(config, T, out, err);

    verify::LemmaTolerances tol;
    if (l1->count() > 0) tol.reverse_equality = lemma1_tol;
    if (l2->count() > 0) tol.direct_order = lemma2_tol;
    return cmd_verify(config, tol, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace cvqkd::cli
