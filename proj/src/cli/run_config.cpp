#include "cvqkd/cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace cvqkd::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw UsageError(fmt::format("{}: '{}' is not a number", key, value));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw UsageError(fmt::format("{}: '{}' is not a boolean", key, value));
}

}  // namespace

void RunConfig::validate() const {
  if (models.empty()) throw UsageError("at least one --model is required");
  if (!(t_min > 0.0)) throw UsageError(fmt::format("t_min > 0 violated: {}", t_min));
  if (!(t_max <= 1.0)) throw UsageError(fmt::format("t_max <= 1 violated: {}", t_max));
  if (!(t_step > 0.0)) throw UsageError(fmt::format("t_step > 0 violated: {}", t_step));
  if (!(t_min <= t_max)) {
    throw UsageError(fmt::format("t_min <= t_max violated: {} > {}", t_min, t_max));
  }
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw UsageError(fmt::format("0 < beta <= 1 violated: {}", beta));
  }
  if (threads == 0) throw UsageError("threads >= 1 violated");
  try {
    (void)source();
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  if (!(epsilon >= 0.0)) throw UsageError(fmt::format("eps >= 0 violated: {}", epsilon));
}

SourceParams RunConfig::source() const {
  return SourceParams::from_excess_noise(V, T_A, epsilon_A);
}

std::vector<double> RunConfig::t_grid() const { return make_t_grid(t_min, t_max, t_step); }

RunConfig preset(std::string_view name) {
  RunConfig c;
  if (name == "fig2a") {
    c.recon = Reconciliation::Reverse;
    c.T_A = 0.9;
  } else if (name == "fig2b") {
    c.recon = Reconciliation::Reverse;
    c.T_A = 1.1;
  } else if (name == "fig3a") {
    c.recon = Reconciliation::Direct;
    c.T_A = 0.9;
  } else if (name == "fig3b") {
    c.recon = Reconciliation::Direct;
    c.T_A = 1.1;
  } else {
    throw UsageError(
        fmt::format("unknown preset '{}' (expected fig2a, fig2b, fig3a or fig3b)", name));
  }
  c.output = fmt::format("{}.csv", name);
  return c;
}

std::vector<ModelKind> parse_model_list(std::string_view text) {
  std::vector<ModelKind> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string_view::npos ? text.npos
                                                                               : comma - start));
    if (!item.empty()) {
      if (item == "all") {
        out = {ModelKind::NeutralParty, ModelKind::BeamSplitter, ModelKind::UntrustedSource};
      } else if (auto kind = parse_model_kind(item)) {
        if (std::find(out.begin(), out.end(), *kind) == out.end()) out.push_back(*kind);
      } else {
        throw UsageError(fmt::format(
            "unknown model '{}' (expected neutral, beamsplitter, untrusted or all)", item));
      }
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void apply_config_text(RunConfig& config, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != line.npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == line.npos) {
      throw UsageError(fmt::format("config line {}: expected key = value", line_no));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "V") config.V = parse_double(key, value);
    else if (key == "eps") config.epsilon = parse_double(key, value);
    else if (key == "epsA") config.epsilon_A = parse_double(key, value);
    else if (key == "TA") config.T_A = parse_double(key, value);
    else if (key == "t-min") config.t_min = parse_double(key, value);
    else if (key == "t-max") config.t_max = parse_double(key, value);
    else if (key == "t-step") config.t_step = parse_double(key, value);
    else if (key == "beta") config.beta = parse_double(key, value);
    else if (key == "clamp-zero") config.clamp_zero = parse_bool(key, value);
    else if (key == "out") config.output = std::string(value);
    else if (key == "model") config.models = parse_model_list(value);
    else if (key == "recon") {
      auto r = parse_reconciliation(value);
      if (!r) throw UsageError(fmt::format("recon: unknown value '{}'", value));
      config.recon = *r;
    } else if (key == "format") {
      if (value == "csv") config.format = OutputFormat::Csv;
      else if (value == "svg") config.format = OutputFormat::Svg;
      else if (value == "both") config.format = OutputFormat::Both;
      else throw UsageError(fmt::format("format: unknown value '{}'", value));
    } else {
      throw UsageError(fmt::format("config line {}: unknown key '{}'", line_no, key));
    }
  }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("cannot read config file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(config, buf.str());
}

}  // namespace cvqkd::cli
