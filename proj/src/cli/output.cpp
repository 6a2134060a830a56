#include "cvqkd/cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cvqkd::cli {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 70.0;

std::string num(double x) { return fmt::format("{:.12g}", x); }

double shown_rate(const KeyRatePoint& p, bool clamp_zero) {
  return clamp_zero && p.feasible ? std::max(0.0, p.key_rate) : p.key_rate;
}

struct Style {
  const char* color;
  const char* dash;
};

Style style_for(ModelKind kind) {
  switch (kind) {
    case ModelKind::NeutralParty:
      return {"#1f4e9c", ""};
    case ModelKind::BeamSplitter:
      return {"#c0392b", " stroke-dasharray=\"10,6\""};
    case ModelKind::UntrustedSource:
      return {"#2e7d32", " stroke-dasharray=\"2,4\""};
  }
  return {"#000000", ""};
}

// 1-2-5 tick spacing giving roughly `target` intervals over `span`.
double tick_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string format_csv(const std::vector<KeyRatePoint>& rows, bool clamp_zero) {
  std::string out = "model,recon,T,i_ab,holevo,key_rate,feasible\n";
  for (const auto& p : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", to_string(p.model), to_string(p.recon), num(p.T),
                       num(p.i_ab), num(p.holevo), num(shown_rate(p, clamp_zero)),
                       p.feasible ? "true" : "false");
  }
  return out;
}

std::string format_point(const KeyRatePoint& p, bool clamp_zero) {
  std::string out = fmt::format(
      "model={} recon={} T={} i_ab={} holevo={} key_rate={} beta={} feasible={}",
      to_string(p.model), to_string(p.recon), num(p.T), num(p.i_ab), num(p.holevo),
      num(shown_rate(p, clamp_zero)), num(p.beta), p.feasible ? "true" : "false");
  return out + "\n";
}

std::string format_svg(const std::vector<KeyRatePoint>& rows, const RunConfig& config) {
  const double x_lo = 0.0;
  const double x_hi = config.t_max;
  double y_lo = 0.0;
  double y_hi = 0.0;
  for (const auto& p : rows) {
    if (!p.feasible) continue;
    const double y = shown_rate(p, config.clamp_zero);
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  if (y_hi - y_lo < 1e-9) y_hi = y_lo + 1.0;
  const double y_step = tick_step(y_hi - y_lo, 6);
  y_lo = std::floor(y_lo / y_step) * y_step;
  y_hi = std::ceil(y_hi / y_step) * y_step;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n",
      kWidth, kHeight);
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += fmt::format(
      "<text x=\"{:.2f}\" y=\"28\" font-family=\"sans-serif\" font-size=\"16\" "
      "text-anchor=\"middle\">Secret key rate, {} reconciliation (V={}, T_A={}, eps_A={}, "
      "eps={})</text>\n",
      kLeft + plot_w / 2, to_string(config.recon), num(config.V), num(config.T_A),
      num(config.epsilon_A), num(config.epsilon));

  // Grid and ticks.
  const double x_step = tick_step(x_hi - x_lo, 5);
  s += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
  for (int k = 0; x_lo + k * x_step <= x_hi + 1e-12; ++k) {
    const double x = x_lo + k * x_step;
    s += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{0:.2f}\" y=\"{3:.2f}\" text-anchor=\"middle\">{4}</text>\n",
        px(x), kTop, kTop + plot_h, kTop + plot_h + 18, num(std::round(x * 1e9) / 1e9));
  }
  for (int k = 0; y_lo + k * y_step <= y_hi + 1e-12; ++k) {
    const double y = y_lo + k * y_step;
    s += fmt::format(
        "<line x1=\"{1:.2f}\" y1=\"{0:.2f}\" x2=\"{2:.2f}\" y2=\"{0:.2f}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\">{5}</text>\n",
        py(y), kLeft, kLeft + plot_w, kLeft - 8, py(y) + 4, num(std::round(y * 1e9) / 1e9));
  }
  s += "</g>\n";
  if (y_lo < 0.0 && y_hi > 0.0) {
    s += fmt::format(
        "<line x1=\"{1:.2f}\" y1=\"{0:.2f}\" x2=\"{2:.2f}\" y2=\"{0:.2f}\" stroke=\"#888\"/>\n",
        py(0.0), kLeft, kLeft + plot_w);
  }
  s += fmt::format(
      "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      kLeft, kTop, plot_w, plot_h);
  s += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"14\" "
      "text-anchor=\"middle\">Channel transmittance T</text>\n",
      kLeft + plot_w / 2, kHeight - 20);
  s += fmt::format(
      "<text x=\"20\" y=\"{0:.2f}\" font-family=\"sans-serif\" font-size=\"14\" "
      "text-anchor=\"middle\" transform=\"rotate(-90 20 {0:.2f})\">Secret key rate "
      "(bits per channel use)</text>\n",
      kTop + plot_h / 2);

  // One polyline per contiguous run of feasible points.
  std::vector<ModelKind> seen;
  for (const auto& p : rows) {
    if (std::find(seen.begin(), seen.end(), p.model) == seen.end()) seen.push_back(p.model);
  }
  for (ModelKind kind : seen) {
    const Style st = style_for(kind);
    std::string points;
    auto flush = [&] {
      if (!points.empty()) {
        s += fmt::format(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\"{} points=\"{}\"/>\n",
            st.color, st.dash, points);
        points.clear();
      }
    };
    for (const auto& p : rows) {
      if (p.model != kind) continue;
      if (!p.feasible) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += fmt::format("{:.2f},{:.2f}", px(p.T), py(shown_rate(p, config.clamp_zero)));
    }
    flush();
  }

  // Legend.
  double ly = kTop + 20;
  for (ModelKind kind : seen) {
    const Style st = style_for(kind);
    const double lx = kLeft + plot_w + 15;
    s += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"{3}\" "
        "stroke-width=\"2\"{4}/>\n"
        "<text x=\"{5:.2f}\" y=\"{6:.2f}\" font-family=\"sans-serif\" font-size=\"12\">{7}</text>\n",
        lx, ly, lx + 35, st.color, st.dash, lx + 42, ly + 4, to_string(kind));
    ly += 22;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace cvqkd::cli
