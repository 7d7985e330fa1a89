#include "mmsim/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mmsim {

namespace {

constexpr double plot_w = 480, plot_h = 480;
constexpr double margin_l = 70, margin_t = 40, margin_b = 60, margin_r = 110;

std::string axis_label(const Axis& a) {
  static const std::array<std::pair<const char*, const char*>, 7> symbols = {{
      {"Delta1", "Δ₁"},
      {"Delta2", "Δ₂"},
      {"Delta_m1", "Δm₁"},
      {"Delta_m2", "Δm₂"},
      {"hop_Gamma", "Γ"},
      {"Delta_sym", "Δ (Δ₁ = Δ₂)"},
      {"Delta_antisym", "Δ (Δ₁ = −Δ₂)"},
  }};
  std::string sym = a.name;
  for (const auto& [key, s] : symbols)
    if (a.name == key) sym = s;
  return sym + (a.unit == AxisUnit::omega_b ? " / ωb" : " / κc");
}

std::string colour(double t) {
  // viridis sampled at five stops, linear in between
  static constexpr double stops[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int k = std::min(3, static_cast<int>(t));
  const double f = t - k;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                static_cast<int>(std::lround(stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                static_cast<int>(std::lround(stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void header(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
     << margin_l + plot_w + margin_r << "\" height=\"" << margin_t + plot_h + margin_b
     << "\" font-family=\"sans-serif\" font-size=\"13\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << margin_l + plot_w / 2 << "\" y=\"24\" text-anchor=\"middle\">" << title
     << "</text>\n";
}

void x_axis(std::ostringstream& os, const Axis& a) {
  const double y = margin_t + plot_h;
  for (double f : {0.0, 0.5, 1.0}) {
    const double x = margin_l + f * plot_w;
    os << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x << "\" y2=\"" << y + 5
       << "\" stroke=\"black\"/>\n<text x=\"" << x << "\" y=\"" << y + 20
       << "\" text-anchor=\"middle\">" << num(a.start + f * (a.stop - a.start)) << "</text>\n";
  }
  os << "<text x=\"" << margin_l + plot_w / 2 << "\" y=\"" << y + 45
     << "\" text-anchor=\"middle\">" << axis_label(a) << "</text>\n";
}

void y_axis(std::ostringstream& os, double lo, double hi, const std::string& label) {
  for (double f : {0.0, 0.5, 1.0}) {
    const double y = margin_t + plot_h - f * plot_h;
    os << "<line x1=\"" << margin_l - 5 << "\" y1=\"" << y << "\" x2=\"" << margin_l << "\" y2=\""
       << y << "\" stroke=\"black\"/>\n<text x=\"" << margin_l - 8 << "\" y=\"" << y + 4
       << "\" text-anchor=\"end\">" << num(lo + f * (hi - lo)) << "</text>\n";
  }
  os << "<text transform=\"translate(18," << margin_t + plot_h / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << label << "</text>\n";
}

void frame(std::ostringstream& os) {
  os << "<rect x=\"" << margin_l << "\" y=\"" << margin_t << "\" width=\"" << plot_w
     << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
}

struct Series {
  std::vector<double> x;
  std::vector<std::optional<double>> y;
};

std::string line_svg(const Axis& axis, const std::vector<Series>& series,
                     const std::string& title, const std::string& ylabel, bool zero_floor) {
  double lo = zero_floor ? 0.0 : INFINITY, hi = zero_floor ? 0.0 : -INFINITY;
  for (const auto& s : series)
    for (const auto& v : s.y)
      if (v && std::isfinite(*v)) {
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
  if (!(hi > lo)) {
    lo = std::isfinite(lo) ? lo : 0.0;
    hi = lo + 1.0;
  }
  hi += 0.05 * (hi - lo);

  std::ostringstream os;
  header(os, title);
  frame(os);
  for (const auto& s : series) {
    os << "<path fill=\"none\" stroke=\"#3b528b\" stroke-width=\"1.5\" d=\"";
    bool pen = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!s.y[i] || !std::isfinite(*s.y[i])) {
        pen = false;
        continue;
      }
      const double px = margin_l + (s.x[i] - axis.start) / (axis.stop - axis.start) * plot_w;
      const double py = margin_t + plot_h - (*s.y[i] - lo) / (hi - lo) * plot_h;
      os << (pen ? 'L' : 'M') << px << ' ' << py << ' ';
      pen = true;
    }
    os << "\"/>\n";
  }
  x_axis(os, axis);
  y_axis(os, lo, hi, ylabel);
  os << "</svg>\n";
  return os.str();
}

}  // namespace

std::string heatmap_svg(const SweepResult& r, const ModePair& pair) {
  if (r.spec.axes.size() != 2) throw ConfigError("heatmap needs a 2-D sweep");
  const std::size_t k = pair.index();
  double hi = 0.0;
  for (const auto& pt : r.points)
    if (pt.log_neg[k]) hi = std::max(hi, *pt.log_neg[k]);
  const double scale = hi > 0 ? hi : 1.0;

  std::ostringstream os;
  header(os, "E_N(" + pair.id() + ")");
  const double cw = plot_w / static_cast<double>(r.rows());
  const double ch = plot_h / static_cast<double>(r.cols());
  os << "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (std::size_t j = 0; j < r.cols(); ++j) {
      const auto& v = r.at(i, j).log_neg[k];
      os << "<rect x=\"" << margin_l + i * cw << "\" y=\"" << margin_t + plot_h - (j + 1) * ch
         << "\" width=\"" << cw + 0.05 << "\" height=\"" << ch + 0.05 << "\" fill=\""
         << (v ? colour(*v / scale) : std::string("#bbbbbb")) << "\"/>\n";
    }
  }
  os << "</g>\n";
  frame(os);
  x_axis(os, r.spec.axes[0]);
  y_axis(os, r.spec.axes[1].start, r.spec.axes[1].stop, axis_label(r.spec.axes[1]));

  // colour bar
  const double bx = margin_l + plot_w + 25;
  for (int s = 0; s < 64; ++s)
    os << "<rect x=\"" << bx << "\" y=\"" << margin_t + plot_h - (s + 1) * plot_h / 64
       << "\" width=\"18\" height=\"" << plot_h / 64 + 0.05 << "\" fill=\"" << colour(s / 63.0)
       << "\"/>\n";
  os << "<text x=\"" << bx + 22 << "\" y=\"" << margin_t + 10 << "\">" << num(hi) << "</text>\n"
     << "<text x=\"" << bx + 22 << "\" y=\"" << margin_t + plot_h << "\">0</text>\n"
     << "</svg>\n";
  return os.str();
}

std::string line_plot_svg(const SweepResult& r, const ModePair& pair) {
  if (r.spec.axes.size() != 1) throw ConfigError("line plot needs a 1-D sweep");
  Series s{r.axis_values[0], {}};
  for (std::size_t i = 0; i < r.rows(); ++i) s.y.push_back(r.at(i).log_neg[pair.index()]);
  return line_svg(r.spec.axes[0], {s}, "E_N(" + pair.id() + ")", "E_N", true);
}

std::string margin_plot_svg(const SweepResult& r) {
  if (r.spec.axes.size() != 1) throw ConfigError("margin plot needs a 1-D sweep");
  Series s{r.axis_values[0], {}};
  const double wb = r.base.omega_b_ref();
  for (std::size_t i = 0; i < r.rows(); ++i) s.y.push_back(r.at(i).stability_margin / wb);
  return line_svg(r.spec.axes[0], {s}, "max Re λ(M)", "max Re λ / ωb", false);
}

std::vector<std::filesystem::path> render_sweep(const SweepResult& r,
                                                const std::filesystem::path& csv_path) {
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& suffix, const std::string& svg) {
    auto path = csv_path.parent_path() / (csv_path.stem().string() + "_" + suffix + ".svg");
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << svg)) throw IoError("cannot write '" + path.string() + "'");
    written.push_back(path);
  };
  if (r.spec.margin_only) {
    if (r.spec.axes.size() == 1) emit("margin", margin_plot_svg(r));
    return written;
  }
  for (const auto& pair : r.spec.pairs)
    emit(pair.id(), r.spec.axes.size() == 2 ? heatmap_svg(r, pair) : line_plot_svg(r, pair));
  return written;
}

}  // namespace mmsim
