#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "petz/harness.hpp"

namespace petz::harness {

namespace {

std::string sig10(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string fixed(double x, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

struct Style {
  const char* color;
  const char* marker;  // circle | triangle | diamond | square
};

Style epsilon_style(std::size_t index) {
  static const Style styles[] = {{"#d62728", "triangle"}, {"#1f4fd6", "diamond"}, {"#c71585", "square"},
                                 {"#2ca02c", "circle"},   {"#ff7f0e", "triangle"}, {"#8c564b", "diamond"}};
  return styles[index % (sizeof styles / sizeof styles[0])];
}

std::string marker_svg(const char* kind, double x, double y, const char* color) {
  std::ostringstream os;
  const double r = 3.5;
  if (std::string_view(kind) == "triangle") {
    os << "<polygon points=\"" << fixed(x) << ',' << fixed(y - r) << ' ' << fixed(x - r) << ',' << fixed(y + r) << ' '
       << fixed(x + r) << ',' << fixed(y + r) << "\" fill=\"" << color << "\"/>";
  } else if (std::string_view(kind) == "diamond") {
    os << "<polygon points=\"" << fixed(x) << ',' << fixed(y - r) << ' ' << fixed(x + r) << ',' << fixed(y) << ' '
       << fixed(x) << ',' << fixed(y + r) << ' ' << fixed(x - r) << ',' << fixed(y) << "\" fill=\"" << color << "\"/>";
  } else if (std::string_view(kind) == "square") {
    os << "<rect x=\"" << fixed(x - r) << "\" y=\"" << fixed(y - r) << "\" width=\"" << fixed(2 * r) << "\" height=\""
       << fixed(2 * r) << "\" fill=\"" << color << "\"/>";
  } else {
    os << "<circle cx=\"" << fixed(x) << "\" cy=\"" << fixed(y) << "\" r=\"" << fixed(r) << "\" fill=\"" << color
       << "\"/>";
  }
  return os.str();
}

std::string state_title(const std::string& label) {
  if (label == "psi") return "0.9268|0⟩ + 0.3754i|1⟩";
  return "|" + label + "⟩";
}

}  // namespace

std::string format_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream os;
  os << "state,channel,backend,p,epsilon,f_damped,f_recovered\n";
  for (const auto& r : records) {
    os << r.state << ',' << short_name(r.channel) << ',' << backend_name(r.backend) << ',' << sig10(r.p) << ','
       << (r.epsilon ? sig10(*r.epsilon) : "") << ',' << sig10(r.f_damped) << ','
       << (r.f_recovered ? sig10(*r.f_recovered) : "") << '\n';
  }
  return os.str();
}

void emit_csv(const std::vector<SweepRecord>& records, const std::filesystem::path& path) {
  write_file(path, format_csv(records));
}

std::string render_svg(const std::vector<SweepRecord>& records) {
  // Panels in first-appearance order of the state labels.
  std::vector<std::string> states;
  std::vector<double> epsilons;
  double y_min = 1.0;
  for (const auto& r : records) {
    if (std::find(states.begin(), states.end(), r.state) == states.end()) states.push_back(r.state);
    if (r.epsilon && std::find(epsilons.begin(), epsilons.end(), *r.epsilon) == epsilons.end())
      epsilons.push_back(*r.epsilon);
    y_min = std::min(y_min, r.f_damped);
    if (r.f_recovered) y_min = std::min(y_min, *r.f_recovered);
  }
  std::sort(epsilons.begin(), epsilons.end());
  y_min = std::max(0.0, std::floor(y_min * 10.0) / 10.0);
  if (y_min >= 1.0) y_min = 0.9;

  const int panel_w = 360, panel_h = 280, margin_l = 55, margin_r = 15, margin_t = 30, margin_b = 45;
  const int cols = states.size() > 1 ? 2 : 1;
  const int rows = std::max<int>(1, static_cast<int>((states.size() + cols - 1) / cols));
  const int legend_h = 30;
  const int width = cols * panel_w, height = rows * panel_h + legend_h;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t s = 0; s < states.size(); ++s) {
    const int ox = static_cast<int>(s % cols) * panel_w;
    const int oy = static_cast<int>(s / cols) * panel_h;
    const double x0 = ox + margin_l, x1 = ox + panel_w - margin_r;
    const double y0 = oy + panel_h - margin_b, y1 = oy + margin_t;
    auto px = [&](double p) { return x0 + p * (x1 - x0); };
    auto py = [&](double f) { return y0 - (f - y_min) / (1.0 - y_min) * (y0 - y1); };

    os << "<g class=\"panel\" data-state=\"" << states[s] << "\">\n";
    os << "<text x=\"" << fixed((x0 + x1) / 2) << "\" y=\"" << oy + 18 << "\" text-anchor=\"middle\" font-size=\"13\">("
       << static_cast<char>('a' + s) << ") " << state_title(states[s]) << "</text>\n";
    os << "<rect x=\"" << fixed(x0) << "\" y=\"" << fixed(y1) << "\" width=\"" << fixed(x1 - x0) << "\" height=\""
       << fixed(y0 - y1) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      const double p = t / 4.0;
      os << "<text x=\"" << fixed(px(p)) << "\" y=\"" << fixed(y0 + 14) << "\" text-anchor=\"middle\">" << fixed(p)
         << "</text>\n";
      const double f = y_min + (1.0 - y_min) * t / 4.0;
      os << "<text x=\"" << fixed(x0 - 5) << "\" y=\"" << fixed(py(f) + 4) << "\" text-anchor=\"end\">" << fixed(f)
         << "</text>\n";
    }
    os << "<text x=\"" << fixed((x0 + x1) / 2) << "\" y=\"" << fixed(y0 + 32) << "\" text-anchor=\"middle\">p</text>\n";
    os << "<text x=\"" << ox + 14 << "\" y=\"" << fixed((y0 + y1) / 2)
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << ox + 14 << ' ' << fixed((y0 + y1) / 2)
       << ")\">F</text>\n";

    // Damped curve, then one recovered curve per epsilon.
    std::map<double, double> damped;
    std::vector<std::map<double, double>> recovered(epsilons.size());
    for (const auto& r : records) {
      if (r.state != states[s]) continue;
      if (!r.epsilon) {
        damped[r.p] = r.f_damped;
      } else if (r.f_recovered) {
        const auto idx = std::find(epsilons.begin(), epsilons.end(), *r.epsilon) - epsilons.begin();
        recovered[static_cast<std::size_t>(idx)][r.p] = *r.f_recovered;
      }
    }
    auto draw = [&](const std::map<double, double>& curve, const char* color, const char* marker, const std::string& cls) {
      if (curve.empty()) return;
      os << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [p, f] : curve) os << fixed(px(p)) << ',' << fixed(py(f)) << ' ';
      os << "\"/>\n";
      for (const auto& [p, f] : curve) os << marker_svg(marker, px(p), py(f), color) << "\n";
    };
    draw(damped, "black", "circle", "damped");
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
      const Style st = epsilon_style(e);
      draw(recovered[e], st.color, st.marker, "recovered eps-" + sig10(epsilons[e]));
    }
    os << "</g>\n";
  }

  // Legend
  const int ly = rows * panel_h + 18;
  int lx = 20;
  os << marker_svg("circle", lx, ly - 4, "black") << "<text x=\"" << lx + 8 << "\" y=\"" << ly << "\">damped</text>\n";
  lx += 80;
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    const Style st = epsilon_style(e);
    os << marker_svg(st.marker, lx, ly - 4, st.color) << "<text x=\"" << lx + 8 << "\" y=\"" << ly
       << "\">recovered, ε = " << sig10(epsilons[e]) << "</text>\n";
    lx += 130;
  }
  os << "</svg>\n";
  return os.str();
}

void emit_plot(const std::vector<SweepRecord>& records, const std::filesystem::path& path) {
  for (const auto& r : records)
    if (!records.empty() && r.channel != records.front().channel)
      throw Error(ErrorKind::ConfigError, "emit_plot: records mix channels");
  write_file(path, render_svg(records));
}

}  // namespace petz::harness
