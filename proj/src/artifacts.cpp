#include "sapr/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sapr {

std::string csv_cell(double v) {
  char buf[64];
  snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (size_t i = 0; i < header.size(); ++i) {
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  }
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      out << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

namespace {

// five-stop viridis-like ramp, t in [0,1]
std::string ramp_color(double t) {
  static const double stops[5][3] = {{68, 1, 84},
                                     {59, 82, 139},
                                     {33, 145, 140},
                                     {94, 201, 98},
                                     {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double f = t - i;
  char buf[16];
  snprintf(buf, sizeof(buf), "#%02x%02x%02x",
           static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
           static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
           static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
  return buf;
}

}  // namespace

std::string beam_image_svg(const BeamImage& image, const std::string& title) {
  const auto& g = image.grid;
  const int wpx = 560, hpx = 560, margin = 60;
  const double du = g.cols > 1 ? (g.u_max - g.u_min) / (g.cols - 1) : 0.1;
  const double dv = g.rows > 1 ? (g.v_max - g.v_min) / (g.rows - 1) : 0.1;
  const double u_lo = g.u_min - du / 2, u_hi = g.u_max + du / 2;
  const double v_lo = g.v_min - dv / 2, v_hi = g.v_max + dv / 2;
  auto px = [&](double u) {
    return margin + (u - u_lo) / (u_hi - u_lo) * (wpx - 2 * margin);
  };
  auto py = [&](double v) {
    return hpx - margin - (v - v_lo) / (v_hi - v_lo) * (hpx - 2 * margin);
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << wpx
    << "\" height=\"" << hpx << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << wpx / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
  const double cw = (wpx - 2 * margin) / (u_hi - u_lo) * du;
  const double ch = (hpx - 2 * margin) / (v_hi - v_lo) * dv;
  for (int i = 0; i < g.size(); ++i) {
    const double t = (image.db[i] - kBeamFloorDb) / (0.0 - kBeamFloorDb);
    s << "<rect x=\"" << px(g.angles[i].x()) - cw / 2 << "\" y=\""
      << py(g.angles[i].y()) - ch / 2 << "\" width=\"" << cw << "\" height=\""
      << ch << "\" fill=\"" << ramp_color(t) << "\"/>\n";
  }
  s << "<text x=\"" << wpx / 2 << "\" y=\"" << hpx - 14
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
    << "u (sine space), " << csv_cell(u_lo) << " to " << csv_cell(u_hi)
    << "</text>\n";
  s << "<text x=\"16\" y=\"" << hpx / 2
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
    << "transform=\"rotate(-90 16 " << hpx / 2 << ")\">v (sine space), "
    << csv_cell(v_lo) << " to " << csv_cell(v_hi) << "</text>\n";
  s << "<text x=\"" << wpx - margin << "\" y=\"40\" text-anchor=\"end\" "
       "font-family=\"sans-serif\" font-size=\"11\">0 dB peak, floor "
    << kBeamFloorDb << " dB</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::string delta_trace_svg(const std::vector<double>& deltas,
                            const std::string& title) {
  const int wpx = 640, hpx = 420, margin = 60;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << wpx
    << "\" height=\"" << hpx << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << wpx / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
  if (!deltas.empty()) {
    double lo = *std::min_element(deltas.begin(), deltas.end());
    double hi = *std::max_element(deltas.begin(), deltas.end());
    lo = std::max(lo, 1e-16);
    hi = std::max(hi, lo * 10);
    const double llo = std::log10(lo), lhi = std::log10(hi);
    auto px = [&](size_t i) {
      return margin + (deltas.size() == 1
                           ? 0.0
                           : static_cast<double>(i) / (deltas.size() - 1) *
                                 (wpx - 2 * margin));
    };
    auto py = [&](double d) {
      const double t = (std::log10(std::max(d, 1e-16)) - llo) / (lhi - llo);
      return hpx - margin - t * (hpx - 2 * margin);
    };
    s << "<polyline fill=\"none\" stroke=\"#2166ac\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < deltas.size(); ++i) {
      s << px(i) << "," << py(deltas[i]) << " ";
    }
    s << "\"/>\n";
    s << "<line x1=\"" << margin << "\" y1=\"" << hpx - margin << "\" x2=\""
      << wpx - margin << "\" y2=\"" << hpx - margin
      << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
      << "\" y2=\"" << hpx - margin << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << wpx / 2 << "\" y=\"" << hpx - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">outer iteration (0 to " << deltas.size() - 1
      << ")</text>\n";
    s << "<text x=\"16\" y=\"" << hpx / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 16 " << hpx / 2
      << ")\">delta (log scale, " << csv_cell(lo) << " to " << csv_cell(hi)
      << ")</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace sapr
