#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "heatflow/fingerprint.hpp"
#include "heatflow/flow.hpp"

namespace heatflow {

/// Locale-independent decimal with the given significant digits.
inline std::string fmt_num(double v, int digits = 12) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, ptr);
}

/// Fingerprint samples as CSV: header `k,branch_id,t,x`, rows sorted by
/// (k, branch_id, t).  Branch ids count from 0 within each k.
inline std::string fingerprint_csv(const std::vector<FingerprintBranch>& branches) {
  struct Row {
    int k;
    int id;
    double t;
    double x;
  };
  std::vector<Row> rows;
  std::vector<int> next_id(8, 0);
  for (const auto& b : branches) {
    const int id = next_id[static_cast<std::size_t>(std::clamp(b.k, 0, 7))]++;
    for (const auto& s : b.samples) rows.push_back({b.k, id, s.t, s.x});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.k != b.k) return a.k < b.k;
    if (a.id != b.id) return a.id < b.id;
    return a.t < b.t;
  });
  std::string out = "k,branch_id,t,x\n";
  for (const auto& r : rows) {
    out += std::to_string(r.k) + ',' + std::to_string(r.id) + ',' + fmt_num(r.t) + ',' + fmt_num(r.x) + '\n';
  }
  return out;
}

/// Trajectory samples as CSV with header `t,x`.
inline std::string trajectory_csv(const Trajectory& tr) {
  std::string out = "t,x\n";
  for (const auto& s : tr.samples) out += fmt_num(s.t) + ',' + fmt_num(s.x) + '\n';
  return out;
}

/// SVG plot of fingerprint curves in the (x, t) plane: one polyline per branch
/// (stroke colour by derivative order), merge points as circles, and the
/// confinement intervals as bands along t = 0.
inline std::string render_fingerprint_svg(const std::vector<FingerprintBranch>& branches,
                                          const std::vector<Interval>& zones,
                                          const std::vector<MergePoint>& merges) {
  constexpr double W = 640, H = 480, M = 50;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double tmax = 0.0;
  auto widen = [&](double x, double t) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    tmax = std::max(tmax, t);
  };
  for (const auto& b : branches)
    for (const auto& s : b.samples) widen(s.x, s.t);
  for (const auto& z : zones) widen(z.lo, 0.0), widen(z.hi, 0.0);
  for (const auto& m : merges) widen(m.x, m.t);
  if (!(xmax > xmin)) xmin -= 1.0, xmax += 1.0;
  if (!(tmax > 0.0)) tmax = 1.0;
  const double pad = 0.05 * (xmax - xmin);
  xmin -= pad;
  xmax += pad;
  auto sx = [&](double x) { return fmt_num(M + (x - xmin) / (xmax - xmin) * (W - 2 * M), 6); };
  auto st = [&](double t) { return fmt_num(H - M - t / tmax * (H - 2 * M), 6); };
  static const char* kStroke[] = {"#000000", "#1f77b4", "#d62728", "#2ca02c"};

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  for (const auto& z : zones) {
    svg += "<rect class=\"zone\" x=\"" + sx(z.lo) + "\" y=\"" + st(0.0) + "\" width=\"" +
           fmt_num((z.hi - z.lo) / (xmax - xmin) * (W - 2 * M), 6) + "\" height=\"6\" fill=\"#ff7f0e\" opacity=\"0.6\"/>\n";
  }
  svg += "<line x1=\"" + fmt_num(M, 6) + "\" y1=\"" + st(0.0) + "\" x2=\"" + fmt_num(W - M, 6) + "\" y2=\"" + st(0.0) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt_num(M, 6) + "\" y1=\"" + st(0.0) + "\" x2=\"" + fmt_num(M, 6) + "\" y2=\"" + st(tmax) +
         "\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + fmt_num(W - M + 10, 6) + "\" y=\"" + st(0.0) + "\">x</text>\n";
  svg += "<text x=\"" + fmt_num(M - 5, 6) + "\" y=\"" + fmt_num(M - 10, 6) + "\">t</text>\n";
  svg += "<text x=\"" + fmt_num(M, 6) + "\" y=\"" + fmt_num(H - M + 20, 6) + "\">" + fmt_num(xmin, 4) + "</text>\n";
  svg += "<text x=\"" + fmt_num(W - M - 40, 6) + "\" y=\"" + fmt_num(H - M + 20, 6) + "\">" + fmt_num(xmax, 4) +
         "</text>\n";
  svg += "<text x=\"5\" y=\"" + st(tmax) + "\">" + fmt_num(tmax, 4) + "</text>\n";
  for (const auto& b : branches) {
    svg += "<polyline class=\"fp" + std::to_string(b.k) + "\" fill=\"none\" stroke=\"" +
           kStroke[std::clamp(b.k, 0, 3)] + "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& s : b.samples) {
      if (!first) svg += ' ';
      svg += sx(s.x) + ',' + st(s.t);
      first = false;
    }
    svg += "\"/>\n";
  }
  for (const auto& m : merges) {
    svg += std::string("<circle class=\"") + (m.kind == MergeKind::InflectionCusp ? "cusp" : "fold") + "\" cx=\"" +
           sx(m.x) + "\" cy=\"" + st(m.t) + "\" r=\"4\" fill=\"none\" stroke=\"black\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace heatflow
