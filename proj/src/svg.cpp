#include "fglm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <vector>

#include "fglm/errors.hpp"

namespace fglm {
namespace {

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, y0, w, h;   // plot area in figure coordinates
  double tmin, tmax;     // data ranges
  double vmin, vmax;
  double sx(double t) const { return x0 + (t - tmin) / (tmax - tmin) * w; }
  double sy(double v) const { return y0 + h - (v - vmin) / (vmax - vmin) * h; }
};

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

} // namespace

std::string envelope_svg(const TestVectorMatrix& t, const EnvelopeResult& res,
                         const SvgOptions& opts) {
  const Index k = t.k;
  const Index n_panels = t.panels;
  if (res.low.size() != n_panels * k || static_cast<Index>(t.grid.size()) != k)
    throw ShapeMismatchError("envelope and test vector disagree on layout");

  std::set<Index> exit_set(res.exits.begin(), res.exits.end());

  std::vector<Index> keep;
  for (Index p = 0; p < n_panels; ++p) {
    if (!opts.only_significant) {
      keep.push_back(p);
      continue;
    }
    bool any = false;
    for (Index e = p * k; e < (p + 1) * k && !any; ++e) any = exit_set.count(e) > 0;
    if (any) keep.push_back(p);
  }

  const double pw = opts.panel_width, ph = opts.panel_height;
  const double ml = 44, mr = 10, mt = 22, mb = 28; // per-panel insets
  const double title_h = opts.title.empty() ? 0 : 26;

  const Index n_keep = static_cast<Index>(keep.size());
  const Index cols = std::max<Index>(1, std::min<Index>(opts.columns, std::max<Index>(n_keep, 1)));
  const Index rows = n_keep == 0 ? 1 : (n_keep + cols - 1) / cols;
  const double fig_w = cols * pw;
  const double fig_h = title_h + rows * ph;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + px(fig_w) +
         "\" height=\"" + px(fig_h) + "\" viewBox=\"0 0 " + px(fig_w) + " " + px(fig_h) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + px(fig_w) + "\" height=\"" + px(fig_h) +
         "\" fill=\"white\"/>\n";
  if (!opts.title.empty())
    svg += "<text x=\"" + px(fig_w / 2) + "\" y=\"17\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"14\">" + xml_escape(opts.title) + "</text>\n";

  if (n_keep == 0) {
    svg += "<text x=\"" + px(fig_w / 2) + "\" y=\"" + px(title_h + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "fill=\"#555555\">no curve leaves the envelope</text>\n";
    svg += "</svg>\n";
    return svg;
  }

  for (Index slot = 0; slot < n_keep; ++slot) {
    const Index p = keep[slot];
    const double ox = (slot % cols) * pw;
    const double oy = title_h + (slot / cols) * ph;

    Frame f;
    f.x0 = ox + ml;
    f.y0 = oy + mt;
    f.w = pw - ml - mr;
    f.h = ph - mt - mb;
    f.tmin = t.grid[0];
    f.tmax = t.grid[k - 1];
    if (f.tmax <= f.tmin) f.tmax = f.tmin + 1;

    double vmin = res.low[p * k], vmax = res.upp[p * k];
    for (Index e = p * k; e < (p + 1) * k; ++e) {
      vmin = std::min({vmin, res.low[e], t.rows(0, e)});
      vmax = std::max({vmax, res.upp[e], t.rows(0, e)});
    }
    double pad = (vmax - vmin) * 0.05;
    if (pad <= 0) pad = std::abs(vmax) * 0.05 + 1e-3;
    f.vmin = vmin - pad;
    f.vmax = vmax + pad;

    svg += "<g class=\"panel\">\n";
    svg += "<text x=\"" + px(ox + pw / 2) + "\" y=\"" + px(oy + 15) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           xml_escape(p < static_cast<Index>(t.panel_labels.size()) ? t.panel_labels[p] : "") +
           "</text>\n";

    // envelope band: upper curve left-to-right, lower curve right-to-left
    svg += "<polygon fill=\"#c8c8c8\" stroke=\"none\" points=\"";
    for (Index m = 0; m < k; ++m) {
      if (m) svg += ' ';
      svg += px(f.sx(t.grid[m])) + "," + px(f.sy(res.upp[p * k + m]));
    }
    for (Index m = k - 1; m >= 0; --m)
      svg += " " + px(f.sx(t.grid[m])) + "," + px(f.sy(res.low[p * k + m]));
    svg += "\"/>\n";

    svg += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    for (Index m = 0; m < k; ++m) {
      if (m) svg += ' ';
      svg += px(f.sx(t.grid[m])) + "," + px(f.sy(t.rows(0, p * k + m)));
    }
    svg += "\"/>\n";

    for (Index m = 0; m < k; ++m) {
      if (!exit_set.count(p * k + m)) continue;
      svg += "<circle cx=\"" + px(f.sx(t.grid[m])) + "\" cy=\"" +
             px(f.sy(t.rows(0, p * k + m))) + "\" r=\"2.5\" fill=\"red\"/>\n";
    }

    // axes
    svg += "<rect x=\"" + px(f.x0) + "\" y=\"" + px(f.y0) + "\" width=\"" + px(f.w) +
           "\" height=\"" + px(f.h) + "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    const double xt[3] = {f.tmin, 0.5 * (f.tmin + f.tmax), f.tmax};
    for (double tv : xt) {
      svg += "<line x1=\"" + px(f.sx(tv)) + "\" y1=\"" + px(f.y0 + f.h) + "\" x2=\"" +
             px(f.sx(tv)) + "\" y2=\"" + px(f.y0 + f.h + 4) + "\" stroke=\"#333333\"/>\n";
      svg += "<text x=\"" + px(f.sx(tv)) + "\" y=\"" + px(f.y0 + f.h + 16) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
             tick_label(tv) + "</text>\n";
    }
    const double yt[2] = {f.vmin, f.vmax};
    for (double vv : yt) {
      svg += "<line x1=\"" + px(f.x0 - 4) + "\" y1=\"" + px(f.sy(vv)) + "\" x2=\"" + px(f.x0) +
             "\" y2=\"" + px(f.sy(vv)) + "\" stroke=\"#333333\"/>\n";
      svg += "<text x=\"" + px(f.x0 - 6) + "\" y=\"" + px(f.sy(vv) + 3) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
             tick_label(vv) + "</text>\n";
    }
    svg += "</g>\n";
  }

  svg += "</svg>\n";
  return svg;
}

void write_envelope_svg(const TestVectorMatrix& t, const EnvelopeResult& res,
                        const SvgOptions& opts, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << envelope_svg(t, res, opts);
  if (!out) throw Error("failed writing '" + path + "'");
}

} // namespace fglm
