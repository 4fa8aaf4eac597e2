#ifndef FGLM_SVG_HPP
#define FGLM_SVG_HPP

#include <string>

#include "fglm/envelope.hpp"
#include "fglm/stats.hpp"

namespace fglm {

struct SvgOptions {
  double panel_width = 260;
  double panel_height = 190;
  Index columns = 3;             ///< panels per row
  bool only_significant = false; ///< keep only panels containing exits
  std::string title;
};

/// Hand-rolled SVG 1.1 figure: one <g class="panel"> per effect curve with
/// the envelope as a grey polygon, the observed curve as a black polyline and
/// exit points as red dots.
std::string envelope_svg(const TestVectorMatrix& t, const EnvelopeResult& res,
                         const SvgOptions& opts);

void write_envelope_svg(const TestVectorMatrix& t, const EnvelopeResult& res,
                        const SvgOptions& opts, const std::string& path);

} // namespace fglm

#endif
