#ifndef RELTIME_SVG_HPP
#define RELTIME_SVG_HPP

#include "reltime/induction.hpp"

#include <span>
#include <string>

namespace reltime {

// Render a document timeline as SVG: one horizontal bar per predicate,
// x-extents proportional to begin and begin + duration with the latest end
// scaled to the drawable width. Output is byte-deterministic for equal
// inputs. Labels beyond the predicate count are ignored; missing labels
// fall back to "pred_<k>".
std::string render_timeline_svg(const DocumentTimeline& timeline,
                                std::span<const std::string> labels);

}  // namespace reltime

#endif  // RELTIME_SVG_HPP
