#include "reltime/svg.hpp"

#include "reltime/errors.hpp"

#include <algorithm>
#include <cstdio>

namespace reltime {

namespace {

constexpr double kCanvasWidth = 860.0;
constexpr double kMarginLeft = 150.0;
constexpr double kMarginRight = 20.0;
constexpr double kRowHeight = 26.0;
constexpr double kBarHeight = 16.0;
constexpr double kMarginTop = 12.0;

std::string format(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_timeline_svg(const DocumentTimeline& timeline,
                                std::span<const std::string> labels) {
    if (timeline.entries.empty()) {
        throw DomainError("render_timeline_svg: timeline must be nonempty");
    }
    double max_end = 0.0;
    for (const auto& e : timeline.entries) {
        if (!(e.duration > 0.0) || e.begin < 0.0) {
            throw DomainError("render_timeline_svg: invalid timeline entry");
        }
        max_end = std::max(max_end, e.begin + e.duration);
    }
    const double drawable = kCanvasWidth - kMarginLeft - kMarginRight;
    const double scale = drawable / max_end;
    const double height = kMarginTop * 2 + kRowHeight * static_cast<double>(timeline.size());

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format(kCanvasWidth) +
           "\" height=\"" + format(height) + "\" viewBox=\"0 0 " + format(kCanvasWidth) +
           " " + format(height) + "\">\n";
    for (std::size_t k = 0; k < timeline.size(); ++k) {
        const auto& e = timeline.entries[k];
        const double y = kMarginTop + kRowHeight * static_cast<double>(k);
        const double x = kMarginLeft + e.begin * scale;
        const double w = std::max(e.duration * scale, 1.0);
        const std::string label =
            k < labels.size() ? labels[k] : "pred_" + std::to_string(k);
        svg += "  <text x=\"" + format(kMarginLeft - 8.0) + "\" y=\"" +
               format(y + kBarHeight - 3.0) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
               escape(label) + "</text>\n";
        svg += "  <rect x=\"" + format(x) + "\" y=\"" + format(y) + "\" width=\"" +
               format(w) + "\" height=\"" + format(kBarHeight) +
               "\" fill=\"#4878a8\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace reltime
