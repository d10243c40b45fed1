#include "reltime/svg.hpp"

#include "reltime/errors.hpp"

#include <doctest.h>

#include <string>
#include <vector>

using namespace reltime;

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0, at = 0;
    while ((at = text.find(needle, at)) != std::string::npos) {
        ++count;
        at += needle.size();
    }
    return count;
}

}  // namespace

TEST_CASE("one bar per predicate") {
    DocumentTimeline one;
    one.entries = {{0.0, 2.0}};
    const std::vector<std::string> labels{"eat"};
    const auto svg = render_timeline_svg(one, labels);
    CHECK(count_occurrences(svg, "<rect") == 1);
    CHECK(count_occurrences(svg, "<text") == 1);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
    CHECK(svg.find("eat") != std::string::npos);
}

TEST_CASE("identical predicates draw identical bars") {
    DocumentTimeline twins;
    twins.entries = {{1.0, 2.0}, {1.0, 2.0}};
    const std::vector<std::string> labels{"a", "b"};
    const auto svg = render_timeline_svg(twins, labels);
    CHECK(count_occurrences(svg, "<rect") == 2);
    // both bars share x and width
    const auto first = svg.find("<rect x=\"");
    const auto second = svg.find("<rect x=\"", first + 1);
    const auto x1 = svg.substr(first, svg.find("height", first) - first);
    const auto x2 = svg.substr(second, svg.find("height", second) - second);
    const auto strip_y = [](std::string s) {
        const auto at = s.find(" y=");
        return s.substr(0, at);
    };
    CHECK(strip_y(x1) == strip_y(x2));
}

TEST_CASE("rendering is byte-deterministic and escapes labels") {
    DocumentTimeline t;
    t.entries = {{0.0, 1.0}, {0.5, 2.5}, {2.0, 0.25}};
    const std::vector<std::string> labels{"<wait>", "A&B", "plain"};
    const auto a = render_timeline_svg(t, labels);
    const auto b = render_timeline_svg(t, labels);
    CHECK(a == b);
    CHECK(a.find("&lt;wait&gt;") != std::string::npos);
    CHECK(a.find("A&amp;B") != std::string::npos);

    // missing labels fall back to generated names
    const auto unlabeled = render_timeline_svg(t, {});
    CHECK(unlabeled.find("pred_2") != std::string::npos);

    DocumentTimeline empty;
    CHECK_THROWS_AS(render_timeline_svg(empty, {}), DomainError);
    DocumentTimeline bad;
    bad.entries = {{0.0, 0.0}};
    CHECK_THROWS_AS(render_timeline_svg(bad, {}), DomainError);
}
