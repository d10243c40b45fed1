#ifndef RELTIME_ANNOTATION_HPP
#define RELTIME_ANNOTATION_HPP

#include "reltime/duration.hpp"
#include "reltime/timeline.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace reltime {

// One pairwise annotation as collected: raw sliders for the two events, a
// categorical duration per event, and confidence ratings on the 0-4 scale
// for the relation and each duration.
struct AnnotationRecord {
    std::string document_id;
    std::array<std::string, 2> sentence_ids;
    int pred1_root = 0;
    std::pair<int, int> pred1_span{0, 0};
    int pred2_root = 0;
    std::pair<int, int> pred2_span{0, 0};
    SliderQuadruple sliders;
    DurationClass dur1 = DurationClass::Instantaneous;
    DurationClass dur2 = DurationClass::Instantaneous;
    int conf_rel = 4;
    int conf_dur1 = 4;
    int conf_dur2 = 4;
    std::string annotator_id;
    double elapsed_seconds = 0.0;

    bool operator==(const AnnotationRecord&) const = default;
};

// A dependency-parsed sentence reduced to the columns the pair generator
// needs: token forms, 1-based head indices (0 = root), relation labels, and
// the token indices of predicate roots.
struct DependencySentence {
    std::string sentence_id;
    std::vector<std::string> forms;
    std::vector<int> heads;
    std::vector<std::string> deprels;
    std::vector<int> predicate_roots;  // 1-based token indices

    std::size_t size() const { return forms.size(); }
};

}  // namespace reltime

#endif  // RELTIME_ANNOTATION_HPP
