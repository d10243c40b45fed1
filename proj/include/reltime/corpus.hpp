#ifndef RELTIME_CORPUS_HPP
#define RELTIME_CORPUS_HPP

#include "reltime/annotation.hpp"
#include "reltime/induction.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace reltime {

// ---------------------------------------------------------------------------
// Predicate pair generation
// ---------------------------------------------------------------------------

// Walk from the sentence's root predicate along ccomp/csubj/xcomp edges into
// further predicates until none remains; the terminal predicate is the
// pivot. When a predicate governs several such edges the leftmost dependent
// is followed. Returns a 1-based token index; throws NoPredicates.
int pivot_predicate(const DependencySentence& s);

struct PredicatePair {
    int sentence1;  // 0 = antecedent, 1 = consequent
    int root1;      // 1-based token index
    int sentence2;
    int root2;
};

// All unordered predicate pairs within the antecedent plus every consequent
// predicate paired with the antecedent's pivot: C(N,2) + M pairs.
std::vector<PredicatePair> generate_pairs(const DependencySentence& antecedent,
                                          const DependencySentence& consequent);

// ---------------------------------------------------------------------------
// Annotation records (JSON Lines)
// ---------------------------------------------------------------------------

// Parse one record per line; throws SchemaError carrying the 1-based line
// number and offending field. `first_line` offsets the reported numbers
// when the stream is a slice of a larger file.
std::vector<AnnotationRecord> parse_annotations(std::istream& in, std::size_t first_line = 1);
std::vector<AnnotationRecord> parse_annotations(const std::string& text);

// Single-line JSON form of a record; parse . serialize is the identity.
std::string serialize_annotation(const AnnotationRecord& record);

// ---------------------------------------------------------------------------
// CoNLL-U ingestion
// ---------------------------------------------------------------------------

// Read sentences from CoNLL-U text, keeping the ID/FORM/HEAD/DEPREL columns.
// Multiword-token and empty-node lines are skipped. Predicate roots are
// attached afterwards from the sidecar.
std::vector<DependencySentence> parse_conllu(std::istream& in);

// Sidecar JSON object: sentence_id -> list of 1-based predicate root
// indices. Sentences absent from the map get no predicates.
void attach_predicate_roots(std::vector<DependencySentence>& sentences,
                            const std::string& sidecar_json);

// ---------------------------------------------------------------------------
// Observation and timeline files (JSON Lines)
// ---------------------------------------------------------------------------

struct ObservationDocument {
    std::string document_id;
    std::size_t n_predicates = 0;
    std::vector<PairObservation> observations;
};

struct TimelineDocument {
    std::string document_id;
    std::vector<std::string> texts;  // one label per predicate
    DocumentTimeline timeline;
    double loss = 0.0;
    int iterations = 0;
};

std::vector<ObservationDocument> parse_observations(std::istream& in);
std::string serialize_observation_line(const std::string& document_id,
                                       const PairObservation& obs);

std::vector<TimelineDocument> parse_timelines(std::istream& in);
std::string serialize_timeline(const TimelineDocument& doc);

// ---------------------------------------------------------------------------
// Synthetic corpus oracle
// ---------------------------------------------------------------------------

struct SynthConfig {
    std::size_t n_predicates = 6;
    double noise_sd = 0.0;       // on raw slider units, pre-normalization
    double duration_coeff = 1.0; // c in pi = sigma(c log t)
    std::uint64_t seed = 0;
};

struct SynthDocument {
    std::string document_id;
    DocumentTimeline truth;
    std::vector<PairObservation> observations;
    std::vector<AnnotationRecord> annotations;
};

// Sample a ground-truth timeline with distinct endpoints, observe the ring
// of pairs (k, k+1) plus (0, n-1), perturb the raw projections with
// Gaussian noise, and derive gold duration classes as the binomial mode
// under pi = sigma(c log duration). Deterministic in the seed.
SynthDocument synth_document(const SynthConfig& cfg);

}  // namespace reltime

#endif  // RELTIME_CORPUS_HPP
