#include "reltime/corpus.hpp"

#include "reltime/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace reltime {

namespace {

using nlohmann::json;

std::string base_deprel(std::string label) {
    const auto colon = label.find(':');
    if (colon != std::string::npos) label.erase(colon);
    std::transform(label.begin(), label.end(), label.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return label;
}

bool is_clausal_complement(const std::string& deprel) {
    const std::string base = base_deprel(deprel);
    return base == "ccomp" || base == "csubj" || base == "xcomp";
}

json parse_json_line(const std::string& line, std::size_t line_no) {
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        throw SchemaError(line_no, "", "not a JSON object");
    }
    return obj;
}

const json& require_field(const json& obj, const char* field, std::size_t line_no) {
    const auto it = obj.find(field);
    if (it == obj.end()) {
        throw SchemaError(line_no, field, "missing field");
    }
    return *it;
}

double require_number(const json& obj, const char* field, std::size_t line_no) {
    const json& v = require_field(obj, field, line_no);
    if (!v.is_number()) {
        throw SchemaError(line_no, field, "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw SchemaError(line_no, field, "expected a finite number");
    }
    return d;
}

int require_int(const json& obj, const char* field, std::size_t line_no) {
    const json& v = require_field(obj, field, line_no);
    if (!v.is_number_integer()) {
        throw SchemaError(line_no, field, "expected an integer");
    }
    return v.get<int>();
}

std::string require_string(const json& obj, const char* field, std::size_t line_no) {
    const json& v = require_field(obj, field, line_no);
    if (!v.is_string()) {
        throw SchemaError(line_no, field, "expected a string");
    }
    return v.get<std::string>();
}

int require_confidence(const json& obj, const char* field, std::size_t line_no) {
    const int c = require_int(obj, field, line_no);
    if (c < 0 || c > 4) {
        throw SchemaError(line_no, field, "confidence must be in 0..4");
    }
    return c;
}

DurationClass require_duration(const json& obj, const char* field, std::size_t line_no) {
    const std::string name = require_string(obj, field, line_no);
    try {
        return duration_class_from_string(name);
    } catch (const DomainError&) {
        throw SchemaError(line_no, field, "unknown duration class '" + name + "'");
    }
}

std::pair<int, int> require_span(const json& obj, const char* field, int root,
                                 std::size_t line_no) {
    const json& v = require_field(obj, field, line_no);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
        !v[1].is_number_integer()) {
        throw SchemaError(line_no, field, "expected [start, end] token indices");
    }
    const std::pair<int, int> span{v[0].get<int>(), v[1].get<int>()};
    if (span.first > span.second || span.first < 1) {
        throw SchemaError(line_no, field, "span must be a nonempty 1-based range");
    }
    if (root < span.first || root > span.second) {
        throw SchemaError(line_no, field, "predicate root must lie inside its span");
    }
    return span;
}

SliderQuadruple require_sliders(const json& obj, std::size_t line_no) {
    const json& v = require_field(obj, "sliders", line_no);
    if (!v.is_array() || v.size() != 4) {
        throw SchemaError(line_no, "sliders", "expected exactly 4 values");
    }
    std::array<double, 4> s{};
    for (std::size_t k = 0; k < 4; ++k) {
        if (!v[k].is_number() || !std::isfinite(v[k].get<double>())) {
            throw SchemaError(line_no, "sliders", "expected finite numbers");
        }
        s[k] = v[k].get<double>();
    }
    if (s[1] < s[0] || s[3] < s[2]) {
        throw SchemaError(line_no, "sliders", "event end before its begin");
    }
    return {s[0], s[1], s[2], s[3]};
}

AnnotationRecord parse_record(const json& obj, std::size_t line_no) {
    AnnotationRecord r;
    r.document_id = require_string(obj, "document_id", line_no);
    const json& sids = require_field(obj, "sentence_ids", line_no);
    if (!sids.is_array() || sids.size() != 2 || !sids[0].is_string() || !sids[1].is_string()) {
        throw SchemaError(line_no, "sentence_ids", "expected a pair of strings");
    }
    r.sentence_ids = {sids[0].get<std::string>(), sids[1].get<std::string>()};
    r.pred1_root = require_int(obj, "pred1_root", line_no);
    r.pred1_span = require_span(obj, "pred1_span", r.pred1_root, line_no);
    r.pred2_root = require_int(obj, "pred2_root", line_no);
    r.pred2_span = require_span(obj, "pred2_span", r.pred2_root, line_no);
    r.sliders = require_sliders(obj, line_no);
    r.dur1 = require_duration(obj, "dur1", line_no);
    r.dur2 = require_duration(obj, "dur2", line_no);
    r.conf_rel = require_confidence(obj, "conf_rel", line_no);
    r.conf_dur1 = require_confidence(obj, "conf_dur1", line_no);
    r.conf_dur2 = require_confidence(obj, "conf_dur2", line_no);
    r.annotator_id = require_string(obj, "annotator_id", line_no);
    r.elapsed_seconds = require_number(obj, "elapsed_seconds", line_no);
    if (r.elapsed_seconds < 0.0) {
        throw SchemaError(line_no, "elapsed_seconds", "must be >= 0");
    }
    return r;
}

void validate_tree(const DependencySentence& s, std::size_t line_no) {
    const int n = static_cast<int>(s.size());
    int roots = 0;
    for (int head : s.heads) {
        if (head < 0 || head > n) {
            throw SchemaError(line_no, "head", "head index out of range");
        }
        if (head == 0) ++roots;
    }
    if (roots != 1) {
        throw SchemaError(line_no, "head",
                          "sentence must have exactly one root, got " + std::to_string(roots));
    }
    for (int t = 1; t <= n; ++t) {
        int at = t, steps = 0;
        while (at != 0) {
            at = s.heads[static_cast<std::size_t>(at - 1)];
            if (++steps > n) {
                throw SchemaError(line_no, "head", "head indices contain a cycle");
            }
        }
    }
}

}  // namespace

int pivot_predicate(const DependencySentence& s) {
    if (s.predicate_roots.empty()) {
        throw NoPredicates("sentence '" + s.sentence_id + "' has no predicates");
    }
    const int n = static_cast<int>(s.size());
    const std::set<int> preds(s.predicate_roots.begin(), s.predicate_roots.end());
    const auto depth = [&](int token) {
        int d = 0, at = token;
        while (at != 0) {
            at = s.heads[static_cast<std::size_t>(at - 1)];
            ++d;
        }
        return d;
    };

    int current = s.predicate_roots.front();
    int best_depth = depth(current);
    for (int root : s.predicate_roots) {
        const int d = depth(root);
        if (d < best_depth || (d == best_depth && root < current)) {
            current = root;
            best_depth = d;
        }
    }

    // Each followed edge moves strictly deeper, so the walk terminates.
    for (;;) {
        int next = 0;
        for (int t = 1; t <= n; ++t) {
            if (s.heads[static_cast<std::size_t>(t - 1)] == current &&
                is_clausal_complement(s.deprels[static_cast<std::size_t>(t - 1)]) &&
                preds.count(t) != 0) {
                next = t;
                break;
            }
        }
        if (next == 0) return current;
        current = next;
    }
}

std::vector<PredicatePair> generate_pairs(const DependencySentence& antecedent,
                                          const DependencySentence& consequent) {
    const int pivot = pivot_predicate(antecedent);
    std::vector<PredicatePair> pairs;
    const auto& roots = antecedent.predicate_roots;
    for (std::size_t a = 0; a < roots.size(); ++a) {
        for (std::size_t b = a + 1; b < roots.size(); ++b) {
            pairs.push_back({0, roots[a], 0, roots[b]});
        }
    }
    for (int root : consequent.predicate_roots) {
        pairs.push_back({0, pivot, 1, root});
    }
    return pairs;
}

std::vector<AnnotationRecord> parse_annotations(std::istream& in, std::size_t first_line) {
    std::vector<AnnotationRecord> records;
    std::string line;
    std::size_t line_no = first_line - 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        records.push_back(parse_record(parse_json_line(line, line_no), line_no));
    }
    return records;
}

std::vector<AnnotationRecord> parse_annotations(const std::string& text) {
    std::istringstream in(text);
    return parse_annotations(in);
}

std::string serialize_annotation(const AnnotationRecord& r) {
    json obj;
    obj["document_id"] = r.document_id;
    obj["sentence_ids"] = {r.sentence_ids[0], r.sentence_ids[1]};
    obj["pred1_root"] = r.pred1_root;
    obj["pred1_span"] = {r.pred1_span.first, r.pred1_span.second};
    obj["pred2_root"] = r.pred2_root;
    obj["pred2_span"] = {r.pred2_span.first, r.pred2_span.second};
    obj["sliders"] = {r.sliders.b1, r.sliders.e1, r.sliders.b2, r.sliders.e2};
    obj["dur1"] = to_string(r.dur1);
    obj["dur2"] = to_string(r.dur2);
    obj["conf_rel"] = r.conf_rel;
    obj["conf_dur1"] = r.conf_dur1;
    obj["conf_dur2"] = r.conf_dur2;
    obj["annotator_id"] = r.annotator_id;
    obj["elapsed_seconds"] = r.elapsed_seconds;
    return obj.dump();
}

std::vector<DependencySentence> parse_conllu(std::istream& in) {
    std::vector<DependencySentence> sentences;
    DependencySentence current;
    std::string line;
    std::size_t line_no = 0;
    std::size_t sentence_start = 1;
    std::string sent_id;

    const auto flush = [&]() {
        if (current.size() == 0) return;
        current.sentence_id = sent_id.empty() ? std::to_string(sentences.size()) : sent_id;
        validate_tree(current, sentence_start);
        sentences.push_back(std::move(current));
        current = DependencySentence{};
        sent_id.clear();
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush();
            sentence_start = line_no + 1;
            continue;
        }
        if (line.front() == '#') {
            const std::string prefix = "# sent_id = ";
            if (line.rfind(prefix, 0) == 0) sent_id = line.substr(prefix.size());
            continue;
        }
        std::vector<std::string> cols;
        std::size_t from = 0;
        while (from <= line.size()) {
            const std::size_t tab = line.find('\t', from);
            if (tab == std::string::npos) {
                cols.push_back(line.substr(from));
                break;
            }
            cols.push_back(line.substr(from, tab - from));
            from = tab + 1;
        }
        if (cols.size() < 8) {
            throw SchemaError(line_no, "columns", "expected at least 8 CoNLL-U columns");
        }
        // Ranges (multiword tokens) and empty nodes carry no tree edges.
        if (cols[0].find('-') != std::string::npos ||
            cols[0].find('.') != std::string::npos) {
            continue;
        }
        if (current.size() == 0) sentence_start = line_no;
        int head = 0;
        try {
            head = std::stoi(cols[6]);
        } catch (const std::exception&) {
            throw SchemaError(line_no, "head", "expected an integer HEAD column");
        }
        current.forms.push_back(cols[1]);
        current.heads.push_back(head);
        current.deprels.push_back(cols[7]);
    }
    flush();
    return sentences;
}

void attach_predicate_roots(std::vector<DependencySentence>& sentences,
                            const std::string& sidecar_json) {
    json obj = json::parse(sidecar_json, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        throw SchemaError(1, "", "predicate sidecar must be a JSON object");
    }
    std::map<std::string, std::vector<int>> roots;
    for (const auto& [key, value] : obj.items()) {
        if (!value.is_array()) {
            throw SchemaError(1, key, "expected a list of root token indices");
        }
        std::vector<int> indices;
        for (const auto& v : value) {
            if (!v.is_number_integer()) {
                throw SchemaError(1, key, "root indices must be integers");
            }
            indices.push_back(v.get<int>());
        }
        roots[key] = std::move(indices);
    }
    for (auto& s : sentences) {
        const auto it = roots.find(s.sentence_id);
        if (it == roots.end()) continue;
        for (int root : it->second) {
            if (root < 1 || root > static_cast<int>(s.size())) {
                throw SchemaError(1, s.sentence_id,
                                  "predicate root " + std::to_string(root) + " out of range");
            }
        }
        s.predicate_roots = it->second;
        std::sort(s.predicate_roots.begin(), s.predicate_roots.end());
    }
}

std::vector<ObservationDocument> parse_observations(std::istream& in) {
    std::vector<ObservationDocument> docs;
    std::map<std::string, std::size_t> index;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const json obj = parse_json_line(line, line_no);
        const std::string doc_id = require_string(obj, "document_id", line_no);
        PairObservation o;
        const int i = require_int(obj, "i", line_no);
        const int j = require_int(obj, "j", line_no);
        if (i < 0 || j < 0 || i == j) {
            throw SchemaError(line_no, "i", "indices must be distinct and >= 0");
        }
        o.i = static_cast<std::size_t>(i);
        o.j = static_cast<std::size_t>(j);
        const json& target = require_field(obj, "target", line_no);
        if (!target.is_array() || target.size() != 4) {
            throw SchemaError(line_no, "target", "expected 4 values");
        }
        o.target = {target[0].get<double>(), target[1].get<double>(),
                    target[2].get<double>(), target[3].get<double>()};
        if (!is_valid(o.target)) {
            throw SchemaError(line_no, "target", "not a normalized relative timeline");
        }
        if (obj.contains("weight")) {
            o.weight = require_number(obj, "weight", line_no);
            if (o.weight < 0.0) {
                throw SchemaError(line_no, "weight", "must be >= 0");
            }
        }
        if (obj.contains("dur1") != obj.contains("dur2")) {
            throw SchemaError(line_no, "dur1", "dur1 and dur2 must appear together");
        }
        if (obj.contains("dur1")) {
            o.gold_durations = {require_duration(obj, "dur1", line_no),
                                require_duration(obj, "dur2", line_no)};
        }
        auto at = index.find(doc_id);
        if (at == index.end()) {
            at = index.emplace(doc_id, docs.size()).first;
            docs.push_back({doc_id, 0, {}});
        }
        auto& doc = docs[at->second];
        doc.n_predicates = std::max({doc.n_predicates, o.i + 1, o.j + 1});
        doc.observations.push_back(std::move(o));
    }
    return docs;
}

std::string serialize_observation_line(const std::string& document_id,
                                       const PairObservation& obs) {
    json obj;
    obj["document_id"] = document_id;
    obj["i"] = obs.i;
    obj["j"] = obs.j;
    obj["target"] = {obs.target.b1, obs.target.e1, obs.target.b2, obs.target.e2};
    obj["weight"] = obs.weight;
    if (obs.gold_durations) {
        obj["dur1"] = to_string(obs.gold_durations->first);
        obj["dur2"] = to_string(obs.gold_durations->second);
    }
    return obj.dump();
}

std::vector<TimelineDocument> parse_timelines(std::istream& in) {
    std::vector<TimelineDocument> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const json obj = parse_json_line(line, line_no);
        TimelineDocument doc;
        doc.document_id = require_string(obj, "document_id", line_no);
        const json& preds = require_field(obj, "predicates", line_no);
        if (!preds.is_array() || preds.empty()) {
            throw SchemaError(line_no, "predicates", "expected a nonempty array");
        }
        doc.texts.resize(preds.size());
        doc.timeline.entries.resize(preds.size());
        std::vector<bool> seen(preds.size(), false);
        for (const auto& p : preds) {
            if (!p.is_object()) {
                throw SchemaError(line_no, "predicates", "expected objects");
            }
            const int id = require_int(p, "id", line_no);
            if (id < 0 || id >= static_cast<int>(preds.size()) || seen[id]) {
                throw SchemaError(line_no, "id", "ids must be unique in 0..n-1");
            }
            seen[static_cast<std::size_t>(id)] = true;
            const double begin = require_number(p, "begin", line_no);
            const double duration = require_number(p, "duration", line_no);
            if (begin < 0.0 || duration <= 0.0) {
                throw SchemaError(line_no, "begin",
                                  "begins must be >= 0 and durations > 0");
            }
            doc.texts[id] = require_string(p, "text", line_no);
            doc.timeline.entries[id] = {begin, duration};
        }
        doc.loss = require_number(obj, "loss", line_no);
        doc.iterations = require_int(obj, "iterations", line_no);
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::string serialize_timeline(const TimelineDocument& doc) {
    json preds = json::array();
    for (std::size_t k = 0; k < doc.timeline.size(); ++k) {
        json p;
        p["id"] = k;
        p["text"] = k < doc.texts.size() ? doc.texts[k] : "pred_" + std::to_string(k);
        p["begin"] = doc.timeline.entries[k].begin;
        p["duration"] = doc.timeline.entries[k].duration;
        preds.push_back(std::move(p));
    }
    json obj;
    obj["document_id"] = doc.document_id;
    obj["predicates"] = std::move(preds);
    obj["loss"] = doc.loss;
    obj["iterations"] = doc.iterations;
    return obj.dump();
}

SynthDocument synth_document(const SynthConfig& cfg) {
    if (cfg.n_predicates < 2) {
        throw DomainError("synth_document: need at least 2 predicates");
    }
    if (!(cfg.noise_sd >= 0.0)) {
        throw DomainError("synth_document: noise_sd must be >= 0");
    }
    const std::size_t n = cfg.n_predicates;
    std::mt19937_64 rng(cfg.seed);
    // Separation keeps every endpoint distinct and the begin ordering
    // recoverable under modest noise; the domain grows with n so the
    // rejection sampler stays feasible for large documents.
    constexpr double kMinBeginGap = 0.5;
    constexpr double kMinEndpointGap = 0.05;
    const double span = std::max(10.0, 2.0 * kMinBeginGap * static_cast<double>(n));
    std::uniform_real_distribution<double> begin_dist(0.0, span);
    std::uniform_real_distribution<double> dur_dist(0.5, 3.0);

    DocumentTimeline truth;
    truth.entries.resize(n);
    std::vector<double> endpoints;
    for (std::size_t k = 0; k < n; ++k) {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            const double b = begin_dist(rng);
            const double d = dur_dist(rng);
            bool ok = true;
            for (std::size_t m = 0; m < k; ++m) {
                ok = ok && std::abs(b - truth.entries[m].begin) >= kMinBeginGap;
            }
            for (double e : endpoints) {
                ok = ok && std::abs(b - e) >= kMinEndpointGap &&
                     std::abs(b + d - e) >= kMinEndpointGap;
            }
            if (ok) {
                truth.entries[k] = {b, d};
                endpoints.push_back(b);
                endpoints.push_back(b + d);
                break;
            }
            if (attempt == 9999) {
                throw DomainError("synth_document: could not separate endpoints");
            }
        }
    }
    double min_begin = truth.entries.front().begin;
    for (const auto& e : truth.entries) min_begin = std::min(min_begin, e.begin);
    for (auto& e : truth.entries) e.begin -= min_begin;

    std::vector<std::pair<std::size_t, std::size_t>> ring;
    for (std::size_t k = 0; k + 1 < n; ++k) ring.emplace_back(k, k + 1);
    if (n > 2) ring.emplace_back(0, n - 1);

    std::normal_distribution<double> noise(0.0, 1.0);
    SynthDocument doc;
    doc.document_id = "synth-" + std::to_string(cfg.seed);
    doc.truth = truth;
    for (const auto& [i, j] : ring) {
        const auto& a = truth.entries[i];
        const auto& b = truth.entries[j];
        SliderQuadruple raw{a.begin, a.begin + a.duration, b.begin, b.begin + b.duration};
        if (cfg.noise_sd > 0.0) {
            for (int attempt = 0; attempt < 100; ++attempt) {
                SliderQuadruple jittered{
                    raw.b1 + cfg.noise_sd * noise(rng),
                    raw.e1 + cfg.noise_sd * noise(rng),
                    raw.b2 + cfg.noise_sd * noise(rng),
                    raw.e2 + cfg.noise_sd * noise(rng),
                };
                jittered.e1 = std::max(jittered.e1, jittered.b1);
                jittered.e2 = std::max(jittered.e2, jittered.b2);
                const auto v = jittered.values();
                if (*std::max_element(v.begin(), v.end()) >
                    *std::min_element(v.begin(), v.end())) {
                    raw = jittered;
                    break;
                }
            }
        }
        PairObservation obs;
        obs.i = i;
        obs.j = j;
        obs.target = normalize_sliders(raw);
        obs.weight = 1.0;
        const auto mode_for = [&](double duration) {
            return binomial_distribution(
                       pi_from_absolute_duration(duration, cfg.duration_coeff))
                .mode();
        };
        obs.gold_durations = {mode_for(a.duration), mode_for(b.duration)};
        doc.observations.push_back(obs);

        AnnotationRecord rec;
        rec.document_id = doc.document_id;
        rec.sentence_ids = {"s0", "s0"};
        rec.pred1_root = static_cast<int>(i) + 1;
        rec.pred1_span = {static_cast<int>(i) + 1, static_cast<int>(i) + 1};
        rec.pred2_root = static_cast<int>(j) + 1;
        rec.pred2_span = {static_cast<int>(j) + 1, static_cast<int>(j) + 1};
        rec.sliders = raw;
        rec.dur1 = obs.gold_durations->first;
        rec.dur2 = obs.gold_durations->second;
        rec.conf_rel = rec.conf_dur1 = rec.conf_dur2 = 4;
        rec.annotator_id = "synth";
        rec.elapsed_seconds = 300.0;
        doc.annotations.push_back(std::move(rec));
    }
    return doc;
}

}  // namespace reltime
