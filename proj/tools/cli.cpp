// Command-line front end: validation, aggregation, rotation, timeline
// induction, evaluation, analysis, synthetic data, and pair generation.
// Exit codes: 0 success, 1 schema/validation error, 2 numeric failure.

#include "reltime/analysis.hpp"
#include "reltime/corpus.hpp"
#include "reltime/errors.hpp"
#include "reltime/induction.hpp"
#include "reltime/metrics.hpp"
#include "reltime/qa.hpp"
#include "reltime/svg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace reltime;

constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

struct CommandError {
    int code;
    std::string message;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw CommandError{kExitValidation, "cannot open input file: " + path};
    }
    return in;
}

std::string read_file(const std::string& path) {
    std::ifstream in = open_input(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::string& data, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << data;
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        throw CommandError{kExitValidation, "cannot open output file: " + out_path};
    }
    out << data;
}

std::vector<json> read_jsonl(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<json> lines;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded()) {
            throw SchemaError(line_no, "", "malformed JSON in " + path);
        }
        lines.push_back(std::move(obj));
    }
    return lines;
}

RelativeTimeline timeline_from_array(const json& arr, std::size_t line_no,
                                     const char* field) {
    if (!arr.is_array() || arr.size() != 4) {
        throw SchemaError(line_no, field, "expected 4 values");
    }
    for (const auto& v : arr) {
        if (!v.is_number()) throw SchemaError(line_no, field, "expected numbers");
    }
    return {arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>(),
            arr[3].get<double>()};
}

// Normalized timelines from JSONL rows carrying either a "timeline"
// (already normalized) or raw "sliders".
std::vector<RelativeTimeline> load_relative_timelines(const std::string& path) {
    std::vector<RelativeTimeline> out;
    const auto lines = read_jsonl(path);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const auto& obj = lines[k];
        const std::size_t line_no = k + 1;
        if (obj.contains("timeline")) {
            const auto t = timeline_from_array(obj["timeline"], line_no, "timeline");
            if (!is_valid(t)) {
                throw SchemaError(line_no, "timeline", "not a normalized relative timeline");
            }
            out.push_back(t);
        } else if (obj.contains("sliders")) {
            const auto s = timeline_from_array(obj["sliders"], line_no, "sliders");
            out.push_back(normalize_sliders({s.b1, s.e1, s.b2, s.e2}));
        } else {
            throw SchemaError(line_no, "timeline", "need a 'timeline' or 'sliders' field");
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// validate
// --------------------------------------------------------------------------

std::vector<Assignment> group_assignments(const std::vector<AnnotationRecord>& records) {
    std::vector<Assignment> assignments;
    std::size_t at = 0;
    while (at < records.size()) {
        std::size_t end = at;
        while (end < records.size() && records[end].annotator_id == records[at].annotator_id) {
            ++end;
        }
        const std::size_t run = end - at;
        if (run % 5 != 0) {
            throw MalformedAssignment("annotator '" + records[at].annotator_id + "' has " +
                                      std::to_string(run) +
                                      " consecutive annotations; expected multiples of 5");
        }
        for (std::size_t start = at; start < end; start += 5) {
            Assignment a;
            a.annotator_id = records[start].annotator_id;
            a.elapsed_seconds = records[start].elapsed_seconds;
            a.annotations.assign(records.begin() + static_cast<long>(start),
                                 records.begin() + static_cast<long>(start + 5));
            assignments.push_back(std::move(a));
        }
        at = end;
    }
    return assignments;
}

int cmd_validate(const std::string& input, const std::string& out_path) {
    std::ifstream in = open_input(input);
    const auto records = parse_annotations(in);
    std::string out;
    for (const auto& assignment : group_assignments(records)) {
        const auto flags = validate_assignment(assignment);
        json line;
        line["annotator_id"] = assignment.annotator_id;
        json arr = json::array();
        for (const auto& f : flags) arr.push_back(to_string(f.kind));
        line["flags"] = std::move(arr);
        out += line.dump() + "\n";
    }
    write_output(out, out_path);
    return 0;
}

// --------------------------------------------------------------------------
// aggregate
// --------------------------------------------------------------------------

int cmd_aggregate(const std::string& input, const std::string& out_path) {
    std::ifstream in = open_input(input);
    const auto records = parse_annotations(in);

    // Ridit histories per annotator: relation confidences in one channel,
    // both duration confidences pooled in the other.
    std::map<std::string, std::vector<int>> rel_hist, dur_hist;
    for (const auto& r : records) {
        rel_hist[r.annotator_id].push_back(r.conf_rel);
        dur_hist[r.annotator_id].push_back(r.conf_dur1);
        dur_hist[r.annotator_id].push_back(r.conf_dur2);
    }
    std::map<std::string, std::vector<double>> rel_scores, dur_scores;
    for (const auto& [id, hist] : rel_hist) rel_scores[id] = ridit_scores(hist);
    for (const auto& [id, hist] : dur_hist) dur_scores[id] = ridit_scores(hist);

    std::map<std::string, std::size_t> rel_at, dur_at;
    std::string out;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        RelativeTimeline timeline;
        try {
            timeline = normalize_sliders(r.sliders);
        } catch (const DegenerateSliders& e) {
            throw CommandError{kExitValidation,
                               "record " + std::to_string(k + 1) + ": " + e.what()};
        }
        json line;
        line["document_id"] = r.document_id;
        line["annotator_id"] = r.annotator_id;
        line["timeline"] = {timeline.b1, timeline.e1, timeline.b2, timeline.e2};
        line["dur1"] = to_string(r.dur1);
        line["dur2"] = to_string(r.dur2);
        json weights;
        weights["rel"] = rel_scores[r.annotator_id][rel_at[r.annotator_id]++];
        weights["dur1"] = dur_scores[r.annotator_id][dur_at[r.annotator_id]++];
        weights["dur2"] = dur_scores[r.annotator_id][dur_at[r.annotator_id]++];
        line["weights"] = std::move(weights);
        out += line.dump() + "\n";
    }
    write_output(out, out_path);
    return 0;
}

// --------------------------------------------------------------------------
// rotate
// --------------------------------------------------------------------------

int cmd_rotate(const std::string& input, const std::string& out_path) {
    const auto timelines = load_relative_timelines(input);
    std::string out;
    for (const auto& t : timelines) {
        const auto r = rotate(t);
        json line;
        line["priority"] = r.priority;
        line["containment"] = r.containment;
        line["equality"] = r.equality;
        line["shift"] = r.shift;
        out += line.dump() + "\n";
    }
    write_output(out, out_path);
    return 0;
}

// --------------------------------------------------------------------------
// induce
// --------------------------------------------------------------------------

struct InduceOptions {
    std::string input;
    std::string out_path;
    std::string svg_prefix;
    std::string names_path;
    InductionConfig config;
    int jobs = 1;
};

int cmd_induce(const InduceOptions& opt) {
    std::ifstream in = open_input(opt.input);
    const auto docs = parse_observations(in);
    if (docs.empty()) {
        throw CommandError{kExitValidation, "no observations in " + opt.input};
    }
    std::map<std::string, std::vector<std::string>> names;
    if (!opt.names_path.empty()) {
        const json obj = json::parse(read_file(opt.names_path), nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            throw CommandError{kExitValidation, "names file must be a JSON object"};
        }
        for (const auto& [key, value] : obj.items()) {
            names[key] = value.get<std::vector<std::string>>();
        }
    }

    std::vector<InductionResult> results(docs.size());
    const auto run_one = [&](std::size_t d) {
        return induce(docs[d].observations, docs[d].n_predicates, opt.config);
    };
    if (opt.jobs <= 1) {
        for (std::size_t d = 0; d < docs.size(); ++d) results[d] = run_one(d);
    } else {
        std::size_t next = 0;
        while (next < docs.size()) {
            const std::size_t batch =
                std::min(static_cast<std::size_t>(opt.jobs), docs.size() - next);
            std::vector<std::future<InductionResult>> futures;
            futures.reserve(batch);
            for (std::size_t b = 0; b < batch; ++b) {
                futures.push_back(
                    std::async(std::launch::async, run_one, next + b));
            }
            for (std::size_t b = 0; b < batch; ++b) {
                results[next + b] = futures[b].get();
            }
            next += batch;
        }
    }

    bool all_converged = true;
    std::string out;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        TimelineDocument doc;
        doc.document_id = docs[d].document_id;
        doc.timeline = results[d].timeline;
        doc.loss = results[d].diagnostics.final_loss;
        doc.iterations = results[d].diagnostics.iterations;
        const auto it = names.find(doc.document_id);
        for (std::size_t k = 0; k < doc.timeline.size(); ++k) {
            if (it != names.end() && k < it->second.size()) {
                doc.texts.push_back(it->second[k]);
            } else {
                doc.texts.push_back("pred_" + std::to_string(k));
            }
        }
        out += serialize_timeline(doc) + "\n";
        if (!opt.svg_prefix.empty()) {
            write_output(render_timeline_svg(doc.timeline, doc.texts),
                         opt.svg_prefix + doc.document_id + ".svg");
        }
        if (!results[d].diagnostics.converged) {
            all_converged = false;
            std::cerr << "warning: document " << doc.document_id
                      << " did not converge within max-iters\n";
        }
    }
    write_output(out, opt.out_path);
    return all_converged ? 0 : kExitNumeric;
}

// --------------------------------------------------------------------------
// eval
// --------------------------------------------------------------------------

std::vector<DurationClass> load_durations(const std::string& path) {
    std::vector<DurationClass> out;
    const auto lines = read_jsonl(path);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const auto& obj = lines[k];
        const std::size_t line_no = k + 1;
        const auto from_value = [&](const json& v, const char* field) {
            if (v.is_string()) return duration_class_from_string(v.get<std::string>());
            if (v.is_number_integer()) return duration_class_from_rank(v.get<int>());
            throw SchemaError(line_no, field, "expected a class name or rank");
        };
        if (obj.contains("dur")) {
            out.push_back(from_value(obj["dur"], "dur"));
        } else if (obj.contains("dur1") && obj.contains("dur2")) {
            out.push_back(from_value(obj["dur1"], "dur1"));
            out.push_back(from_value(obj["dur2"], "dur2"));
        } else {
            throw SchemaError(line_no, "dur", "need 'dur' or 'dur1'/'dur2' fields");
        }
    }
    return out;
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path,
             std::string task, const std::string& out_path) {
    if (task == "auto") {
        const auto lines = read_jsonl(gold_path);
        if (lines.empty()) {
            throw CommandError{kExitValidation, "gold file is empty"};
        }
        const auto& first = lines.front();
        const bool has_rel = first.contains("predicates") ||
                             first.contains("timeline") || first.contains("sliders");
        const bool has_dur = first.contains("dur") || first.contains("dur1");
        if (first.contains("predicates")) {
            task = "timelines";
        } else if (has_rel && has_dur) {
            throw CommandError{kExitValidation,
                               "payload carries both relations and durations; "
                               "pass --task to choose"};
        } else if (has_rel) {
            task = "relations";
        } else if (has_dur) {
            task = "durations";
        } else {
            throw CommandError{kExitValidation, "cannot detect payload kind from gold file"};
        }
    }

    json report;
    if (task == "durations") {
        const auto gold = load_durations(gold_path);
        const auto pred = load_durations(pred_path);
        report = json::parse(to_json_string(eval_durations(gold, pred)));
    } else if (task == "relations") {
        const auto gold = load_relative_timelines(gold_path);
        const auto pred = load_relative_timelines(pred_path);
        report = json::parse(to_json_string(eval_relations(gold, pred)));
    } else if (task == "timelines") {
        std::ifstream gin = open_input(gold_path);
        std::ifstream pin = open_input(pred_path);
        const auto gold = parse_timelines(gin);
        const auto pred = parse_timelines(pin);
        std::map<std::string, const TimelineDocument*> by_id;
        for (const auto& d : pred) by_id[d.document_id] = &d;
        json docs = json::array();
        double begin_sum = 0.0, duration_sum = 0.0;
        for (const auto& g : gold) {
            const auto it = by_id.find(g.document_id);
            if (it == by_id.end()) {
                throw CommandError{kExitValidation,
                                   "document " + g.document_id + " missing from pred file"};
            }
            const auto agreement = compare_timelines(g.timeline, it->second->timeline);
            json d;
            d["document_id"] = g.document_id;
            d["begin_rho"] = agreement.begin_rho;
            d["duration_rho"] = agreement.duration_rho;
            docs.push_back(std::move(d));
            begin_sum += agreement.begin_rho;
            duration_sum += agreement.duration_rho;
        }
        report["documents"] = std::move(docs);
        report["mean_begin_rho"] = begin_sum / static_cast<double>(gold.size());
        report["mean_duration_rho"] = duration_sum / static_cast<double>(gold.size());
    } else {
        throw CommandError{kExitValidation, "unknown eval task: " + task};
    }
    write_output(report.dump() + "\n", out_path);
    return 0;
}

// --------------------------------------------------------------------------
// analyze
// --------------------------------------------------------------------------

std::vector<std::vector<double>> load_matrix(const std::string& path) {
    std::vector<std::vector<double>> rows;
    const auto lines = read_jsonl(path);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const auto& obj = lines[k];
        if (!obj.is_array()) {
            throw SchemaError(k + 1, "", "expected a JSON array per line");
        }
        rows.push_back(obj.get<std::vector<double>>());
    }
    return rows;
}

int cmd_analyze_cca(const std::string& x_path, const std::string& y_path,
                    const std::string& out_path) {
    TwoViewSample sample{load_matrix(x_path), load_matrix(y_path)};
    json report;
    report["correlations"] = cca(sample);
    write_output(report.dump() + "\n", out_path);
    return 0;
}

int cmd_analyze_attribution(const std::string& input, const std::string& names_path,
                            const std::string& out_path) {
    std::vector<AttributionProblem> problems;
    const auto lines = read_jsonl(input);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const auto& obj = lines[k];
        if (!obj.contains("alpha") || !obj.contains("features")) {
            throw SchemaError(k + 1, "alpha", "need 'alpha' and 'features' fields");
        }
        AttributionProblem p;
        p.alpha = obj["alpha"].get<std::vector<double>>();
        p.features = obj["features"].get<std::vector<std::vector<double>>>();
        problems.push_back(std::move(p));
    }
    const auto result = kl_attribution(problems);

    std::vector<std::string> names;
    if (!names_path.empty()) {
        const json arr = json::parse(read_file(names_path), nullptr, false);
        if (arr.is_discarded() || !arr.is_array()) {
            throw CommandError{kExitValidation, "feature names file must be a JSON array"};
        }
        names = arr.get<std::vector<std::string>>();
    }
    json coeffs;
    for (std::size_t f = 0; f < result.coefficients.size(); ++f) {
        const std::string name =
            f < names.size() ? names[f] : "f" + std::to_string(f);
        coeffs[name] = result.coefficients[f];
    }
    json report;
    report["coefficients"] = std::move(coeffs);
    report["mean_kl"] = result.mean_kl;
    report["iterations"] = result.iterations;
    write_output(report.dump() + "\n", out_path);
    if (!result.converged) {
        std::cerr << "warning: attribution regression did not converge\n";
        return kExitNumeric;
    }
    return 0;
}

int cmd_analyze_coords(const std::string& gold_path, const std::string& pred_path,
                       const std::string& out_path) {
    const auto gold_t = load_relative_timelines(gold_path);
    const auto pred_t = load_relative_timelines(pred_path);
    std::vector<RelationCoordinates> gold, pred;
    for (const auto& t : gold_t) gold.push_back(rotate(t));
    for (const auto& t : pred_t) pred.push_back(rotate(t));
    const auto agreement = coordinate_agreement(gold, pred);
    json report;
    report["priority"] = agreement.priority;
    report["containment"] = agreement.containment;
    report["equality"] = agreement.equality;
    report["shift"] = agreement.shift;
    write_output(report.dump() + "\n", out_path);
    return 0;
}

// --------------------------------------------------------------------------
// synth
// --------------------------------------------------------------------------

struct SynthOptions {
    SynthConfig config;
    int docs = 1;
    std::string out_prefix;
};

int cmd_synth(const SynthOptions& opt) {
    std::string observations, annotations, truth;
    for (int d = 0; d < opt.docs; ++d) {
        SynthConfig cfg = opt.config;
        cfg.seed = opt.config.seed + static_cast<std::uint64_t>(d);
        const auto doc = synth_document(cfg);
        for (const auto& o : doc.observations) {
            observations += serialize_observation_line(doc.document_id, o) + "\n";
        }
        for (const auto& a : doc.annotations) {
            annotations += serialize_annotation(a) + "\n";
        }
        TimelineDocument t;
        t.document_id = doc.document_id;
        t.timeline = doc.truth;
        for (std::size_t k = 0; k < doc.truth.size(); ++k) {
            t.texts.push_back("pred_" + std::to_string(k));
        }
        truth += serialize_timeline(t) + "\n";
    }
    write_output(observations, opt.out_prefix + ".observations.jsonl");
    write_output(annotations, opt.out_prefix + ".annotations.jsonl");
    write_output(truth, opt.out_prefix + ".truth.jsonl");
    std::cerr << "wrote " << opt.out_prefix << ".{observations,annotations,truth}.jsonl\n";
    return 0;
}

// --------------------------------------------------------------------------
// pairs
// --------------------------------------------------------------------------

int cmd_pairs(const std::string& conllu_path, const std::string& predicates_path,
              const std::string& out_path) {
    std::ifstream in = open_input(conllu_path);
    auto sentences = parse_conllu(in);
    attach_predicate_roots(sentences, read_file(predicates_path));
    std::string out;
    for (std::size_t s = 0; s + 1 < sentences.size(); ++s) {
        const auto& ant = sentences[s];
        const auto& cons = sentences[s + 1];
        if (ant.predicate_roots.empty()) {
            std::cerr << "warning: sentence '" << ant.sentence_id
                      << "' has no predicates; skipping pair window\n";
            continue;
        }
        for (const auto& pair : generate_pairs(ant, cons)) {
            json line;
            line["sent1"] = pair.sentence1 == 0 ? ant.sentence_id : cons.sentence_id;
            line["root1"] = pair.root1;
            line["sent2"] = pair.sentence2 == 0 ? ant.sentence_id : cons.sentence_id;
            line["root2"] = pair.root2;
            out += line.dump() + "\n";
        }
    }
    write_output(out, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pairwise event timeline toolkit: normalization, rotation, "
                 "duration models, QA, timeline induction, and evaluation"};
    app.require_subcommand(1);

    std::string input, out_path, gold_path, pred_path;

    auto* validate = app.add_subcommand("validate", "Run rejection checks per assignment");
    validate->add_option("--input", input, "annotation JSONL")->required();
    validate->add_option("--out", out_path, "output path (default stdout)");

    auto* aggregate =
        app.add_subcommand("aggregate", "Normalized timelines plus ridit weights per record");
    aggregate->add_option("--input", input, "annotation JSONL")->required();
    aggregate->add_option("--out", out_path, "output path (default stdout)");

    auto* rotate_cmd =
        app.add_subcommand("rotate", "Relation coordinates for each timeline or slider row");
    rotate_cmd->add_option("--input", input, "JSONL with 'timeline' or 'sliders'")->required();
    rotate_cmd->add_option("--out", out_path, "output path (default stdout)");

    InduceOptions induce_opt;
    auto* induce_cmd = app.add_subcommand("induce", "Induce document timelines");
    induce_cmd->add_option("--input", induce_opt.input, "observation JSONL")->required();
    induce_cmd->add_option("--out", induce_opt.out_path, "output path (default stdout)");
    induce_cmd->add_option("--svg", induce_opt.svg_prefix,
                           "write <prefix><document_id>.svg per document");
    induce_cmd->add_option("--names", induce_opt.names_path,
                           "JSON object: document_id -> predicate labels");
    induce_cmd->add_option("--lambda", induce_opt.config.duration_weight,
                           "duration penalty weight");
    induce_cmd->add_option("--max-iters", induce_opt.config.max_iters, "iteration budget");
    induce_cmd->add_option("--step", induce_opt.config.step_size, "initial step size");
    induce_cmd->add_option("--tolerance", induce_opt.config.tolerance,
                           "relative loss change for convergence");
    induce_cmd->add_option("--seed", induce_opt.config.seed, "seed for fallback placement");
    induce_cmd->add_option("--jobs", induce_opt.jobs, "documents induced in parallel");

    std::string eval_task = "auto";
    auto* eval_cmd = app.add_subcommand("eval", "Score predictions against gold");
    eval_cmd->add_option("--gold", gold_path, "gold JSONL")->required();
    eval_cmd->add_option("--pred", pred_path, "prediction JSONL")->required();
    eval_cmd->add_option("--task", eval_task,
                         "auto | durations | relations | timelines");
    eval_cmd->add_option("--out", out_path, "output path (default stdout)");

    auto* analyze = app.add_subcommand("analyze", "CCA, attribution, coordinate agreement");
    analyze->require_subcommand(1);
    std::string x_path, y_path, names_path;
    auto* cca_cmd = analyze->add_subcommand("cca", "Canonical correlations of two views");
    cca_cmd->add_option("--x", x_path, "view X: JSONL, one array per row")->required();
    cca_cmd->add_option("--y", y_path, "view Y: JSONL, one array per row")->required();
    cca_cmd->add_option("--out", out_path, "output path (default stdout)");
    auto* attr_cmd = analyze->add_subcommand(
        "attribution", "KL regression from binary features to attention weights");
    attr_cmd->add_option("--input", input, "JSONL with 'alpha' and 'features'")->required();
    attr_cmd->add_option("--names", names_path, "JSON array of feature names");
    attr_cmd->add_option("--out", out_path, "output path (default stdout)");
    auto* coords_cmd =
        analyze->add_subcommand("coords", "Per-dimension Spearman in rotated space");
    coords_cmd->add_option("--gold", gold_path, "gold timelines/sliders JSONL")->required();
    coords_cmd->add_option("--pred", pred_path, "predicted timelines/sliders JSONL")->required();
    coords_cmd->add_option("--out", out_path, "output path (default stdout)");

    SynthOptions synth_opt;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic document");
    synth_cmd->add_option("--n", synth_opt.config.n_predicates, "predicates per document")
        ->required();
    synth_cmd->add_option("--noise", synth_opt.config.noise_sd, "slider noise sd");
    synth_cmd->add_option("--seed", synth_opt.config.seed, "random seed");
    synth_cmd->add_option("--coeff", synth_opt.config.duration_coeff,
                          "duration link coefficient");
    synth_cmd->add_option("--docs", synth_opt.docs, "number of documents");
    synth_cmd->add_option("--out-prefix", synth_opt.out_prefix, "output file prefix")
        ->required();

    auto* pairs_cmd = app.add_subcommand("pairs", "Predicate pairs from CoNLL-U + sidecar");
    std::string conllu_path, predicates_path;
    pairs_cmd->add_option("--conllu", conllu_path, "CoNLL-U file")->required();
    pairs_cmd->add_option("--predicates", predicates_path,
                          "sidecar JSON: sentence_id -> predicate roots")
        ->required();
    pairs_cmd->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (validate->parsed()) return cmd_validate(input, out_path);
        if (aggregate->parsed()) return cmd_aggregate(input, out_path);
        if (rotate_cmd->parsed()) return cmd_rotate(input, out_path);
        if (induce_cmd->parsed()) return cmd_induce(induce_opt);
        if (eval_cmd->parsed()) return cmd_eval(gold_path, pred_path, eval_task, out_path);
        if (analyze->parsed()) {
            if (cca_cmd->parsed()) return cmd_analyze_cca(x_path, y_path, out_path);
            if (attr_cmd->parsed()) return cmd_analyze_attribution(input, names_path, out_path);
            if (coords_cmd->parsed()) return cmd_analyze_coords(gold_path, pred_path, out_path);
        }
        if (synth_cmd->parsed()) return cmd_synth(synth_opt);
        if (pairs_cmd->parsed()) return cmd_pairs(conllu_path, predicates_path, out_path);
    } catch (const CommandError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const SingularCovariance& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
