#include "reltime/corpus.hpp"

#include "reltime/errors.hpp"
#include "reltime/metrics.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace reltime;

namespace {

// "Has anyone considered that perhaps George Bush just wanted to fly jets?"
// considered -ccomp-> wanted -xcomp-> fly
DependencySentence pivot_fixture() {
    DependencySentence s;
    s.sentence_id = "fixture";
    s.forms = {"Has",    "anyone", "considered", "that", "perhaps", "George", "Bush",
               "just",   "wanted", "to",         "fly",  "jets",    "?"};
    s.heads = {3, 3, 0, 9, 9, 7, 9, 9, 3, 11, 9, 11, 3};
    s.deprels = {"aux",      "nsubj", "root",  "mark", "advmod", "compound", "nsubj",
                 "advmod",   "ccomp", "mark",  "xcomp", "obj",   "punct"};
    s.predicate_roots = {3, 9, 11};
    return s;
}

DependencySentence chain(int n_tokens, const std::vector<int>& preds,
                         const std::vector<std::pair<int, std::string>>& edges) {
    // token 1 is the root; token k attaches per `edges` or to token 1
    DependencySentence s;
    s.sentence_id = "chain";
    for (int t = 1; t <= n_tokens; ++t) {
        s.forms.push_back("w" + std::to_string(t));
        s.heads.push_back(t == 1 ? 0 : 1);
        s.deprels.push_back(t == 1 ? "root" : "dep");
    }
    for (const auto& [token, attachment] : edges) {
        const auto at = attachment.find(':');
        s.heads[static_cast<std::size_t>(token - 1)] = std::stoi(attachment.substr(0, at));
        s.deprels[static_cast<std::size_t>(token - 1)] = attachment.substr(at + 1);
    }
    s.predicate_roots = preds;
    return s;
}

std::string valid_record_line() {
    return R"({"document_id":"doc1","sentence_ids":["s1","s2"],"pred1_root":3,)"
           R"("pred1_span":[2,4],"pred2_root":7,"pred2_span":[7,8],)"
           R"("sliders":[24.0,66.5,24.0,90.0],"dur1":"minutes","dur2":"years",)"
           R"("conf_rel":4,"conf_dur1":3,"conf_dur2":2,"annotator_id":"a77",)"
           R"("elapsed_seconds":213.5})";
}

}  // namespace

TEST_CASE("the pivot walk lands on the terminal clausal complement") {
    const auto s = pivot_fixture();
    const int pivot = pivot_predicate(s);
    CHECK(s.forms[static_cast<std::size_t>(pivot - 1)] == "fly");
}

TEST_CASE("pivot edge cases") {
    // root predicate governs no clausal complement: the root itself
    auto solo = chain(4, {1, 3}, {});
    CHECK(pivot_predicate(solo) == 1);

    // ccomp chain root -> A -> B ends at B
    auto chained = chain(5, {1, 2, 3}, {{2, "1:ccomp"}, {3, "2:ccomp"}});
    CHECK(pivot_predicate(chained) == 3);

    // two clausal complements: the leftmost dependent wins
    auto forked = chain(6, {1, 2, 5}, {{2, "1:xcomp"}, {5, "1:ccomp"}});
    CHECK(pivot_predicate(forked) == 2);

    // subtyped labels still match
    auto subtyped = chain(3, {1, 2}, {{2, "1:ccomp:pass"}});
    CHECK(pivot_predicate(subtyped) == 2);

    // a clausal complement that is not a predicate is not followed
    auto nonpred = chain(3, {1}, {{2, "1:ccomp"}});
    CHECK(pivot_predicate(nonpred) == 1);

    DependencySentence empty = chain(3, {}, {});
    CHECK_THROWS_AS(pivot_predicate(empty), NoPredicates);
}

TEST_CASE("pair generation counts C(N,2) + M") {
    const auto three = chain(5, {1, 2, 4}, {});
    const auto two = chain(4, {2, 3}, {});
    auto pairs = generate_pairs(three, two);
    CHECK(pairs.size() == 5);  // C(3,2) + 2

    const auto one = chain(3, {1}, {});
    const auto none = chain(3, {}, {});
    CHECK(generate_pairs(one, none).empty());  // C(1,2) + 0

    pairs = generate_pairs(two, three);
    CHECK(pairs.size() == 4);  // C(2,2)=1 + 3

    CHECK_THROWS_AS(generate_pairs(none, three), NoPredicates);
}

TEST_CASE("pair generation properties on random trees") {
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<int> tokens(1, 12);
    const std::vector<std::string> labels{"ccomp", "xcomp", "csubj", "nsubj",
                                          "obj",   "advmod", "obl"};
    for (int trial = 0; trial < 300; ++trial) {
        const auto random_sentence = [&](int min_preds) {
            const int n = std::max(tokens(rng), min_preds);
            DependencySentence s;
            s.sentence_id = "r";
            for (int t = 1; t <= n; ++t) {
                s.forms.push_back("w");
                if (t == 1) {
                    s.heads.push_back(0);
                    s.deprels.push_back("root");
                } else {
                    std::uniform_int_distribution<int> head(1, t - 1);
                    s.heads.push_back(head(rng));
                    std::uniform_int_distribution<std::size_t> lab(0, labels.size() - 1);
                    s.deprels.push_back(labels[lab(rng)]);
                }
            }
            std::uniform_int_distribution<int> count(min_preds, n);
            const int preds = count(rng);
            std::vector<int> all(static_cast<std::size_t>(n));
            std::iota(all.begin(), all.end(), 1);
            std::shuffle(all.begin(), all.end(), rng);
            s.predicate_roots.assign(all.begin(), all.begin() + preds);
            std::sort(s.predicate_roots.begin(), s.predicate_roots.end());
            return s;
        };
        const auto ant = random_sentence(1);
        const auto cons = random_sentence(0);
        const std::size_t n = ant.predicate_roots.size();
        const std::size_t m = cons.predicate_roots.size();
        const auto pairs = generate_pairs(ant, cons);
        CHECK(pairs.size() == n * (n - 1) / 2 + m);

        const int pivot = pivot_predicate(ant);
        std::set<std::tuple<int, int, int, int>> unique;
        for (const auto& p : pairs) {
            unique.insert({p.sentence1, p.root1, p.sentence2, p.root2});
            if (p.sentence2 == 1) CHECK(p.root1 == pivot);
        }
        CHECK(unique.size() == pairs.size());
    }
}

TEST_CASE("annotation records round-trip through JSON") {
    const std::string line = valid_record_line();
    const auto records = parse_annotations(line);
    REQUIRE(records.size() == 1);
    const auto& r = records.front();
    CHECK(r.document_id == "doc1");
    CHECK(r.sliders.e1 == 66.5);
    CHECK(r.dur2 == DurationClass::Years);
    CHECK(r.conf_dur2 == 2);

    const auto again = parse_annotations(serialize_annotation(r));
    REQUIRE(again.size() == 1);
    CHECK(again.front() == r);
    CHECK(serialize_annotation(again.front()) == serialize_annotation(r));
}

TEST_CASE("schema violations carry line and field") {
    auto broken = valid_record_line();
    const auto swap = [&](const std::string& from, const std::string& to) {
        auto text = valid_record_line();
        text.replace(text.find(from), from.size(), to);
        return text;
    };

    // out-of-range confidence, reported on line 2
    const std::string twice = valid_record_line() + "\n" + swap("\"conf_rel\":4", "\"conf_rel\":7");
    try {
        parse_annotations(twice);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.line() == 2);
        CHECK(e.field() == "conf_rel");
    }

    // slider end before begin
    CHECK_THROWS_AS(parse_annotations(swap("[24.0,66.5,24.0,90.0]", "[24.0,6.5,24.0,90.0]")),
                    SchemaError);
    // missing field
    CHECK_THROWS_AS(parse_annotations(swap("\"annotator_id\":\"a77\",", "")), SchemaError);
    // unknown duration class
    CHECK_THROWS_AS(parse_annotations(swap("\"minutes\"", "\"aeons\"")), SchemaError);
    // root outside its span
    CHECK_THROWS_AS(parse_annotations(swap("\"pred1_span\":[2,4]", "\"pred1_span\":[4,5]")),
                    SchemaError);
    // malformed JSON
    CHECK_THROWS_AS(parse_annotations(std::string("{oops")), SchemaError);
}

TEST_CASE("conllu parsing with comments, ranges, and empty nodes") {
    const std::string text =
        "# newdoc\n"
        "# sent_id = w01\n"
        "1\tHe\t_\t_\t_\t_\t2\tnsubj\t_\t_\n"
        "2\tleft\t_\t_\t_\t_\t0\troot\t_\t_\n"
        "\n"
        "# sent_id = w02\n"
        "1-2\tdidn't\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tdid\t_\t_\t_\t_\t3\taux\t_\t_\n"
        "2\tnot\t_\t_\t_\t_\t3\tadvmod\t_\t_\n"
        "3\tstay\t_\t_\t_\t_\t0\troot\t_\t_\n"
        "3.1\tghost\t_\t_\t_\t_\t_\t_\t_\t_\n";
    std::istringstream in(text);
    const auto sentences = parse_conllu(in);
    REQUIRE(sentences.size() == 2);
    CHECK(sentences[0].sentence_id == "w01");
    CHECK(sentences[0].size() == 2);
    CHECK(sentences[1].sentence_id == "w02");
    CHECK(sentences[1].size() == 3);
    CHECK(sentences[1].forms[2] == "stay");

    std::istringstream two_roots(
        "1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n"
        "2\tb\t_\t_\t_\t_\t0\troot\t_\t_\n");
    CHECK_THROWS_AS(parse_conllu(two_roots), SchemaError);
}

TEST_CASE("sidecar predicate roots attach by sentence id") {
    std::istringstream in(
        "# sent_id = s1\n"
        "1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n"
        "2\tb\t_\t_\t_\t_\t1\tccomp\t_\t_\n");
    auto sentences = parse_conllu(in);
    attach_predicate_roots(sentences, R"({"s1": [2, 1]})");
    CHECK(sentences[0].predicate_roots == std::vector<int>{1, 2});

    auto copy = sentences;
    CHECK_THROWS_AS(attach_predicate_roots(copy, R"({"s1": [9]})"), SchemaError);
}

TEST_CASE("observation and timeline files round-trip") {
    PairObservation o;
    o.i = 0;
    o.j = 2;
    o.target = {0, 0.5, 0.25, 1};
    o.weight = 0.75;
    o.gold_durations = {DurationClass::Days, DurationClass::Weeks};
    const std::string line = serialize_observation_line("docA", o) + "\n" +
                             serialize_observation_line("docA", o) + "\n";
    std::istringstream in(line);
    const auto docs = parse_observations(in);
    REQUIRE(docs.size() == 1);
    CHECK(docs[0].document_id == "docA");
    CHECK(docs[0].n_predicates == 3);
    REQUIRE(docs[0].observations.size() == 2);
    CHECK(docs[0].observations[0].target == o.target);
    CHECK(docs[0].observations[0].weight == 0.75);
    CHECK(docs[0].observations[0].gold_durations == o.gold_durations);

    TimelineDocument doc;
    doc.document_id = "docA";
    doc.texts = {"run", "jump"};
    doc.timeline.entries = {{0.0, 1.5}, {2.25, 0.5}};
    doc.loss = 0.125;
    doc.iterations = 7;
    std::istringstream tin(serialize_timeline(doc) + "\n");
    const auto timelines = parse_timelines(tin);
    REQUIRE(timelines.size() == 1);
    CHECK(timelines[0].document_id == doc.document_id);
    CHECK(timelines[0].texts == doc.texts);
    CHECK(timelines[0].timeline == doc.timeline);
    CHECK(timelines[0].loss == doc.loss);
    CHECK(timelines[0].iterations == doc.iterations);
}

TEST_CASE("synthetic documents are deterministic and valid") {
    SynthConfig cfg;
    cfg.n_predicates = 6;
    cfg.noise_sd = 0.0;
    cfg.seed = 7;
    const auto a = synth_document(cfg);
    const auto b = synth_document(cfg);
    CHECK(a.document_id == b.document_id);
    CHECK(a.truth == b.truth);
    REQUIRE(a.observations.size() == b.observations.size());
    for (std::size_t k = 0; k < a.observations.size(); ++k) {
        CHECK(a.observations[k].target == b.observations[k].target);
    }
    REQUIRE(a.annotations.size() == b.annotations.size());
    for (std::size_t k = 0; k < a.annotations.size(); ++k) {
        CHECK(a.annotations[k] == b.annotations[k]);
    }

    CHECK(a.observations.size() == 6);  // ring over 6 predicates
    CHECK(is_valid(a.truth));
    for (const auto& o : a.observations) {
        CHECK(is_valid(o.target));
        // noiseless targets are exactly the projections of the truth
        const auto projected = project_pair(a.truth, o.i, o.j);
        CHECK(relation_loss(projected, o.target) == 0.0);
    }
}

TEST_CASE("synthetic sampling scales to larger documents") {
    SynthConfig cfg;
    cfg.n_predicates = 20;
    cfg.noise_sd = 0.01;
    cfg.seed = 5;
    const auto doc = synth_document(cfg);
    CHECK(doc.truth.size() == 20);
    CHECK(doc.observations.size() == 20);  // 19 chain edges + the closing pair
    CHECK(is_valid(doc.truth));
    for (const auto& o : doc.observations) CHECK(is_valid(o.target));
}

TEST_CASE("noisy synthetic sliders stay valid") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        SynthConfig cfg;
        cfg.n_predicates = 4;
        cfg.noise_sd = 0.05;
        cfg.seed = seed;
        const auto doc = synth_document(cfg);
        for (const auto& o : doc.observations) CHECK(is_valid(o.target));
        for (const auto& rec : doc.annotations) {
            CHECK(rec.sliders.e1 >= rec.sliders.b1);
            CHECK(rec.sliders.e2 >= rec.sliders.b2);
        }
    }
    CHECK_THROWS_AS(synth_document({1, 0.0, 1.0, 0}), DomainError);
}
