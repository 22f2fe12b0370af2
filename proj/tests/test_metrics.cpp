#include <doctest.h>

#include <random>

#include "sdf/errors.hpp"
#include "sdf/metrics.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace sdf;
using namespace sdf::metrics;
using testutil::random_metric_corpus;

namespace {

std::vector<oracle::Sentence> oracle_cands(
    const std::vector<Candidate>& cands) {
    std::vector<oracle::Sentence> out;
    for (const auto& c : cands) out.push_back(c.tokens);
    return out;
}

std::vector<oracle::SentenceList> oracle_refs(
    const std::vector<ReferenceSet>& refs) {
    std::vector<oracle::SentenceList> out;
    for (const auto& r : refs) out.push_back(r.references);
    return out;
}

Candidate cand(const std::string& id, std::vector<std::string> tokens) {
    return {id, std::move(tokens), std::nullopt};
}

ReferenceSet refset(const std::string& id,
                    std::vector<std::vector<std::string>> refs) {
    return {id, std::move(refs), std::nullopt};
}

}  // namespace

TEST_CASE("bleu-1 hand case: clipped unigram precision") {
    // "the the the the" vs "the cat sat down": clip(4 x the -> 1) / 4
    const auto c = {cand("a", {"the", "the", "the", "the"})};
    const auto r = {refset("a", {{"the", "cat", "sat", "down"}})};
    CHECK(bleu(c, r, 1) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("bleu is 1 for identical corpora and 0 without overlap") {
    const auto c = {cand("a", {"a", "red", "chair"}),
                    cand("b", {"the", "lamp", "is", "on"})};
    const auto r = {refset("a", {{"a", "red", "chair"}}),
                    refset("b", {{"the", "lamp", "is", "on"}})};
    CHECK(bleu(c, r, 4) == doctest::Approx(1.0));
    const auto r2 = {refset("a", {{"x", "y", "z"}}),
                     refset("b", {{"p", "q", "r", "s"}})};
    CHECK(bleu(c, r2, 1) == 0.0);
}

TEST_CASE("bleu brevity penalty uses the closest reference length") {
    // candidate length 2, refs lengths 2 and 9: closest is 2, no penalty
    const auto c = {cand("a", {"red", "chair"})};
    const auto r = {refset("a", {{"red", "chair"},
                                 {"a", "very", "long", "reference", "with",
                                  "many", "more", "tokens", "here"}})};
    CHECK(bleu(c, r, 1) == doctest::Approx(1.0));
    // shorter candidate against one longer ref is penalized exp(1 - r/c)
    const auto c2 = {cand("a", {"red", "chair"})};
    const auto r2 = {refset("a", {{"red", "chair", "near", "desk"}})};
    CHECK(bleu(c2, r2, 1) ==
          doctest::Approx(std::exp(1.0 - 4.0 / 2.0)).epsilon(1e-12));
}

TEST_CASE("rouge-l hand case") {
    // "a b c d" vs "a c d e": LCS = 3, P = R = 3/4, F = 0.75
    const auto c = {cand("a", {"a", "b", "c", "d"})};
    const auto r = {refset("a", {{"a", "c", "d", "e"}})};
    CHECK(rouge_l(c, r) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("rouge-l takes the best reference and averages items") {
    const auto c = {cand("a", {"a", "b", "c", "d"}),
                    cand("b", {"x", "y"})};
    const auto r = {refset("a", {{"q", "q", "q", "q"}, {"a", "b", "c", "d"}}),
                    refset("b", {{"z", "z"}})};
    CHECK(rouge_l(c, r) == doctest::Approx(0.5));  // (1.0 + 0.0) / 2
}

TEST_CASE("meteor hand case: identical three tokens") {
    // m = 3, P = R = F = 1, one chunk: 1 - 0.5 (1/3)^3 = 1 - 1/54
    const auto c = {cand("a", {"red", "chair", "here"})};
    const auto r = {refset("a", {{"red", "chair", "here"}})};
    CHECK(meteor(c, r) ==
          doctest::Approx(1.0 - 0.5 / 27.0).epsilon(1e-12));
}

TEST_CASE("meteor stem stage matches inflected forms") {
    const auto c = {cand("a", {"the", "lamps", "glowed"})};
    const auto r = {refset("a", {{"the", "lamp", "glow"}})};
    // all three align (exact "the", stems lamp/glow), single chunk
    CHECK(sentence_meteor({"the", "lamps", "glowed"},
                          {{"the", "lamp", "glow"}}) ==
          doctest::Approx(1.0 - 0.5 / 27.0).epsilon(1e-12));
    CHECK(meteor(c, r) > 0.9);
}

TEST_CASE("meteor fragmentation penalty grows with chunk count") {
    // same matches, different orderings: more chunks means a lower score
    const double contiguous =
        sentence_meteor({"a", "b", "c", "d"}, {{"a", "b", "c", "d"}});
    const double fragmented =
        sentence_meteor({"a", "c", "b", "d"}, {{"a", "b", "c", "d"}});
    CHECK(contiguous > fragmented);
}

TEST_CASE("cider hand case: disjoint self-referenced items score 10") {
    // two items, each candidate equals its own reference, no shared ngrams:
    // idf = log(2/1) > 0, similarity 1 per order, x10
    const auto c = {cand("a", {"red", "chair", "near", "desk"}),
                    cand("b", {"blue", "lamp", "above", "sofa"})};
    const auto r = {refset("a", {{"red", "chair", "near", "desk"}}),
                    refset("b", {{"blue", "lamp", "above", "sofa"}})};
    CHECK(cider(c, r) == doctest::Approx(10.0).epsilon(1e-9));
    const auto items = cider_per_item(c, r);
    REQUIRE(items.size() == 2);
    CHECK(items[0] == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(items[1] == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("cider needs at least two reference sets") {
    const auto c = {cand("a", {"x"})};
    const auto r = {refset("a", {{"x"}})};
    CHECK_THROWS_AS(cider(c, r), CorpusTooSmallError);
}

TEST_CASE("misaligned corpora are rejected") {
    const auto c = {cand("a", {"x"})};
    CHECK_THROWS_AS(bleu(c, {}, 1), MisalignedCorpusError);
    const auto r_wrong_id = {refset("b", {{"x"}})};
    CHECK_THROWS_AS(bleu(c, r_wrong_id, 1), MisalignedCorpusError);
    const auto r_empty = {refset("a", {})};
    CHECK_THROWS_AS(bleu(c, r_empty, 1), MisalignedCorpusError);
}

TEST_CASE("metrics agree with brute-force oracles on random corpora") {
    for (std::uint64_t seed : {11u, 22u, 33u, 44u, 55u}) {
        const auto corpus = random_metric_corpus(seed, 20);
        const auto oc = oracle_cands(corpus.cands);
        const auto orf = oracle_refs(corpus.refs);
        for (int n = 1; n <= 4; ++n)
            CHECK(bleu(corpus.cands, corpus.refs, n) ==
                  doctest::Approx(oracle::bleu(oc, orf, n)).epsilon(1e-9));
        CHECK(rouge_l(corpus.cands, corpus.refs) ==
              doctest::Approx(oracle::rouge_l(oc, orf)).epsilon(1e-9));
        CHECK(meteor(corpus.cands, corpus.refs) ==
              doctest::Approx(oracle::meteor(oc, orf)).epsilon(1e-9));
        CHECK(cider(corpus.cands, corpus.refs) ==
              doctest::Approx(oracle::cider(oc, orf)).epsilon(1e-6));
    }
}

TEST_CASE("iou3d hand cases") {
    const Box3D unit{{0, 0, 0}, {1, 1, 1}};
    CHECK(iou3d(unit, unit) == doctest::Approx(1.0));
    // unit cubes offset by half along x: intersection 0.5, union 1.5
    const Box3D shifted{{0.5, 0, 0}, {1, 1, 1}};
    CHECK(iou3d(unit, shifted) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    const Box3D far_away{{10, 10, 10}, {1, 1, 1}};
    CHECK(iou3d(unit, far_away) == 0.0);
    // containment: 2x2x2 around a unit cube -> 1/8
    const Box3D big{{0, 0, 0}, {2, 2, 2}};
    CHECK(iou3d(unit, big) == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
    CHECK(iou3d(unit, big) == doctest::Approx(iou3d(big, unit)));
}

TEST_CASE("gated metrics equal ungated when every item passes") {
    auto corpus = random_metric_corpus(77, 12, true);
    for (std::size_t i = 0; i < corpus.cands.size(); ++i)
        corpus.cands[i].box = corpus.refs[i].box;  // IoU = 1 everywhere
    for (int n = 1; n <= 4; ++n) {
        const auto base = static_cast<BaseMetric>(n - 1);
        CHECK(gated_metric(corpus.cands, corpus.refs, 0.5, base) ==
              doctest::Approx(bleu(corpus.cands, corpus.refs, n))
                  .epsilon(1e-12));
    }
    CHECK(gated_metric(corpus.cands, corpus.refs, 0.5, BaseMetric::rouge_l) ==
          doctest::Approx(rouge_l(corpus.cands, corpus.refs)).epsilon(1e-12));
    CHECK(gated_metric(corpus.cands, corpus.refs, 0.5, BaseMetric::meteor) ==
          doctest::Approx(meteor(corpus.cands, corpus.refs)).epsilon(1e-12));
    CHECK(gated_metric(corpus.cands, corpus.refs, 0.5, BaseMetric::cider) ==
          doctest::Approx(cider(corpus.cands, corpus.refs)).epsilon(1e-12));
}

TEST_CASE("gated mean metrics zero failing items over |refs|") {
    // two identical text pairs; one passes the gate, one fails
    auto c = std::vector<Candidate>{cand("a", {"red", "chair"}),
                                    cand("b", {"blue", "lamp"})};
    auto r = std::vector<ReferenceSet>{refset("a", {{"red", "chair"}}),
                                       refset("b", {{"blue", "lamp"}})};
    const Box3D box{{0, 0, 0}, {1, 1, 1}};
    const Box3D elsewhere{{5, 5, 5}, {1, 1, 1}};
    c[0].box = box;
    r[0].box = box;
    c[1].box = elsewhere;
    r[1].box = box;
    const double ungated_rouge = rouge_l(c, r);  // 1.0
    CHECK(ungated_rouge == doctest::Approx(1.0));
    CHECK(gated_metric(c, r, 0.5, BaseMetric::rouge_l) ==
          doctest::Approx(0.5));  // item b zeroed, denominator 2
    const double full_meteor = sentence_meteor({"red", "chair"},
                                               {{"red", "chair"}});
    CHECK(gated_metric(c, r, 0.5, BaseMetric::meteor) ==
          doctest::Approx(full_meteor / 2.0));
}

TEST_CASE("gated bleu keeps failing items in the denominators") {
    auto c = std::vector<Candidate>{cand("a", {"red", "chair"}),
                                    cand("b", {"blue", "lamp"})};
    auto r = std::vector<ReferenceSet>{refset("a", {{"red", "chair"}}),
                                       refset("b", {{"blue", "lamp"}})};
    const Box3D box{{0, 0, 0}, {1, 1, 1}};
    const Box3D elsewhere{{5, 5, 5}, {1, 1, 1}};
    c[0].box = box;
    r[0].box = box;
    c[1].box = elsewhere;
    r[1].box = box;
    // 2 of 4 unigrams earn credit; lengths are unchanged so no penalty
    CHECK(gated_metric(c, r, 0.5, BaseMetric::bleu1) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("gated metrics require boxes everywhere") {
    auto corpus = random_metric_corpus(5, 4, true);
    corpus.cands[2].box.reset();
    CHECK_THROWS_AS(
        gated_metric(corpus.cands, corpus.refs, 0.5, BaseMetric::rouge_l),
        MissingBoxError);
}

TEST_CASE("evaluate_corpus gates only when all boxes are present") {
    const auto boxed = random_metric_corpus(9, 8, true);
    const auto report = evaluate_corpus(boxed.cands, boxed.refs, 0.5);
    CHECK(report.gate_iou.has_value());
    CHECK(report.gated_rouge_l.has_value());

    auto partial = boxed;
    partial.cands[0].box.reset();
    const auto no_gate = evaluate_corpus(partial.cands, partial.refs, 0.5);
    CHECK(!no_gate.gate_iou.has_value());
    CHECK(!no_gate.gated_rouge_l.has_value());

    const Json j = report_to_json(report);
    CHECK(j.contains("raw"));
    CHECK(j.contains("x100"));
    CHECK(j.at("x100").at("rouge_l").get<double>() ==
          doctest::Approx(j.at("raw").at("rouge_l").get<double>() * 100.0));
    CHECK(j.at("gated").at("aggregation") == "mean_over_references");
    CHECK(!report_to_json(no_gate).contains("gated"));
}
