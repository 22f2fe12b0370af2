#include <doctest.h>

#include <random>

#include "sdf/errors.hpp"
#include "sdf/quality.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace sdf;
using testutil::qa;

TEST_CASE("semantic similarity is 1 for identical text, symmetric") {
    const ReferenceEmbedder embedder(256);
    CHECK(semantic_similarity("what color is the chair?",
                              "what color is the chair?", embedder) ==
          doctest::Approx(1.0));
    const double ab = semantic_similarity("red chair", "blue table", embedder);
    const double ba = semantic_similarity("blue table", "red chair", embedder);
    CHECK(ab == doctest::Approx(ba));
    CHECK(ab < 1.0);
}

TEST_CASE("calibration matches hand-worked statistics") {
    const auto r = calibrate_threshold({0.7, 0.9});
    CHECK(r.mu == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(r.sigma == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(r.tau == doctest::Approx(0.996).epsilon(1e-12));
}

TEST_CASE("calibration uses the population standard deviation") {
    // population sigma of {1,2,3,4} is sqrt(1.25), not the sample sqrt(5/3)
    const auto r = calibrate_threshold({1, 2, 3, 4});
    CHECK(r.mu == doctest::Approx(2.5));
    CHECK(r.sigma == doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));
}

TEST_CASE("zero-variance scores give tau == mu") {
    const auto r = calibrate_threshold({0.6, 0.6, 0.6});
    CHECK(r.sigma == 0.0);
    CHECK(r.tau == doctest::Approx(0.6));
}

TEST_CASE("calibration needs at least two scores") {
    CHECK_THROWS_AS(calibrate_threshold({}), InsufficientSamplesError);
    CHECK_THROWS_AS(calibrate_threshold({0.5}), InsufficientSamplesError);
}

TEST_CASE("calibration inverts on random inputs") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> mu_d(0.1, 0.9), s_d(0.01, 0.2);
    for (int trial = 0; trial < 50; ++trial) {
        const double mu = mu_d(rng), sigma = s_d(rng);
        // two points at mu +/- sigma have exactly those statistics
        const auto r = calibrate_threshold({mu - sigma, mu + sigma});
        CHECK(std::abs(r.tau - mu - 1.96 * sigma) <= 1e-12);
    }
}

TEST_CASE("apply_calibration updates the task threshold and provenance") {
    ThresholdSet set = ThresholdSet::defaults();
    CHECK(set.tau_qa == doctest::Approx(0.82));
    CHECK(set.tau_cap == doctest::Approx(0.77));
    CHECK(set.source == ThresholdSet::Source::paper_default);
    apply_calibration(set, Task::qa, calibrate_threshold({0.7, 0.9}));
    CHECK(set.tau_qa == doctest::Approx(0.996));
    CHECK(set.tau_cap == doctest::Approx(0.77));  // untouched
    CHECK(set.mu.at("qa") == doctest::Approx(0.8));
    CHECK(set.source == ThresholdSet::Source::calibrated);
}

namespace {

QARecord scored(const std::string& id, double s_q) {
    QARecord r = qa(id, "s", "q?", {"a"}, Provenance::qa_gen);
    r.scores = QualityScores{};
    r.scores->s_q = s_q;
    return r;
}

}  // namespace

TEST_CASE("gate keeps scores at or above tau and preserves order") {
    ThresholdSet set;
    set.tau_qa = 0.5;
    const std::vector<QARecord> records = {
        scored("a", 0.4), scored("b", 0.5), scored("c", 0.9),
        scored("d", 0.49999), scored("e", 0.7)};
    const auto result = gate(records, set, Task::qa);
    REQUIRE(result.kept.size() == 3);
    CHECK(result.kept[0].id == "b");  // inclusive boundary
    CHECK(result.kept[1].id == "c");
    CHECK(result.kept[2].id == "e");
    REQUIRE(result.rejected.size() == 2);
    CHECK(result.rejected[0].id == "a");
    CHECK(result.rejected[1].id == "d");
}

TEST_CASE("gate direction can be flipped") {
    ThresholdSet set;
    set.tau_qa = 0.5;
    const std::vector<QARecord> records = {scored("a", 0.4),
                                           scored("b", 0.6)};
    const auto result = gate(records, set, Task::qa, {false});
    REQUIRE(result.kept.size() == 1);
    CHECK(result.kept[0].id == "a");
}

TEST_CASE("gate throws on a missing score") {
    ThresholdSet set;
    std::vector<QARecord> records = {scored("a", 0.9)};
    records.push_back(qa("b", "s", "q?", {"a"}, Provenance::qa_gen));
    CHECK_THROWS_AS(gate(records, set, Task::qa), MissingScoreError);
    // captioning task gates s_cap; an s_q-only record is missing it
    CHECK_THROWS_AS(gate({scored("a", 0.9)}, set, Task::captioning),
                    MissingScoreError);
}

TEST_CASE("gate partition properties on randomized records") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<QARecord> records;
    for (int i = 0; i < 500; ++i)
        records.push_back(scored("r" + std::to_string(i), u(rng)));
    ThresholdSet set;
    set.tau_qa = 0.6;
    const auto result = gate(records, set, Task::qa);
    CHECK(result.kept.size() + result.rejected.size() == records.size());
    for (const auto& r : result.kept) CHECK(*r.scores->s_q >= 0.6);
    for (const auto& r : result.rejected) CHECK(*r.scores->s_q < 0.6);

    // monotonicity: raising tau can only shrink the kept set
    ThresholdSet higher;
    higher.tau_qa = 0.8;
    const auto stricter = gate(records, higher, Task::qa);
    CHECK(stricter.kept.size() <= result.kept.size());
    // and every strictly kept record is kept at the lower tau too
    std::unordered_set<std::string> loose_ids;
    for (const auto& r : result.kept) loose_ids.insert(r.id);
    for (const auto& r : stricter.kept) CHECK(loose_ids.count(r.id) == 1);
}

TEST_CASE("caption consistency averages rendered hypotheses") {
    const CaptionRecord c = testutil::caption(
        "c1", "scene0000_00", 2, "chair", "a red chair near the window");
    const QARecord good = qa("g", "scene0000_00", "what color?", {"red"},
                             Provenance::caption_gen);
    const QARecord bad = qa("b", "scene0000_00", "what color?", {"purple"},
                            Provenance::caption_gen);
    CHECK(render_hypothesis(c, good) == "the chair is red");
    const ReferenceNli nli;
    const double both = caption_consistency(c, {good, bad}, nli);
    const double only_good = caption_consistency(c, {good}, nli);
    CHECK(only_good == doctest::Approx(1.0));
    CHECK(both == doctest::Approx((only_good + 1.0 / 2.0) / 2.0));
    CHECK_THROWS_AS(caption_consistency(c, {}, nli), EmptyCandidateSetError);
}

TEST_CASE("dedup flags match the all-pairs oracle") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vector> vecs;
    for (int i = 0; i < 200; ++i) {
        // duplicate an earlier vector 20% of the time
        if (!vecs.empty() && (rng() % 5) == 0) {
            vecs.push_back(vecs[rng() % vecs.size()]);
        } else {
            Vector v(16);
            for (auto& x : v) x = u(rng);
            vecs.push_back(std::move(v));
        }
    }
    for (double theta : {0.8, 0.95, 0.999}) {
        const auto got = dedup_flags(vecs, theta);
        const auto want = oracle::dedup(vecs, theta);
        CHECK(got == want);
    }
}

TEST_CASE("semantic_dedup drops repeated questions, earliest wins") {
    const ReferenceEmbedder embedder(256);
    const std::vector<QARecord> records = {
        qa("a", "s", "what color is the chair?", {"red"}),
        qa("b", "s", "where is the lamp?", {"desk"}),
        qa("c", "s", "what color is the chair?", {"red"}),
    };
    const auto result = semantic_dedup(records, embedder, 0.95);
    REQUIRE(result.unique.size() == 2);
    CHECK(result.unique[0].id == "a");
    CHECK(result.unique[1].id == "b");
    REQUIRE(result.duplicates.size() == 1);
    CHECK(result.duplicates[0].id == "c");
}

TEST_CASE("task names") {
    CHECK(std::string(to_string(Task::qa)) == "qa");
    CHECK(std::string(to_string(Task::captioning)) == "cap");
}
