#include <doctest.h>

#include "sdf/corpus_io.hpp"
#include "sdf/errors.hpp"
#include "test_util.hpp"

using namespace sdf;
using testutil::TempDir;

namespace {

const char* kGoodQa =
    R"({"id":"q1","scene_id":"scene0000_00","question":"what color is the chair?","answers":["red"]})"
    "\n"
    R"({"id":"q2","scene_id":"scene0000_00","question":"how many tables?","answers":["two","2"],"object_ids":[4,5]})"
    "\n";

}  // namespace

TEST_CASE("load_qa parses well-formed lines") {
    TempDir dir("io");
    testutil::write_file(dir.file("qa.jsonl"), kGoodQa);
    LoadStats stats;
    const auto records = load_qa(dir.file("qa.jsonl"), true, &stats);
    REQUIRE(records.size() == 2);
    CHECK(stats.loaded == 2);
    CHECK(stats.skipped == 0);
    CHECK(records[0].id == "q1");
    CHECK(records[0].scene_id.value == "scene0000_00");
    CHECK(records[0].answers == std::vector<std::string>{"red"});
    CHECK(records[0].provenance == Provenance::original);
    CHECK(records[1].object_ids == std::vector<int>{4, 5});
}

TEST_CASE("load_qa missing file") {
    CHECK_THROWS_AS(load_qa("/nonexistent/qa.jsonl", false),
                    FileNotFoundError);
}

TEST_CASE("strict mode aborts on a malformed line with its number") {
    TempDir dir("io");
    testutil::write_file(
        dir.file("qa.jsonl"),
        std::string(kGoodQa) + "{\"id\":\"q3\"}\n");
    try {
        load_qa(dir.file("qa.jsonl"), true);
        FAIL("expected MalformedRecordError");
    } catch (const MalformedRecordError& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("lenient mode counts and skips bad lines") {
    TempDir dir("io");
    testutil::write_file(dir.file("qa.jsonl"),
                         std::string(kGoodQa) + "not json at all\n" +
                             R"({"id":"q4","scene_id":"s","question":"?","answers":[]})" +
                             "\n");
    LoadStats stats;
    const auto records = load_qa(dir.file("qa.jsonl"), false, &stats);
    CHECK(records.size() == 2);
    CHECK(stats.loaded == 2);
    CHECK(stats.skipped == 2);
}

TEST_CASE("strict mode enforces the scene id pattern") {
    TempDir dir("io");
    testutil::write_file(
        dir.file("qa.jsonl"),
        R"({"id":"q1","scene_id":"room-7","question":"what?","answers":["a"]})"
        "\n");
    CHECK_THROWS_AS(load_qa(dir.file("qa.jsonl"), true),
                    MalformedRecordError);
    CHECK(load_qa(dir.file("qa.jsonl"), false).size() == 1);
}

TEST_CASE("ingest normalizes text fields to NFC") {
    TempDir dir("io");
    // decomposed e + combining acute in the question
    testutil::write_file(
        dir.file("qa.jsonl"),
        std::string(R"({"id":"q1","scene_id":"scene0000_00","question":)") +
            "\"caf\x65\xcc\x81?\",\"answers\":[\"oui\"]}\n");
    const auto records = load_qa(dir.file("qa.jsonl"), true);
    REQUIRE(records.size() == 1);
    CHECK(records[0].question == "caf\xc3\xa9?");
}

TEST_CASE("load_captions validates boxes and object ids") {
    TempDir dir("io");
    testutil::write_file(
        dir.file("cap.jsonl"),
        R"({"id":"c1","scene_id":"scene0000_00","object_id":3,"object_name":"chair","description":"a red chair near the desk","box":{"center":[0,0,0],"dims":[1,1,1]}})"
        "\n"
        R"({"id":"c2","scene_id":"scene0000_00","object_id":1,"object_name":"x","description":"bad box","box":{"center":[0,0,0],"dims":[0,1,1]}})"
        "\n");
    LoadStats stats;
    const auto records = load_captions(dir.file("cap.jsonl"), false, &stats);
    REQUIRE(records.size() == 1);
    CHECK(stats.skipped == 1);
    REQUIRE(records[0].box.has_value());
    CHECK(records[0].box->dims[0] == 1.0);
    CHECK_THROWS_AS(load_captions(dir.file("cap.jsonl"), true),
                    MalformedRecordError);
}

TEST_CASE("qa json roundtrip preserves every field") {
    QARecord r = testutil::qa("q9", "scene0012_01", "where is the lamp?",
                              {"on the desk"}, Provenance::caption_gen);
    r.object_ids = {7};
    r.scores = QualityScores{};
    r.scores->s_cap = 0.5;
    const QARecord back = qa_from_json(to_json(r));
    CHECK(back == r);
}

TEST_CASE("jsonl writes are byte-identical across runs") {
    TempDir dir("io");
    std::vector<QARecord> records = {
        testutil::qa("a", "scene0000_00", "q?", {"x"}),
        testutil::qa("b", "scene0000_00", "r?", {"y"}, Provenance::qa_gen)};
    records[1].scores = QualityScores{};
    records[1].scores->s_q = 0.25;
    write_qa_jsonl(records, dir.file("one.jsonl"));
    write_qa_jsonl(records, dir.file("two.jsonl"));
    const std::string one = testutil::read_file(dir.file("one.jsonl"));
    CHECK(one == testutil::read_file(dir.file("two.jsonl")));
    CHECK(!one.empty());
    // and reading back gives the same records
    const auto reread = load_qa(dir.file("one.jsonl"), true);
    CHECK(reread == records);
}

TEST_CASE("compose_final counts partitions and rejects duplicate ids") {
    const std::vector<Partition> parts = {
        {Provenance::original,
         {testutil::qa("a", "s", "q?", {"x"}),
          testutil::qa("b", "s", "r?", {"y"})}},
        {Provenance::qa_gen,
         {testutil::qa("c", "s", "t?", {"z"}, Provenance::qa_gen)}},
        {Provenance::caption_gen, {}},
    };
    const auto [records, manifest] = compose_final(parts);
    CHECK(records.size() == 3);
    CHECK(manifest.total == 3);
    CHECK(manifest.source_counts.at("original") == 2);
    CHECK(manifest.source_counts.at("qa_gen") == 1);
    CHECK(manifest.source_counts.at("caption_gen") == 0);

    const std::vector<Partition> dup = {
        {Provenance::original, {testutil::qa("a", "s", "q?", {"x"})}},
        {Provenance::qa_gen,
         {testutil::qa("a", "s", "q?", {"x"}, Provenance::qa_gen)}}};
    CHECK_THROWS_AS(compose_final(dup), DuplicateIdError);
}

TEST_CASE("write_dataset emits dataset.jsonl and manifest.json") {
    TempDir dir("io");
    const std::vector<Partition> parts = {
        {Provenance::original, {testutil::qa("a", "s", "q?", {"x"})}}};
    auto [records, manifest] = compose_final(parts);
    manifest.seed = 11;
    manifest.created_at = "1970-01-01T00:00:00Z";
    write_dataset(records, manifest, dir.file("out"));
    const std::string m = testutil::read_file(dir.file("out/manifest.json"));
    const Json j = Json::parse(m);
    CHECK(j.at("total").get<int>() == 1);
    CHECK(j.at("seed").get<int>() == 11);
    CHECK(j.at("created_at").get<std::string>() == "1970-01-01T00:00:00Z");
    CHECK(load_qa(dir.file("out/dataset.jsonl"), false).size() == 1);
}
