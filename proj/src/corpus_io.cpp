#include "sdf/corpus_io.hpp"

#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "sdf/errors.hpp"
#include "sdf/text.hpp"

namespace fs = std::filesystem;

namespace sdf {

namespace {

void validate_qa(const QARecord& r, std::size_t line, bool strict) {
    if (r.id.empty()) throw MalformedRecordError(line, "empty id");
    if (r.scene_id.value.empty())
        throw MalformedRecordError(line, "empty scene_id");
    if (strict && !r.scene_id.is_strict_valid())
        throw MalformedRecordError(line,
                                   "scene_id does not match scene\\d{4}_\\d{2}");
    if (text::trim(r.question).empty())
        throw MalformedRecordError(line, "empty question");
    if (r.answers.empty())
        throw MalformedRecordError(line, "answers must be non-empty");
    for (const auto& a : r.answers)
        if (text::trim(a).empty())
            throw MalformedRecordError(line, "empty answer string");
    if (r.provenance == Provenance::original && r.scores)
        throw MalformedRecordError(line,
                                   "original record carries scores on ingest");
}

void validate_caption(const CaptionRecord& r, std::size_t line, bool strict) {
    if (r.id.empty()) throw MalformedRecordError(line, "empty id");
    if (r.scene_id.value.empty())
        throw MalformedRecordError(line, "empty scene_id");
    if (strict && !r.scene_id.is_strict_valid())
        throw MalformedRecordError(line,
                                   "scene_id does not match scene\\d{4}_\\d{2}");
    if (text::trim(r.description).empty())
        throw MalformedRecordError(line, "empty description");
    if (r.object_id < 0)
        throw MalformedRecordError(line, "object_id must be >= 0");
    if (r.box && !r.box->is_valid())
        throw MalformedRecordError(line, "box dims must be positive");
}

template <typename Record, typename Parse, typename Validate,
          typename Normalize>
std::vector<Record> load_jsonl(const std::string& path, bool strict,
                               LoadStats* stats, Parse parse,
                               Validate validate, Normalize normalize) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);
    std::vector<Record> records;
    std::string line;
    std::size_t lineno = 0;
    LoadStats local;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            Json j = Json::parse(line);
            Record r = parse(j);
            normalize(r);
            validate(r, lineno, strict);
            records.push_back(std::move(r));
            ++local.loaded;
        } catch (const MalformedRecordError&) {
            if (strict) throw;
            ++local.skipped;
        } catch (const Json::exception& e) {
            if (strict) throw MalformedRecordError(lineno, e.what());
            ++local.skipped;
        }
    }
    if (stats) *stats = local;
    return records;
}

}  // namespace

std::vector<QARecord> load_qa(const std::string& path, bool strict,
                              LoadStats* stats) {
    return load_jsonl<QARecord>(
        path, strict, stats, [](const Json& j) { return qa_from_json(j); },
        validate_qa, [](QARecord& r) {
            r.question = text::normalize_nfc(r.question);
            for (auto& a : r.answers) a = text::normalize_nfc(a);
        });
}

std::vector<CaptionRecord> load_captions(const std::string& path, bool strict,
                                         LoadStats* stats) {
    return load_jsonl<CaptionRecord>(
        path, strict, stats,
        [](const Json& j) { return caption_from_json(j); }, validate_caption,
        [](CaptionRecord& r) {
            r.description = text::normalize_nfc(r.description);
            r.object_name = text::normalize_nfc(r.object_name);
        });
}

std::pair<std::vector<QARecord>, DatasetManifest> compose_final(
    const std::vector<Partition>& kept_partitions) {
    std::vector<QARecord> out;
    DatasetManifest manifest;
    std::unordered_set<std::string> seen;
    for (const auto& [prov, records] : kept_partitions) {
        for (const auto& r : records) {
            if (!seen.insert(r.id).second) throw DuplicateIdError(r.id);
            out.push_back(r);
        }
        manifest.source_counts[to_string(prov)] += records.size();
        manifest.total += records.size();
    }
    return {std::move(out), std::move(manifest)};
}

void write_qa_jsonl(const std::vector<QARecord>& records,
                    const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path);
    for (const auto& r : records) out << to_json(r).dump() << '\n';
    if (!out) throw IoError("write failed: " + path);
}

void write_caption_jsonl(const std::vector<CaptionRecord>& records,
                         const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path);
    for (const auto& r : records) out << to_json(r).dump() << '\n';
    if (!out) throw IoError("write failed: " + path);
}

void write_dataset(const std::vector<QARecord>& records,
                   const DatasetManifest& manifest,
                   const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir))
        throw IoError("not a writable directory: " + out_dir);
    write_qa_jsonl(records, (fs::path(out_dir) / "dataset.jsonl").string());
    const auto manifest_path = (fs::path(out_dir) / "manifest.json").string();
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + manifest_path);
    out << to_json(manifest).dump(2) << '\n';
    if (!out) throw IoError("write failed: " + manifest_path);
}

}  // namespace sdf
