#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sdf/records.hpp"

namespace sdf {

struct LoadStats {
    std::size_t loaded = 0;
    std::size_t skipped = 0;  // lenient mode only
};

// Line-delimited JSON ingestion. In strict mode any invalid record aborts
// with MalformedRecordError; lenient mode counts and skips it. Text fields
// are NFC-normalized on ingest.
std::vector<QARecord> load_qa(const std::string& path, bool strict,
                              LoadStats* stats = nullptr);
std::vector<CaptionRecord> load_captions(const std::string& path, bool strict,
                                         LoadStats* stats = nullptr);

using Partition = std::pair<Provenance, std::vector<QARecord>>;

// Concatenates already-gated partitions in order (stable within each) and
// builds the manifest. Throws DuplicateIdError when two records share an id.
std::pair<std::vector<QARecord>, DatasetManifest> compose_final(
    const std::vector<Partition>& kept_partitions);

// Emits dataset.jsonl and manifest.json under out_dir with fixed key order;
// byte-identical across runs for identical inputs.
void write_dataset(const std::vector<QARecord>& records,
                   const DatasetManifest& manifest,
                   const std::string& out_dir);

void write_qa_jsonl(const std::vector<QARecord>& records,
                    const std::string& path);
void write_caption_jsonl(const std::vector<CaptionRecord>& records,
                         const std::string& path);

}  // namespace sdf
