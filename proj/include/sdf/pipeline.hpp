#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sdf/augment.hpp"
#include "sdf/backends.hpp"
#include "sdf/corpus_io.hpp"
#include "sdf/http_client.hpp"
#include "sdf/quality.hpp"
#include "sdf/records.hpp"

namespace sdf {

enum class QuestionCategory {
    local_object,
    global_context,
    relational,
    direction_position,
    other
};

const char* to_string(QuestionCategory c);

// Prefix/keyword taxonomy over question text.
QuestionCategory classify_question(const std::string& question);

struct StatsReport {
    std::map<std::string, std::size_t> question_type_histogram;
    std::vector<std::pair<std::string, std::size_t>> top_answers;  // <= 20
    std::map<std::string, std::size_t> totals_per_provenance;

    Json to_json() const;
};

// Appendix-style dataset statistics: question-type histogram plus the top
// 20 first-answer strings (count desc, ties lexicographic).
StatsReport stats(const std::vector<QARecord>& records);

struct BackendSet {
    std::shared_ptr<EmbeddingBackend> embedder;
    std::shared_ptr<NliBackend> nli;
    std::shared_ptr<GeneratorBackend> generator;
};

struct PipelineConfig {
    std::string qa_path;
    std::string captions_path;
    std::string out_dir = "out";
    std::string work_dir;  // defaults to out_dir + "/work"

    bool strict = false;
    std::uint64_t seed = 0;
    int workers = 1;

    // augmentation families and their pre-gate caps
    bool enable_qa_gen = true;
    bool enable_caption_gen = true;
    bool enable_scene_gen = true;
    std::size_t qa_gen_target = 3000;
    std::size_t caption_gen_target = 3000;
    std::size_t scene_gen_target = 3000;
    int max_subs = 2;
    int qa_per_caption = 3;  // n inside S_cap; the source gives no value
    int qa_per_scene = 4;

    // quality control
    ThresholdSet thresholds;         // fixed defaults unless calibrated
    bool calibrate = false;          // recompute tau from score statistics
    bool keep_at_or_above = true;    // gate direction
    double theta_dup = 0.95;
    std::optional<double> min_rel;   // drop variants below this rel score

    // resources
    std::string thesaurus_path;
    std::string antonyms_path;
    std::string templates_path;
    std::string relevance_weights_path;
    std::string colors_path;
    std::string relations_path;

    // backends
    std::string backend = "reference";  // "reference" | "http"
    std::size_t embed_dimension = 256;
    std::uint64_t hash_seed = 0;
    EndpointConfig embed_endpoint;
    EndpointConfig nli_endpoint;
    EndpointConfig gen_endpoint;

    std::string created_at;  // manifest timestamp; resolved deterministically

    static PipelineConfig from_json_file(const std::string& path);
    static PipelineConfig from_json(const Json& j);
    void apply_env_overrides();
    void validate() const;
};

BackendSet make_backends(const PipelineConfig& config);

struct PipelineResult {
    DatasetManifest manifest;
    std::size_t generated = 0;
    std::size_t kept = 0;
    std::size_t rejected = 0;
    std::size_t duplicates = 0;
    std::size_t dropped_candidates = 0;
};

// ingest -> augment -> score -> gate -> dedup -> compose -> report.
// Writes dataset.jsonl, manifest.json, rejected.jsonl, stats.json under
// out_dir and per-stage checkpoints under work_dir. Rerunning with an
// unchanged config resumes from the last completed stage.
PipelineResult run(const PipelineConfig& config,
                   const BackendSet* backends = nullptr);

// Stage pieces, exposed for the per-stage CLI subcommands.
struct AugmentOutput {
    std::vector<QARecord> qa_gen;
    std::vector<QARecord> caption_gen;
    std::vector<QARecord> scene_gen;
    // caption id -> indices into caption_gen, for S_cap grouping
    std::map<std::string, std::vector<std::size_t>> caption_groups;
    std::size_t dropped = 0;
};

AugmentOutput augment_stage(const PipelineConfig& config,
                            const std::vector<QARecord>& originals,
                            const std::vector<CaptionRecord>& captions,
                            const BackendSet& backends);

void score_stage(const PipelineConfig& config,
                 const std::vector<QARecord>& originals,
                 const std::vector<CaptionRecord>& captions,
                 AugmentOutput& augmented, const BackendSet& backends);

// Augment-output snapshots (the stage checkpoint format, also used by the
// per-stage CLI subcommands).
void save_augment_output(const std::string& dir, const AugmentOutput& out);
bool load_augment_output(const std::string& dir, AugmentOutput& out);

}  // namespace sdf
