#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sdf/backends.hpp"
#include "sdf/records.hpp"

namespace sdf {

enum class Task { qa, captioning };

const char* to_string(Task t);

// S_Q: cosine similarity of the two texts' embeddings, in [-1,1].
// Degenerate (zero-norm) embeddings give 0.
double semantic_similarity(const std::string& orig, const std::string& gen,
                           const EmbeddingBackend& embedder);

// S_cap: mean NLI entailment probability of each generated QA pair,
// rendered as a declarative hypothesis, against the caption as premise.
// Hypothesis rendering: "the {object} is {answer}" with the caption's
// object name and the pair's first answer.
double caption_consistency(const CaptionRecord& c_orig,
                           const std::vector<QARecord>& qa_gen,
                           const NliBackend& nli);

std::string render_hypothesis(const CaptionRecord& caption,
                              const QARecord& qa);

struct CalibrationResult {
    double mu = 0;
    double sigma = 0;  // population standard deviation
    double tau = 0;    // mu + 1.96 * sigma
};

// tau_k = mu_k + 1.96 sigma_k from score statistics. Needs >= 2 scores.
CalibrationResult calibrate_threshold(const std::vector<double>& scores);

// Applies a calibration result to a threshold set for the given task.
void apply_calibration(ThresholdSet& set, Task task,
                       const CalibrationResult& cal);

struct GateOptions {
    // keep-if-score>=tau when true (the default); flipping implements the
    // keep-below reading of the calibrated bound.
    bool keep_at_or_above = true;
};

struct GateResult {
    std::vector<QARecord> kept;
    std::vector<QARecord> rejected;
};

// Stable partition on the task's score field (qa -> s_q, captioning ->
// s_cap). Comparison is inclusive (score == tau is kept). Records without
// the gated score raise MissingScore.
GateResult gate(const std::vector<QARecord>& records,
                const ThresholdSet& thresholds, Task task,
                const GateOptions& options = {});

double task_tau(const ThresholdSet& thresholds, Task task);

struct DedupResult {
    std::vector<QARecord> unique;
    std::vector<QARecord> duplicates;
};

// Greedy pass in input order over question embeddings; a record is a
// duplicate when cosine similarity to any earlier kept record >= theta_dup.
DedupResult semantic_dedup(const std::vector<QARecord>& records,
                           const EmbeddingBackend& embedder,
                           double theta_dup);

// Same greedy dedup over precomputed vectors; returns keep flags.
std::vector<bool> dedup_flags(const std::vector<Vector>& embeddings,
                              double theta_dup);

}  // namespace sdf
