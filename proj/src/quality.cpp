#include "sdf/quality.hpp"

#include <cmath>

#include "sdf/errors.hpp"

namespace sdf {

const char* to_string(Task t) {
    return t == Task::qa ? "qa" : "cap";
}

double semantic_similarity(const std::string& orig, const std::string& gen,
                           const EmbeddingBackend& embedder) {
    return cosine(embedder.embed(orig), embedder.embed(gen));
}

std::string render_hypothesis(const CaptionRecord& caption,
                              const QARecord& qa) {
    const std::string& object =
        caption.object_name.empty() ? "object" : caption.object_name;
    const std::string& answer = qa.answers.front();
    return "the " + object + " is " + answer;
}

double caption_consistency(const CaptionRecord& c_orig,
                           const std::vector<QARecord>& qa_gen,
                           const NliBackend& nli) {
    if (qa_gen.empty()) throw EmptyCandidateSetError();
    double sum = 0;
    for (const auto& qa : qa_gen)
        sum += nli.score(c_orig.description, render_hypothesis(c_orig, qa));
    return sum / static_cast<double>(qa_gen.size());
}

CalibrationResult calibrate_threshold(const std::vector<double>& scores) {
    if (scores.size() < 2) throw InsufficientSamplesError(scores.size());
    const double n = static_cast<double>(scores.size());
    double mean = 0;
    for (double s : scores) mean += s;
    mean /= n;
    double var = 0;
    for (double s : scores) var += (s - mean) * (s - mean);
    var /= n;  // population variance
    CalibrationResult r;
    r.mu = mean;
    r.sigma = std::sqrt(var);
    r.tau = r.mu + 1.96 * r.sigma;
    return r;
}

void apply_calibration(ThresholdSet& set, Task task,
                       const CalibrationResult& cal) {
    const std::string key = to_string(task);
    set.mu[key] = cal.mu;
    set.sigma[key] = cal.sigma;
    if (task == Task::qa)
        set.tau_qa = cal.tau;
    else
        set.tau_cap = cal.tau;
    set.source = ThresholdSet::Source::calibrated;
}

double task_tau(const ThresholdSet& thresholds, Task task) {
    return task == Task::qa ? thresholds.tau_qa : thresholds.tau_cap;
}

GateResult gate(const std::vector<QARecord>& records,
                const ThresholdSet& thresholds, Task task,
                const GateOptions& options) {
    const double tau = task_tau(thresholds, task);
    GateResult result;
    for (const auto& r : records) {
        std::optional<double> score;
        if (r.scores)
            score = task == Task::qa ? r.scores->s_q : r.scores->s_cap;
        if (!score) throw MissingScoreError(r.id);
        const bool keep = options.keep_at_or_above ? *score >= tau
                                                   : *score < tau;
        (keep ? result.kept : result.rejected).push_back(r);
    }
    return result;
}

std::vector<bool> dedup_flags(const std::vector<Vector>& embeddings,
                              double theta_dup) {
    std::vector<bool> keep(embeddings.size(), true);
    std::vector<std::size_t> kept_idx;
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
        for (std::size_t j : kept_idx) {
            if (cosine(embeddings[i], embeddings[j]) >= theta_dup) {
                keep[i] = false;
                break;
            }
        }
        if (keep[i]) kept_idx.push_back(i);
    }
    return keep;
}

DedupResult semantic_dedup(const std::vector<QARecord>& records,
                           const EmbeddingBackend& embedder,
                           double theta_dup) {
    std::vector<std::string> texts;
    texts.reserve(records.size());
    for (const auto& r : records) texts.push_back(r.question);
    const auto embeddings = embedder.embed_batch(texts);
    const auto keep = dedup_flags(embeddings, theta_dup);
    DedupResult result;
    for (std::size_t i = 0; i < records.size(); ++i)
        (keep[i] ? result.unique : result.duplicates).push_back(records[i]);
    return result;
}

}  // namespace sdf
