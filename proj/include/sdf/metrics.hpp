#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdf/records.hpp"

namespace sdf::metrics {

struct Candidate {
    std::string id;
    std::vector<std::string> tokens;
    std::optional<Box3D> box;
};

struct ReferenceSet {
    std::string id;
    std::vector<std::vector<std::string>> references;  // >= 1
    std::optional<Box3D> box;
};

// Corpus BLEU-n: geometric mean of clipped modified n-gram precisions up
// to n, times brevity penalty exp(1 - r/c) when c < r. 0 if any precision
// is 0. r uses the closest reference length per item.
double bleu(const std::vector<Candidate>& cands,
            const std::vector<ReferenceSet>& refs, int n);

// Sentence-level BLEU-n for one pair; used by the IoU-gated variant.
double sentence_bleu(const std::vector<std::string>& cand,
                     const std::vector<std::vector<std::string>>& refs,
                     int n);

// LCS F-measure with beta = 1.2; multi-reference max, corpus mean.
double rouge_l(const std::vector<Candidate>& cands,
               const std::vector<ReferenceSet>& refs);
double sentence_rouge_l(const std::vector<std::string>& cand,
                        const std::vector<std::vector<std::string>>& refs);

// Exact + suffix-stem unigram alignment; F_mean = 10PR/(R+9P), chunk
// penalty 0.5*(chunks/matches)^3; multi-reference max, corpus mean.
double meteor(const std::vector<Candidate>& cands,
              const std::vector<ReferenceSet>& refs);
double sentence_meteor(const std::vector<std::string>& cand,
                       const std::vector<std::vector<std::string>>& refs);

// CIDEr-D: clipped tf-idf n-gram similarity, n = 1..4, Gaussian length
// factor sigma = 6, averaged over references, mean over n, x10. Needs >= 2
// reference sets for a meaningful idf.
double cider(const std::vector<Candidate>& cands,
             const std::vector<ReferenceSet>& refs);

// Per-item CIDEr-D scores against a fixed idf corpus (the full reference
// corpus); cider() is the mean of these.
std::vector<double> cider_per_item(const std::vector<Candidate>& cands,
                                   const std::vector<ReferenceSet>& refs);

// Axis-aligned intersection over union.
double iou3d(const Box3D& a, const Box3D& b);

enum class BaseMetric { bleu1, bleu2, bleu3, bleu4, rouge_l, meteor, cider };

// m@kIoU: an item contributes only when iou3d(cand.box, ref.box) >= k.
// Mean-style metrics zero failed items; BLEU keeps failed candidates in
// the length/count denominators with zero matches. Denominator is |refs|.
double gated_metric(const std::vector<Candidate>& cands,
                    const std::vector<ReferenceSet>& refs, double k,
                    BaseMetric base);

struct MetricReport {
    std::array<double, 4> bleu{0, 0, 0, 0};
    double rouge_l = 0;
    double meteor = 0;
    double cider = 0;
    std::optional<double> gate_iou;  // threshold used for the gated block
    std::optional<std::array<double, 4>> gated_bleu;
    std::optional<double> gated_rouge_l;
    std::optional<double> gated_meteor;
    std::optional<double> gated_cider;
};

// Full metric suite; the gated block is computed only when every candidate
// and reference carries a box.
MetricReport evaluate_corpus(const std::vector<Candidate>& cands,
                             const std::vector<ReferenceSet>& refs,
                             std::optional<double> gate_iou = 0.5);

// Natural-scale raw values plus x100 presentation values.
Json report_to_json(const MetricReport& report);

void check_aligned(const std::vector<Candidate>& cands,
                   const std::vector<ReferenceSet>& refs);

}  // namespace sdf::metrics
