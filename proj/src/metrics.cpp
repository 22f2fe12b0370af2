#include "sdf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "sdf/errors.hpp"
#include "sdf/text.hpp"

namespace sdf::metrics {

namespace {

using Counts = std::unordered_map<std::string, double>;

Counts ngram_counts(const std::vector<std::string>& tokens, int n) {
    Counts counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (int k = 1; k < n; ++k) key += '\x1f' + tokens[i + k];
        counts[key] += 1.0;
    }
    return counts;
}

std::size_t closest_ref_length(
    std::size_t cand_len,
    const std::vector<std::vector<std::string>>& refs) {
    std::size_t best = refs.front().size();
    for (const auto& r : refs) {
        const auto diff = [&](std::size_t len) {
            return len > cand_len ? len - cand_len : cand_len - len;
        };
        if (diff(r.size()) < diff(best) ||
            (diff(r.size()) == diff(best) && r.size() < best))
            best = r.size();
    }
    return best;
}

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

constexpr double kRougeBeta = 1.2;
constexpr double kCiderSigma = 6.0;

}  // namespace

void check_aligned(const std::vector<Candidate>& cands,
                   const std::vector<ReferenceSet>& refs) {
    if (cands.size() != refs.size())
        throw MisalignedCorpusError(
            "candidate count " + std::to_string(cands.size()) +
            " != reference count " + std::to_string(refs.size()));
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (cands[i].id != refs[i].id)
            throw MisalignedCorpusError("id mismatch at index " +
                                        std::to_string(i) + ": " +
                                        cands[i].id + " vs " + refs[i].id);
        if (refs[i].references.empty())
            throw MisalignedCorpusError("reference set " + refs[i].id +
                                        " is empty");
    }
}

double sentence_bleu(const std::vector<std::string>& cand,
                     const std::vector<std::vector<std::string>>& refs,
                     int n) {
    double log_sum = 0;
    for (int g = 1; g <= n; ++g) {
        const Counts cand_counts = ngram_counts(cand, g);
        double total = 0, clipped = 0;
        for (const auto& [key, count] : cand_counts) total += count;
        for (const auto& [key, count] : cand_counts) {
            double max_ref = 0;
            for (const auto& r : refs) {
                const Counts rc = ngram_counts(r, g);
                auto it = rc.find(key);
                if (it != rc.end()) max_ref = std::max(max_ref, it->second);
            }
            clipped += std::min(count, max_ref);
        }
        if (total == 0 || clipped == 0) return 0.0;
        log_sum += std::log(clipped / total);
    }
    const double c = static_cast<double>(cand.size());
    const double r = static_cast<double>(closest_ref_length(cand.size(), refs));
    const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
    return bp * std::exp(log_sum / n);
}

double bleu(const std::vector<Candidate>& cands,
            const std::vector<ReferenceSet>& refs, int n) {
    check_aligned(cands, refs);
    std::vector<double> clipped(n + 1, 0), total(n + 1, 0);
    double c_len = 0, r_len = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const auto& cand = cands[i].tokens;
        c_len += static_cast<double>(cand.size());
        r_len += static_cast<double>(
            closest_ref_length(cand.size(), refs[i].references));
        for (int g = 1; g <= n; ++g) {
            const Counts cand_counts = ngram_counts(cand, g);
            std::vector<Counts> ref_counts;
            for (const auto& r : refs[i].references)
                ref_counts.push_back(ngram_counts(r, g));
            for (const auto& [key, count] : cand_counts) {
                total[g] += count;
                double max_ref = 0;
                for (const auto& rc : ref_counts) {
                    auto it = rc.find(key);
                    if (it != rc.end())
                        max_ref = std::max(max_ref, it->second);
                }
                clipped[g] += std::min(count, max_ref);
            }
        }
    }
    double log_sum = 0;
    for (int g = 1; g <= n; ++g) {
        if (total[g] == 0 || clipped[g] == 0) return 0.0;
        log_sum += std::log(clipped[g] / total[g]);
    }
    const double bp = c_len < r_len && c_len > 0
                          ? std::exp(1.0 - r_len / c_len)
                          : 1.0;
    return bp * std::exp(log_sum / n);
}

double sentence_rouge_l(const std::vector<std::string>& cand,
                        const std::vector<std::vector<std::string>>& refs) {
    double best = 0;
    for (const auto& r : refs) {
        const double lcs = static_cast<double>(lcs_length(cand, r));
        if (lcs == 0 || cand.empty() || r.empty()) continue;
        const double p = lcs / static_cast<double>(cand.size());
        const double rec = lcs / static_cast<double>(r.size());
        const double b2 = kRougeBeta * kRougeBeta;
        const double f = ((1 + b2) * p * rec) / (rec + b2 * p);
        best = std::max(best, f);
    }
    return best;
}

double rouge_l(const std::vector<Candidate>& cands,
               const std::vector<ReferenceSet>& refs) {
    check_aligned(cands, refs);
    if (cands.empty()) return 0.0;
    double sum = 0;
    for (std::size_t i = 0; i < cands.size(); ++i)
        sum += sentence_rouge_l(cands[i].tokens, refs[i].references);
    return sum / static_cast<double>(cands.size());
}

namespace {

// Leftmost greedy unigram alignment: exact stage, then stem stage over the
// leftovers. Returns (cand position -> ref position) pairs.
std::vector<std::pair<std::size_t, std::size_t>> meteor_alignment(
    const std::vector<std::string>& cand,
    const std::vector<std::string>& ref) {
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    std::vector<bool> cand_used(cand.size(), false),
        ref_used(ref.size(), false);
    for (std::size_t i = 0; i < cand.size(); ++i) {
        for (std::size_t j = 0; j < ref.size(); ++j) {
            if (ref_used[j] || cand[i] != ref[j]) continue;
            matches.push_back({i, j});
            cand_used[i] = ref_used[j] = true;
            break;
        }
    }
    for (std::size_t i = 0; i < cand.size(); ++i) {
        if (cand_used[i]) continue;
        const std::string cs = text::stem(cand[i]);
        for (std::size_t j = 0; j < ref.size(); ++j) {
            if (ref_used[j] || cs != text::stem(ref[j])) continue;
            matches.push_back({i, j});
            cand_used[i] = ref_used[j] = true;
            break;
        }
    }
    std::sort(matches.begin(), matches.end());
    return matches;
}

}  // namespace

double sentence_meteor(const std::vector<std::string>& cand,
                       const std::vector<std::vector<std::string>>& refs) {
    double best = 0;
    for (const auto& ref : refs) {
        const auto matches = meteor_alignment(cand, ref);
        const double m = static_cast<double>(matches.size());
        if (m == 0 || cand.empty() || ref.empty()) continue;
        std::size_t chunks = 1;
        for (std::size_t k = 1; k < matches.size(); ++k) {
            if (matches[k].first != matches[k - 1].first + 1 ||
                matches[k].second != matches[k - 1].second + 1)
                ++chunks;
        }
        const double p = m / static_cast<double>(cand.size());
        const double r = m / static_cast<double>(ref.size());
        const double f_mean = 10.0 * p * r / (r + 9.0 * p);
        const double frag = static_cast<double>(chunks) / m;
        const double penalty = 0.5 * frag * frag * frag;
        best = std::max(best, f_mean * (1.0 - penalty));
    }
    return best;
}

double meteor(const std::vector<Candidate>& cands,
              const std::vector<ReferenceSet>& refs) {
    check_aligned(cands, refs);
    if (cands.empty()) return 0.0;
    double sum = 0;
    for (std::size_t i = 0; i < cands.size(); ++i)
        sum += sentence_meteor(cands[i].tokens, refs[i].references);
    return sum / static_cast<double>(cands.size());
}

namespace {

struct CiderIdf {
    Counts df;      // per ngram, number of reference sets containing it
    double n_sets;  // corpus size N
    double idf(const std::string& key) const {
        auto it = df.find(key);
        const double d = it == df.end() ? 1.0 : it->second;
        return std::log(n_sets / d);
    }
};

std::array<CiderIdf, 4> build_idf(const std::vector<ReferenceSet>& refs) {
    std::array<CiderIdf, 4> idf;
    for (int n = 1; n <= 4; ++n) {
        auto& slot = idf[n - 1];
        slot.n_sets = static_cast<double>(refs.size());
        for (const auto& set : refs) {
            Counts seen;
            for (const auto& ref : set.references)
                for (const auto& [key, cnt] : ngram_counts(ref, n))
                    seen[key] = 1.0;
            for (const auto& [key, one] : seen) slot.df[key] += 1.0;
        }
    }
    return idf;
}

Counts tfidf_vector(const std::vector<std::string>& tokens, int n,
                    const CiderIdf& idf) {
    Counts vec = ngram_counts(tokens, n);
    for (auto& [key, val] : vec) val *= idf.idf(key);
    return vec;
}

double vec_norm(const Counts& v) {
    double s = 0;
    for (const auto& [key, val] : v) s += val * val;
    return std::sqrt(s);
}

// CIDEr-D similarity for one order: clipped dot over norms, times the
// Gaussian length factor.
double cider_sim(const Counts& cand_vec, const Counts& ref_vec,
                 std::size_t cand_len, std::size_t ref_len) {
    const double nc = vec_norm(cand_vec), nr = vec_norm(ref_vec);
    if (nc == 0 || nr == 0) return 0.0;
    double dot = 0;
    for (const auto& [key, cval] : cand_vec) {
        auto it = ref_vec.find(key);
        if (it != ref_vec.end()) dot += std::min(cval, it->second) * it->second;
    }
    const double delta =
        static_cast<double>(cand_len) - static_cast<double>(ref_len);
    const double len_factor =
        std::exp(-(delta * delta) / (2.0 * kCiderSigma * kCiderSigma));
    return (dot / (nc * nr)) * len_factor;
}

}  // namespace

std::vector<double> cider_per_item(const std::vector<Candidate>& cands,
                                   const std::vector<ReferenceSet>& refs) {
    check_aligned(cands, refs);
    if (refs.size() < 2)
        throw CorpusTooSmallError(
            "CIDEr idf needs at least 2 reference sets, got " +
            std::to_string(refs.size()));
    const auto idf = build_idf(refs);
    std::vector<double> scores;
    scores.reserve(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
        double score = 0;
        for (int n = 1; n <= 4; ++n) {
            const Counts cand_vec =
                tfidf_vector(cands[i].tokens, n, idf[n - 1]);
            double ref_sum = 0;
            for (const auto& ref : refs[i].references) {
                const Counts ref_vec = tfidf_vector(ref, n, idf[n - 1]);
                ref_sum += cider_sim(cand_vec, ref_vec,
                                     cands[i].tokens.size(), ref.size());
            }
            score += ref_sum /
                     static_cast<double>(refs[i].references.size());
        }
        scores.push_back(10.0 * score / 4.0);
    }
    return scores;
}

double cider(const std::vector<Candidate>& cands,
             const std::vector<ReferenceSet>& refs) {
    const auto scores = cider_per_item(cands, refs);
    if (scores.empty()) return 0.0;
    double sum = 0;
    for (double s : scores) sum += s;
    return sum / static_cast<double>(scores.size());
}

double iou3d(const Box3D& a, const Box3D& b) {
    double inter = 1.0, vol_a = 1.0, vol_b = 1.0;
    for (int i = 0; i < 3; ++i) {
        const double a_min = a.center[i] - a.dims[i] / 2;
        const double a_max = a.center[i] + a.dims[i] / 2;
        const double b_min = b.center[i] - b.dims[i] / 2;
        const double b_max = b.center[i] + b.dims[i] / 2;
        const double overlap =
            std::max(0.0, std::min(a_max, b_max) - std::max(a_min, b_min));
        inter *= overlap;
        vol_a *= a.dims[i];
        vol_b *= b.dims[i];
    }
    const double uni = vol_a + vol_b - inter;
    return uni > 0 ? inter / uni : 0.0;
}

namespace {

std::vector<bool> iou_pass_flags(const std::vector<Candidate>& cands,
                                 const std::vector<ReferenceSet>& refs,
                                 double k) {
    std::vector<bool> pass;
    pass.reserve(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (!cands[i].box) throw MissingBoxError(cands[i].id);
        if (!refs[i].box) throw MissingBoxError(refs[i].id);
        pass.push_back(iou3d(*cands[i].box, *refs[i].box) >= k);
    }
    return pass;
}

double gated_bleu(const std::vector<Candidate>& cands,
                  const std::vector<ReferenceSet>& refs,
                  const std::vector<bool>& pass, int n) {
    std::vector<double> clipped(n + 1, 0), total(n + 1, 0);
    double c_len = 0, r_len = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const auto& cand = cands[i].tokens;
        c_len += static_cast<double>(cand.size());
        r_len += static_cast<double>(
            closest_ref_length(cand.size(), refs[i].references));
        for (int g = 1; g <= n; ++g) {
            const Counts cand_counts = ngram_counts(cand, g);
            for (const auto& [key, count] : cand_counts) {
                total[g] += count;
                if (!pass[i]) continue;  // no credit below the IoU gate
                double max_ref = 0;
                for (const auto& r : refs[i].references) {
                    const Counts rc = ngram_counts(r, g);
                    auto it = rc.find(key);
                    if (it != rc.end())
                        max_ref = std::max(max_ref, it->second);
                }
                clipped[g] += std::min(count, max_ref);
            }
        }
    }
    double log_sum = 0;
    for (int g = 1; g <= n; ++g) {
        if (total[g] == 0 || clipped[g] == 0) return 0.0;
        log_sum += std::log(clipped[g] / total[g]);
    }
    const double bp = c_len < r_len && c_len > 0
                          ? std::exp(1.0 - r_len / c_len)
                          : 1.0;
    return bp * std::exp(log_sum / n);
}

}  // namespace

double gated_metric(const std::vector<Candidate>& cands,
                    const std::vector<ReferenceSet>& refs, double k,
                    BaseMetric base) {
    check_aligned(cands, refs);
    if (cands.empty()) return 0.0;
    const auto pass = iou_pass_flags(cands, refs, k);
    switch (base) {
        case BaseMetric::bleu1:
            return gated_bleu(cands, refs, pass, 1);
        case BaseMetric::bleu2:
            return gated_bleu(cands, refs, pass, 2);
        case BaseMetric::bleu3:
            return gated_bleu(cands, refs, pass, 3);
        case BaseMetric::bleu4:
            return gated_bleu(cands, refs, pass, 4);
        case BaseMetric::rouge_l: {
            double sum = 0;
            for (std::size_t i = 0; i < cands.size(); ++i)
                if (pass[i])
                    sum += sentence_rouge_l(cands[i].tokens,
                                            refs[i].references);
            return sum / static_cast<double>(refs.size());
        }
        case BaseMetric::meteor: {
            double sum = 0;
            for (std::size_t i = 0; i < cands.size(); ++i)
                if (pass[i])
                    sum += sentence_meteor(cands[i].tokens,
                                           refs[i].references);
            return sum / static_cast<double>(refs.size());
        }
        case BaseMetric::cider: {
            const auto scores = cider_per_item(cands, refs);
            double sum = 0;
            for (std::size_t i = 0; i < scores.size(); ++i)
                if (pass[i]) sum += scores[i];
            return sum / static_cast<double>(refs.size());
        }
    }
    return 0.0;
}

MetricReport evaluate_corpus(const std::vector<Candidate>& cands,
                             const std::vector<ReferenceSet>& refs,
                             std::optional<double> gate_iou) {
    check_aligned(cands, refs);
    MetricReport report;
    for (int n = 1; n <= 4; ++n) report.bleu[n - 1] = bleu(cands, refs, n);
    report.rouge_l = rouge_l(cands, refs);
    report.meteor = meteor(cands, refs);
    report.cider = cider(cands, refs);

    const bool all_boxed =
        !cands.empty() &&
        std::all_of(cands.begin(), cands.end(),
                    [](const Candidate& c) { return c.box.has_value(); }) &&
        std::all_of(refs.begin(), refs.end(),
                    [](const ReferenceSet& r) { return r.box.has_value(); });
    if (gate_iou && all_boxed) {
        const double k = *gate_iou;
        report.gate_iou = k;
        report.gated_bleu = {
            gated_metric(cands, refs, k, BaseMetric::bleu1),
            gated_metric(cands, refs, k, BaseMetric::bleu2),
            gated_metric(cands, refs, k, BaseMetric::bleu3),
            gated_metric(cands, refs, k, BaseMetric::bleu4)};
        report.gated_rouge_l = gated_metric(cands, refs, k,
                                            BaseMetric::rouge_l);
        report.gated_meteor = gated_metric(cands, refs, k, BaseMetric::meteor);
        report.gated_cider = gated_metric(cands, refs, k, BaseMetric::cider);
    }
    return report;
}

Json report_to_json(const MetricReport& report) {
    Json raw;
    for (int n = 0; n < 4; ++n)
        raw["bleu_" + std::to_string(n + 1)] = report.bleu[n];
    raw["rouge_l"] = report.rouge_l;
    raw["meteor"] = report.meteor;
    raw["cider"] = report.cider;

    Json scaled;
    for (auto it = raw.begin(); it != raw.end(); ++it)
        scaled[it.key()] = it.value().get<double>() * 100.0;

    Json j;
    j["raw"] = raw;
    j["x100"] = scaled;
    if (report.gate_iou) {
        Json g;
        g["iou_threshold"] = *report.gate_iou;
        // gated scores average over ground-truth items
        g["aggregation"] = "mean_over_references";
        Json graw;
        for (int n = 0; n < 4; ++n)
            graw["bleu_" + std::to_string(n + 1)] = (*report.gated_bleu)[n];
        graw["rouge_l"] = *report.gated_rouge_l;
        graw["meteor"] = *report.gated_meteor;
        graw["cider"] = *report.gated_cider;
        Json gscaled;
        for (auto it = graw.begin(); it != graw.end(); ++it)
            gscaled[it.key()] = it.value().get<double>() * 100.0;
        g["raw"] = graw;
        g["x100"] = gscaled;
        j["gated"] = g;
    }
    return j;
}

}  // namespace sdf::metrics
