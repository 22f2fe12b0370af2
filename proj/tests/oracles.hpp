// Independent brute-force reference implementations used only by tests.
// These share no code with the engine under test: counting is done with
// ordered maps over '|'-joined n-gram strings and plain nested loops.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace oracle {

using Sentence = std::vector<std::string>;
using SentenceList = std::vector<Sentence>;

inline std::map<std::string, int> count_ngrams(const Sentence& s, int n) {
    std::map<std::string, int> m;
    for (int i = 0; i + n <= static_cast<int>(s.size()); ++i) {
        std::string key;
        for (int k = 0; k < n; ++k) key += s[i + k] + "|";
        m[key] += 1;
    }
    return m;
}

// Corpus BLEU with clipped precisions and closest-reference brevity
// penalty.
inline double bleu(const std::vector<Sentence>& cands,
                   const std::vector<SentenceList>& refs, int max_n) {
    double product = 1.0;
    for (int n = 1; n <= max_n; ++n) {
        long long match = 0, guess = 0;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            const auto cand_counts = count_ngrams(cands[i], n);
            for (const auto& [gram, count] : cand_counts) {
                guess += count;
                int best = 0;
                for (const auto& ref : refs[i]) {
                    const auto ref_counts = count_ngrams(ref, n);
                    auto it = ref_counts.find(gram);
                    if (it != ref_counts.end() && it->second > best)
                        best = it->second;
                }
                match += std::min(count, best);
            }
        }
        if (guess == 0 || match == 0) return 0.0;
        product *= static_cast<double>(match) / static_cast<double>(guess);
    }
    long long cand_len = 0, ref_len = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        cand_len += static_cast<long long>(cands[i].size());
        long long best = static_cast<long long>(refs[i][0].size());
        for (const auto& ref : refs[i]) {
            const long long len = static_cast<long long>(ref.size());
            const long long d1 = std::llabs(len - (long long)cands[i].size());
            const long long d2 =
                std::llabs(best - (long long)cands[i].size());
            if (d1 < d2 || (d1 == d2 && len < best)) best = len;
        }
        ref_len += best;
    }
    double bp = 1.0;
    if (cand_len < ref_len && cand_len > 0)
        bp = std::exp(1.0 - static_cast<double>(ref_len) /
                                static_cast<double>(cand_len));
    return bp * std::pow(product, 1.0 / max_n);
}

inline int lcs(const Sentence& a, const Sentence& b) {
    std::vector<std::vector<int>> dp(a.size() + 1,
                                     std::vector<int>(b.size() + 1, 0));
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            dp[i][j] = a[i - 1] == b[j - 1]
                           ? dp[i - 1][j - 1] + 1
                           : std::max(dp[i - 1][j], dp[i][j - 1]);
    return dp[a.size()][b.size()];
}

inline double rouge_l(const std::vector<Sentence>& cands,
                      const std::vector<SentenceList>& refs) {
    if (cands.empty()) return 0.0;
    const double beta = 1.2;
    double total = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        double best = 0;
        for (const auto& ref : refs[i]) {
            const double l = lcs(cands[i], ref);
            if (l == 0) continue;
            const double p = l / cands[i].size();
            const double r = l / ref.size();
            const double f =
                (1 + beta * beta) * p * r / (r + beta * beta * p);
            if (f > best) best = f;
        }
        total += best;
    }
    return total / cands.size();
}

inline std::string strip_suffix(const std::string& w) {
    auto has = [&](const char* suf, std::size_t n) {
        return w.size() > n + 2 && w.substr(w.size() - n) == suf;
    };
    if (has("ing", 3)) return w.substr(0, w.size() - 3);
    if (has("ed", 2)) return w.substr(0, w.size() - 2);
    if (has("es", 2)) return w.substr(0, w.size() - 2);
    if (has("s", 1)) return w.substr(0, w.size() - 1);
    return w;
}

// Exact-then-stem leftmost greedy alignment, chunk penalty scoring.
inline double meteor_sentence(const Sentence& cand, const Sentence& ref) {
    std::vector<int> cand_to_ref(cand.size(), -1);
    std::vector<bool> ref_taken(ref.size(), false);
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < cand.size(); ++i) {
            if (cand_to_ref[i] != -1) continue;
            for (std::size_t j = 0; j < ref.size(); ++j) {
                if (ref_taken[j]) continue;
                const bool ok = pass == 0
                                    ? cand[i] == ref[j]
                                    : strip_suffix(cand[i]) ==
                                          strip_suffix(ref[j]);
                if (!ok) continue;
                cand_to_ref[i] = static_cast<int>(j);
                ref_taken[j] = true;
                break;
            }
        }
    }
    int m = 0;
    for (int j : cand_to_ref)
        if (j != -1) ++m;
    if (m == 0 || cand.empty() || ref.empty()) return 0.0;
    int chunks = 0;
    int prev = -2;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        if (cand_to_ref[i] == -1) {
            prev = -2;
            continue;
        }
        if (prev == -2 || cand_to_ref[i] != prev + 1) ++chunks;
        prev = cand_to_ref[i];
    }
    const double p = static_cast<double>(m) / cand.size();
    const double r = static_cast<double>(m) / ref.size();
    const double f = 10.0 * p * r / (r + 9.0 * p);
    const double penalty =
        0.5 * std::pow(static_cast<double>(chunks) / m, 3.0);
    return f * (1.0 - penalty);
}

inline double meteor(const std::vector<Sentence>& cands,
                     const std::vector<SentenceList>& refs) {
    if (cands.empty()) return 0.0;
    double total = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        double best = 0;
        for (const auto& ref : refs[i])
            best = std::max(best, meteor_sentence(cands[i], ref));
        total += best;
    }
    return total / cands.size();
}

// CIDEr-D with clipped tf-idf similarity and the Gaussian length factor.
inline std::vector<double> cider_items(const std::vector<Sentence>& cands,
                                       const std::vector<SentenceList>& refs) {
    const double sigma = 6.0;
    std::vector<double> out;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        double item = 0;
        for (int n = 1; n <= 4; ++n) {
            // document frequency over all reference sets
            std::map<std::string, double> df;
            for (const auto& set : refs) {
                std::map<std::string, int> present;
                for (const auto& ref : set)
                    for (const auto& [g, c] : count_ngrams(ref, n))
                        present[g] = 1;
                for (const auto& [g, one] : present) df[g] += 1.0;
            }
            const double nsets = static_cast<double>(refs.size());
            auto weight = [&](const std::string& g, int count) {
                auto it = df.find(g);
                const double d = it == df.end() ? 1.0 : it->second;
                return count * std::log(nsets / d);
            };
            const auto cand_counts = count_ngrams(cands[i], n);
            double cand_norm2 = 0;
            for (const auto& [g, c] : cand_counts) {
                const double w = weight(g, c);
                cand_norm2 += w * w;
            }
            double ref_avg = 0;
            for (const auto& ref : refs[i]) {
                const auto ref_counts = count_ngrams(ref, n);
                double ref_norm2 = 0, dot = 0;
                for (const auto& [g, c] : ref_counts) {
                    const double w = weight(g, c);
                    ref_norm2 += w * w;
                }
                for (const auto& [g, c] : cand_counts) {
                    auto it = ref_counts.find(g);
                    if (it == ref_counts.end()) continue;
                    dot += std::min(weight(g, c), weight(g, it->second)) *
                           weight(g, it->second);
                }
                double sim = 0;
                if (cand_norm2 > 0 && ref_norm2 > 0)
                    sim = dot / (std::sqrt(cand_norm2) * std::sqrt(ref_norm2));
                const double diff = static_cast<double>(cands[i].size()) -
                                    static_cast<double>(ref.size());
                sim *= std::exp(-diff * diff / (2 * sigma * sigma));
                ref_avg += sim;
            }
            item += ref_avg / refs[i].size();
        }
        out.push_back(10.0 * item / 4.0);
    }
    return out;
}

inline double cider(const std::vector<Sentence>& cands,
                    const std::vector<SentenceList>& refs) {
    const auto items = cider_items(cands, refs);
    double total = 0;
    for (double s : items) total += s;
    return items.empty() ? 0.0 : total / items.size();
}

// All-pairs greedy dedup over precomputed vectors.
inline std::vector<bool> dedup(const std::vector<std::vector<double>>& vecs,
                               double theta) {
    std::vector<bool> keep(vecs.size(), true);
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (!keep[j]) continue;
            double dot = 0, ni = 0, nj = 0;
            for (std::size_t k = 0; k < vecs[i].size(); ++k) {
                dot += vecs[i][k] * vecs[j][k];
                ni += vecs[i][k] * vecs[i][k];
                nj += vecs[j][k] * vecs[j][k];
            }
            double c = 0;
            if (ni > 0 && nj > 0) c = dot / std::sqrt(ni) / std::sqrt(nj);
            if (c > 1.0) c = 1.0;
            if (c >= theta) {
                keep[i] = false;
                break;
            }
        }
    }
    return keep;
}

}  // namespace oracle
