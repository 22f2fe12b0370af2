#include "sdf/backends.hpp"

#include <cmath>

#include "sdf/errors.hpp"
#include "sdf/rng.hpp"
#include "sdf/text.hpp"

namespace sdf {

double cosine(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatchError(a.size(), b.size());
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) return 0.0;
    double c = dot / (std::sqrt(na) * std::sqrt(nb));
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return c;
}

std::vector<Vector> EmbeddingBackend::embed_batch(
    const std::vector<std::string>& texts) const {
    std::vector<Vector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed(t));
    return out;
}

ReferenceEmbedder::ReferenceEmbedder(std::size_t dimension,
                                     std::uint64_t hash_seed)
    : dimension_(dimension), hash_seed_(hash_seed) {}

std::string ReferenceEmbedder::version() const {
    return "1-d" + std::to_string(dimension_) + "-s" +
           std::to_string(hash_seed_);
}

Vector ReferenceEmbedder::embed(const std::string& text) const {
    return reference_embed(text, dimension_, hash_seed_);
}

Vector reference_embed(const std::string& text, std::size_t dimension,
                       std::uint64_t hash_seed) {
    Vector v(dimension, 0.0);
    const auto tokens = text::word_tokens(text);
    for (const auto& tok : tokens) {
        const std::uint64_t h = fnv1a(tok, 0xcbf29ce484222325ULL ^ hash_seed);
        const std::size_t idx = h % dimension;
        const double sign = (splitmix64(h) & 1) ? 1.0 : -1.0;
        v[idx] += sign;
    }
    double norm = 0;
    for (double x : v) norm += x * x;
    if (norm > 0) {
        norm = std::sqrt(norm);
        for (double& x : v) x /= norm;
    }
    return v;
}

ReferenceNli::ReferenceNli() : stopwords_(text::default_stopwords()) {}

ReferenceNli::ReferenceNli(std::unordered_set<std::string> stopwords)
    : stopwords_(std::move(stopwords)) {}

double ReferenceNli::score(const std::string& premise,
                           const std::string& hypothesis) const {
    const auto premise_tokens = text::word_tokens(premise);
    std::unordered_set<std::string> premise_set(premise_tokens.begin(),
                                                premise_tokens.end());
    std::size_t content = 0, present = 0;
    for (const auto& tok : text::word_tokens(hypothesis)) {
        if (stopwords_.count(tok)) continue;
        ++content;
        if (premise_set.count(tok)) ++present;
    }
    if (content == 0) return 1.0;
    return static_cast<double>(present) / static_cast<double>(content);
}

double reference_nli(const std::string& premise,
                     const std::string& hypothesis) {
    static const ReferenceNli nli;
    return nli.score(premise, hypothesis);
}

ReferenceGenerator::ReferenceGenerator(std::size_t max_candidates)
    : max_candidates_(max_candidates) {}

GenerationResult ReferenceGenerator::generate(
    const GenerationRequest& req) const {
    GenerationResult result;
    const int k = std::min<int>(req.k, static_cast<int>(max_candidates_));
    if (k <= 0) return result;

    // Content tokens of the scene summary drive the questions; the stream
    // cycles when the context is shorter than k.
    std::vector<std::string> content;
    for (const auto& tok : text::word_tokens(req.context))
        if (!text::default_stopwords().count(tok)) content.push_back(tok);
    if (content.empty()) content.push_back("object");

    for (int i = 0; i < k; ++i) {
        const std::string& obj = content[i % content.size()];
        const std::string& ans =
            content[(i + 1) % content.size()];
        GenCandidate c;
        c.question = "what is near the " + obj + " in " + req.scene_id + "?";
        c.answer = ans;
        result.candidates.push_back(std::move(c));
    }
    return result;
}

}  // namespace sdf
