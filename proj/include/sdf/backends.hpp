#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace sdf {

using Vector = std::vector<double>;

double cosine(const Vector& a, const Vector& b);

// Text embedding service contract. embed() must return exactly dimension()
// reals, identically for identical (text, version).
class EmbeddingBackend {
  public:
    virtual ~EmbeddingBackend() = default;
    virtual std::string name() const = 0;
    virtual std::string version() const = 0;
    virtual std::size_t dimension() const = 0;
    virtual Vector embed(const std::string& text) const = 0;
    // Index-aligned with the input; default loops over embed().
    virtual std::vector<Vector> embed_batch(
        const std::vector<std::string>& texts) const;
};

// NLI entailment scoring contract: score(premise, hypothesis) in [0,1].
class NliBackend {
  public:
    virtual ~NliBackend() = default;
    virtual std::string name() const = 0;
    virtual std::string version() const = 0;
    virtual double score(const std::string& premise,
                         const std::string& hypothesis) const = 0;
};

struct GenCandidate {
    std::string question;
    std::string answer;
};

struct GenerationRequest {
    std::string scene_id;
    std::string context;
    std::string prompt_template;
    int k = 1;
};

struct GenerationResult {
    std::vector<GenCandidate> candidates;  // validated, non-empty q and a
    std::size_t dropped = 0;               // malformed candidates discarded
};

// Scene-to-QA generation contract.
class GeneratorBackend {
  public:
    virtual ~GeneratorBackend() = default;
    virtual std::string name() const = 0;
    virtual std::string version() const = 0;
    virtual std::size_t max_candidates() const = 0;
    virtual GenerationResult generate(const GenerationRequest& req) const = 0;
};

// Deterministic offline embedder: hashed bag-of-words. Each token hashes to
// an index in [0, dim) with sign from a second hash; the vector is
// L2-normalized. Empty token list gives the zero vector.
class ReferenceEmbedder : public EmbeddingBackend {
  public:
    explicit ReferenceEmbedder(std::size_t dimension = 256,
                               std::uint64_t hash_seed = 0);
    std::string name() const override { return "reference-bow"; }
    std::string version() const override;
    std::size_t dimension() const override { return dimension_; }
    Vector embed(const std::string& text) const override;

  private:
    std::size_t dimension_;
    std::uint64_t hash_seed_;
};

Vector reference_embed(const std::string& text, std::size_t dimension,
                       std::uint64_t hash_seed = 0);

// Deterministic offline NLI: fraction of hypothesis content tokens
// (stopwords removed) present in the premise token set. A hypothesis with
// no content tokens scores 1.0.
class ReferenceNli : public NliBackend {
  public:
    ReferenceNli();
    explicit ReferenceNli(std::unordered_set<std::string> stopwords);
    std::string name() const override { return "reference-overlap"; }
    std::string version() const override { return "1"; }
    double score(const std::string& premise,
                 const std::string& hypothesis) const override;

  private:
    std::unordered_set<std::string> stopwords_;
};

double reference_nli(const std::string& premise,
                     const std::string& hypothesis);

// Deterministic offline generator: derives exactly k well-formed QA pairs
// from the scene context's content tokens.
class ReferenceGenerator : public GeneratorBackend {
  public:
    explicit ReferenceGenerator(std::size_t max_candidates = 16);
    std::string name() const override { return "reference-gen"; }
    std::string version() const override { return "1"; }
    std::size_t max_candidates() const override { return max_candidates_; }
    GenerationResult generate(const GenerationRequest& req) const override;

  private:
    std::size_t max_candidates_;
};

}  // namespace sdf
