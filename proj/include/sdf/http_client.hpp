#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sdf/backends.hpp"
#include "sdf/records.hpp"

namespace sdf {

// Connection settings shared by all HTTP backends. Environment overrides:
// SDF_EMBED_URL, SDF_NLI_URL, SDF_GEN_URL, SDF_BEARER_TOKEN.
struct EndpointConfig {
    std::string url;          // e.g. "http://localhost:8080"
    std::string model;        // model name sent with each request
    int timeout_ms = 10000;
    std::size_t batch_size = 32;
    int max_inflight = 8;
    int max_attempts = 3;     // per-batch retries
    int backoff_base_ms = 250;
    int backoff_factor = 2;
    std::string bearer_token;

    static EndpointConfig from_json(const Json& j);
    Json to_json() const;
};

struct RetryStats {
    std::size_t requests = 0;
    std::size_t retries = 0;
};

// POST /v1/embed {"model":..., "texts":[...]} -> {"vectors":[[...],...]}
// Batches of <= batch_size; exponential backoff between attempts. Results
// are index-aligned with the input.
std::vector<Vector> http_embed(const std::vector<std::string>& texts,
                               const EndpointConfig& config,
                               std::size_t expected_dimension,
                               RetryStats* stats = nullptr);

// POST /v1/nli {"model":..., "pairs":[{"premise":...,"hypothesis":...}]}
// -> {"scores":[...]} with each score in [0,1].
std::vector<double> http_nli(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const EndpointConfig& config, RetryStats* stats = nullptr);

// POST /v1/generate {"scene_id":..., "context":..., "template":..., "k":...}
// -> {"candidates":[{"q":...,"a":...}]}. Candidates failing non-empty q/a
// validation are dropped and counted.
GenerationResult http_generate(const GenerationRequest& request,
                               const EndpointConfig& config,
                               RetryStats* stats = nullptr);

class HttpEmbedder : public EmbeddingBackend {
  public:
    HttpEmbedder(EndpointConfig config, std::size_t dimension,
                 std::string version = "http");
    std::string name() const override { return "http-embed"; }
    std::string version() const override { return version_; }
    std::size_t dimension() const override { return dimension_; }
    Vector embed(const std::string& text) const override;
    std::vector<Vector> embed_batch(
        const std::vector<std::string>& texts) const override;

  private:
    EndpointConfig config_;
    std::size_t dimension_;
    std::string version_;
};

class HttpNli : public NliBackend {
  public:
    explicit HttpNli(EndpointConfig config, std::string version = "http");
    std::string name() const override { return "http-nli"; }
    std::string version() const override { return version_; }
    double score(const std::string& premise,
                 const std::string& hypothesis) const override;

  private:
    EndpointConfig config_;
    std::string version_;
};

class HttpGenerator : public GeneratorBackend {
  public:
    HttpGenerator(EndpointConfig config, std::size_t max_candidates = 16,
                  std::string version = "http");
    std::string name() const override { return "http-gen"; }
    std::string version() const override { return version_; }
    std::size_t max_candidates() const override { return max_candidates_; }
    GenerationResult generate(const GenerationRequest& req) const override;

  private:
    EndpointConfig config_;
    std::size_t max_candidates_;
    std::string version_;
};

}  // namespace sdf
