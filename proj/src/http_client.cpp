#include "sdf/http_client.hpp"

#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "sdf/errors.hpp"
#include "sdf/text.hpp"

namespace sdf {

namespace {

// Counting semaphore capping concurrent requests per endpoint. httplib
// clients are per-call; the cap is what the contract guarantees.
class InflightGuard {
  public:
    explicit InflightGuard(int cap) : cap_(cap) {}
    void acquire() {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return active_ < cap_; });
        ++active_;
    }
    void release() {
        {
            std::lock_guard lock(m_);
            --active_;
        }
        cv_.notify_one();
    }

  private:
    int cap_;
    int active_ = 0;
    std::mutex m_;
    std::condition_variable cv_;
};

InflightGuard& guard_for(const EndpointConfig& config) {
    static std::mutex m;
    static std::map<std::string, std::unique_ptr<InflightGuard>> guards;
    std::lock_guard lock(m);
    auto& g = guards[config.url];
    if (!g) g = std::make_unique<InflightGuard>(config.max_inflight);
    return *g;
}

// One POST with retry + exponential backoff. Throws BackendUnavailable
// after max_attempts transport failures; 4xx/5xx responses are protocol
// errors and are not retried (except 429/503, treated as transient).
Json post_json(const EndpointConfig& config, const std::string& path,
               const Json& body, RetryStats* stats) {
    auto& guard = guard_for(config);
    guard.acquire();
    struct Release {
        InflightGuard& g;
        ~Release() { g.release(); }
    } release{guard};

    std::string last_error;
    int delay_ms = config.backoff_base_ms;
    for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
        if (stats) ++stats->requests;
        httplib::Client client(config.url);
        client.set_connection_timeout(0, config.timeout_ms * 1000);
        client.set_read_timeout(0, config.timeout_ms * 1000);
        httplib::Headers headers;
        if (!config.bearer_token.empty())
            headers.emplace("Authorization", "Bearer " + config.bearer_token);
        auto res =
            client.Post(path, headers, body.dump(), "application/json");
        if (res) {
            if (res->status == 429 || res->status == 503) {
                last_error = "status " + std::to_string(res->status);
            } else if (res->status != 200) {
                throw BackendProtocolError(config.url + path + " returned " +
                                           std::to_string(res->status));
            } else {
                try {
                    return Json::parse(res->body);
                } catch (const Json::exception& e) {
                    throw BackendProtocolError(std::string("non-JSON body: ") +
                                               e.what());
                }
            }
        } else {
            last_error = httplib::to_string(res.error());
        }
        if (attempt < config.max_attempts) {
            if (stats) ++stats->retries;
            std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
            delay_ms *= config.backoff_factor;
        }
    }
    throw BackendUnavailableError(config.url + path + ": " + last_error +
                                  " after " +
                                  std::to_string(config.max_attempts) +
                                  " attempts");
}

}  // namespace

EndpointConfig EndpointConfig::from_json(const Json& j) {
    EndpointConfig c;
    if (j.contains("url")) c.url = j.at("url").get<std::string>();
    if (j.contains("model")) c.model = j.at("model").get<std::string>();
    if (j.contains("timeout_ms")) c.timeout_ms = j.at("timeout_ms").get<int>();
    if (j.contains("batch_size"))
        c.batch_size = j.at("batch_size").get<std::size_t>();
    if (j.contains("max_inflight"))
        c.max_inflight = j.at("max_inflight").get<int>();
    if (j.contains("max_attempts"))
        c.max_attempts = j.at("max_attempts").get<int>();
    if (j.contains("backoff_base_ms"))
        c.backoff_base_ms = j.at("backoff_base_ms").get<int>();
    if (j.contains("bearer_token"))
        c.bearer_token = j.at("bearer_token").get<std::string>();
    return c;
}

Json EndpointConfig::to_json() const {
    Json j;
    j["url"] = url;
    j["model"] = model;
    j["timeout_ms"] = timeout_ms;
    j["batch_size"] = batch_size;
    j["max_inflight"] = max_inflight;
    j["max_attempts"] = max_attempts;
    j["backoff_base_ms"] = backoff_base_ms;
    return j;
}

std::vector<Vector> http_embed(const std::vector<std::string>& texts,
                               const EndpointConfig& config,
                               std::size_t expected_dimension,
                               RetryStats* stats) {
    std::vector<Vector> out;
    out.reserve(texts.size());
    for (std::size_t begin = 0; begin < texts.size();
         begin += config.batch_size) {
        const std::size_t end =
            std::min(texts.size(), begin + config.batch_size);
        Json body;
        body["model"] = config.model;
        body["texts"] = std::vector<std::string>(texts.begin() + begin,
                                                 texts.begin() + end);
        const Json res = post_json(config, "/v1/embed", body, stats);
        if (!res.contains("vectors") || !res.at("vectors").is_array())
            throw BackendProtocolError("embed response missing \"vectors\"");
        const auto& vectors = res.at("vectors");
        if (vectors.size() != end - begin)
            throw BackendProtocolError(
                "embed returned " + std::to_string(vectors.size()) +
                " vectors for a batch of " + std::to_string(end - begin));
        for (const auto& v : vectors) {
            Vector vec = v.get<Vector>();
            if (vec.size() != expected_dimension)
                throw BackendProtocolError(
                    "embed vector dimension " + std::to_string(vec.size()) +
                    ", expected " + std::to_string(expected_dimension));
            out.push_back(std::move(vec));
        }
    }
    return out;
}

std::vector<double> http_nli(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const EndpointConfig& config, RetryStats* stats) {
    std::vector<double> out;
    out.reserve(pairs.size());
    for (std::size_t begin = 0; begin < pairs.size();
         begin += config.batch_size) {
        const std::size_t end =
            std::min(pairs.size(), begin + config.batch_size);
        Json body;
        body["model"] = config.model;
        Json arr = Json::array();
        for (std::size_t i = begin; i < end; ++i)
            arr.push_back(Json{{"premise", pairs[i].first},
                               {"hypothesis", pairs[i].second}});
        body["pairs"] = arr;
        const Json res = post_json(config, "/v1/nli", body, stats);
        if (!res.contains("scores") || !res.at("scores").is_array() ||
            res.at("scores").size() != end - begin)
            throw BackendProtocolError("nli response missing aligned scores");
        for (const auto& s : res.at("scores")) {
            const double v = s.get<double>();
            if (v < 0.0 || v > 1.0)
                throw BackendProtocolError("nli score out of [0,1]");
            out.push_back(v);
        }
    }
    return out;
}

GenerationResult http_generate(const GenerationRequest& request,
                               const EndpointConfig& config,
                               RetryStats* stats) {
    Json body;
    body["scene_id"] = request.scene_id;
    body["context"] = request.context;
    body["template"] = request.prompt_template;
    body["k"] = request.k;
    const Json res = post_json(config, "/v1/generate", body, stats);
    if (!res.contains("candidates") || !res.at("candidates").is_array())
        throw BackendProtocolError("generate response missing \"candidates\"");
    GenerationResult result;
    for (const auto& c : res.at("candidates")) {
        if (!c.is_object() || !c.contains("q") || !c.contains("a") ||
            !c.at("q").is_string() || !c.at("a").is_string()) {
            ++result.dropped;
            continue;
        }
        GenCandidate cand{c.at("q").get<std::string>(),
                          c.at("a").get<std::string>()};
        if (text::trim(cand.question).empty() ||
            text::trim(cand.answer).empty()) {
            ++result.dropped;
            continue;
        }
        result.candidates.push_back(std::move(cand));
    }
    return result;
}

HttpEmbedder::HttpEmbedder(EndpointConfig config, std::size_t dimension,
                           std::string version)
    : config_(std::move(config)), dimension_(dimension),
      version_(std::move(version)) {}

Vector HttpEmbedder::embed(const std::string& text) const {
    return http_embed({text}, config_, dimension_).front();
}

std::vector<Vector> HttpEmbedder::embed_batch(
    const std::vector<std::string>& texts) const {
    return http_embed(texts, config_, dimension_);
}

HttpNli::HttpNli(EndpointConfig config, std::string version)
    : config_(std::move(config)), version_(std::move(version)) {}

double HttpNli::score(const std::string& premise,
                      const std::string& hypothesis) const {
    return http_nli({{premise, hypothesis}}, config_).front();
}

HttpGenerator::HttpGenerator(EndpointConfig config,
                             std::size_t max_candidates, std::string version)
    : config_(std::move(config)), max_candidates_(max_candidates),
      version_(std::move(version)) {}

GenerationResult HttpGenerator::generate(const GenerationRequest& req) const {
    return http_generate(req, config_);
}

}  // namespace sdf
