#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace sdf {

using Json = nlohmann::ordered_json;

// ScanNet scene identifier, e.g. "scene0000_00".
struct SceneId {
    std::string value;

    bool operator==(const SceneId&) const = default;
    // strict pattern: scene\d{4}_\d{2}
    bool is_strict_valid() const;
};

// Axis-aligned 3D box, center + full extents, meters.
struct Box3D {
    std::array<double, 3> center{0, 0, 0};
    std::array<double, 3> dims{0, 0, 0};

    bool operator==(const Box3D&) const = default;
    bool is_valid() const {
        return dims[0] > 0 && dims[1] > 0 && dims[2] > 0;
    }
};

enum class Provenance { original, qa_gen, caption_gen, scene_gen };

const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct QualityScores {
    std::optional<double> s_q;    // cosine vs original pool, [-1,1]
    std::optional<double> s_cap;  // mean NLI entailment, [0,1]
    std::optional<double> rel;    // sigmoid relevance, (0,1)

    bool operator==(const QualityScores&) const = default;
    bool any() const { return s_q || s_cap || rel; }
};

// One question/answer sample tied to a scene.
struct QARecord {
    std::string id;
    SceneId scene_id;
    std::string question;
    std::vector<std::string> answers;
    std::vector<int> object_ids;
    Provenance provenance = Provenance::original;
    std::optional<QualityScores> scores;

    bool operator==(const QARecord&) const = default;
};

// One object description with its optional 3D box.
struct CaptionRecord {
    std::string id;
    SceneId scene_id;
    int object_id = 0;
    std::string object_name;
    std::string description;
    std::optional<Box3D> box;

    bool operator==(const CaptionRecord&) const = default;
};

// Calibrated gate values per task. Tasks are "qa" and "cap".
struct ThresholdSet {
    enum class Source { paper_default, calibrated };

    double tau_qa = 0.82;
    double tau_cap = 0.77;
    std::map<std::string, double> mu;
    std::map<std::string, double> sigma;
    Source source = Source::paper_default;

    static ThresholdSet defaults() { return ThresholdSet{}; }
    bool operator==(const ThresholdSet&) const = default;
};

struct DatasetManifest {
    std::map<std::string, std::size_t> source_counts;  // provenance -> count
    std::size_t total = 0;
    std::uint64_t seed = 0;
    ThresholdSet threshold_set;
    std::string created_at;
};

// JSON (de)serialization. Key order on write is fixed so golden files are
// byte-exact.
Json to_json(const Box3D& b);
Box3D box3d_from_json(const Json& j);

Json to_json(const QualityScores& s);
QualityScores scores_from_json(const Json& j);

Json to_json(const QARecord& r);
QARecord qa_from_json(const Json& j);

Json to_json(const CaptionRecord& r);
CaptionRecord caption_from_json(const Json& j);

Json to_json(const ThresholdSet& t);
ThresholdSet thresholds_from_json(const Json& j);

Json to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const Json& j);

}  // namespace sdf
