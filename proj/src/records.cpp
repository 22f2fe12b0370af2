#include "sdf/records.hpp"

#include <cctype>

#include "sdf/errors.hpp"

namespace sdf {

bool SceneId::is_strict_valid() const {
    // scene\d{4}_\d{2}
    if (value.size() != 12) return false;
    if (value.compare(0, 5, "scene") != 0) return false;
    for (int i : {5, 6, 7, 8, 10, 11})
        if (!std::isdigit(static_cast<unsigned char>(value[i]))) return false;
    return value[9] == '_';
}

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::original: return "original";
        case Provenance::qa_gen: return "qa_gen";
        case Provenance::caption_gen: return "caption_gen";
        case Provenance::scene_gen: return "scene_gen";
    }
    return "original";
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "original") return Provenance::original;
    if (s == "qa_gen") return Provenance::qa_gen;
    if (s == "caption_gen") return Provenance::caption_gen;
    if (s == "scene_gen") return Provenance::scene_gen;
    throw MalformedRecordError(0, "unknown provenance: " + s);
}

Json to_json(const Box3D& b) {
    return Json{{"center", b.center}, {"dims", b.dims}};
}

Box3D box3d_from_json(const Json& j) {
    Box3D b;
    b.center = j.at("center").get<std::array<double, 3>>();
    b.dims = j.at("dims").get<std::array<double, 3>>();
    return b;
}

Json to_json(const QualityScores& s) {
    Json j = Json::object();
    if (s.s_q) j["s_q"] = *s.s_q;
    if (s.s_cap) j["s_cap"] = *s.s_cap;
    if (s.rel) j["rel"] = *s.rel;
    return j;
}

QualityScores scores_from_json(const Json& j) {
    QualityScores s;
    if (j.contains("s_q")) s.s_q = j.at("s_q").get<double>();
    if (j.contains("s_cap")) s.s_cap = j.at("s_cap").get<double>();
    if (j.contains("rel")) s.rel = j.at("rel").get<double>();
    return s;
}

Json to_json(const QARecord& r) {
    Json j;
    j["id"] = r.id;
    j["scene_id"] = r.scene_id.value;
    j["question"] = r.question;
    j["answers"] = r.answers;
    j["object_ids"] = r.object_ids;
    j["provenance"] = to_string(r.provenance);
    if (r.scores) j["scores"] = to_json(*r.scores);
    return j;
}

QARecord qa_from_json(const Json& j) {
    QARecord r;
    r.id = j.at("id").get<std::string>();
    r.scene_id.value = j.at("scene_id").get<std::string>();
    r.question = j.at("question").get<std::string>();
    r.answers = j.at("answers").get<std::vector<std::string>>();
    if (j.contains("object_ids"))
        r.object_ids = j.at("object_ids").get<std::vector<int>>();
    if (j.contains("provenance"))
        r.provenance =
            provenance_from_string(j.at("provenance").get<std::string>());
    if (j.contains("scores") && !j.at("scores").is_null())
        r.scores = scores_from_json(j.at("scores"));
    return r;
}

Json to_json(const CaptionRecord& r) {
    Json j;
    j["id"] = r.id;
    j["scene_id"] = r.scene_id.value;
    j["object_id"] = r.object_id;
    j["object_name"] = r.object_name;
    j["description"] = r.description;
    if (r.box) j["box"] = to_json(*r.box);
    return j;
}

CaptionRecord caption_from_json(const Json& j) {
    CaptionRecord r;
    r.id = j.at("id").get<std::string>();
    r.scene_id.value = j.at("scene_id").get<std::string>();
    r.object_id = j.at("object_id").get<int>();
    if (j.contains("object_name"))
        r.object_name = j.at("object_name").get<std::string>();
    r.description = j.at("description").get<std::string>();
    if (j.contains("box") && !j.at("box").is_null())
        r.box = box3d_from_json(j.at("box"));
    return r;
}

Json to_json(const ThresholdSet& t) {
    Json j;
    j["tau_qa"] = t.tau_qa;
    j["tau_cap"] = t.tau_cap;
    j["mu"] = t.mu;
    j["sigma"] = t.sigma;
    j["source"] = t.source == ThresholdSet::Source::calibrated
                      ? "calibrated"
                      : "paper_default";
    return j;
}

ThresholdSet thresholds_from_json(const Json& j) {
    ThresholdSet t;
    t.tau_qa = j.at("tau_qa").get<double>();
    t.tau_cap = j.at("tau_cap").get<double>();
    if (j.contains("mu"))
        t.mu = j.at("mu").get<std::map<std::string, double>>();
    if (j.contains("sigma"))
        t.sigma = j.at("sigma").get<std::map<std::string, double>>();
    if (j.contains("source"))
        t.source = j.at("source").get<std::string>() == "calibrated"
                       ? ThresholdSet::Source::calibrated
                       : ThresholdSet::Source::paper_default;
    return t;
}

Json to_json(const DatasetManifest& m) {
    Json j;
    j["source_counts"] = m.source_counts;
    j["total"] = m.total;
    j["seed"] = m.seed;
    j["threshold_set"] = to_json(m.threshold_set);
    j["created_at"] = m.created_at;
    return j;
}

DatasetManifest manifest_from_json(const Json& j) {
    DatasetManifest m;
    m.source_counts =
        j.at("source_counts").get<std::map<std::string, std::size_t>>();
    m.total = j.at("total").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.threshold_set = thresholds_from_json(j.at("threshold_set"));
    m.created_at = j.at("created_at").get<std::string>();
    return m;
}

}  // namespace sdf
