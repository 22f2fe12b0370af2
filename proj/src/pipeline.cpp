#include "sdf/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <thread>

#include "sdf/errors.hpp"
#include "sdf/rng.hpp"
#include "sdf/text.hpp"

namespace fs = std::filesystem;

namespace sdf {

const char* to_string(QuestionCategory c) {
    switch (c) {
        case QuestionCategory::local_object: return "local_object";
        case QuestionCategory::global_context: return "global_context";
        case QuestionCategory::relational: return "relational";
        case QuestionCategory::direction_position: return "direction_position";
        case QuestionCategory::other: return "other";
    }
    return "other";
}

QuestionCategory classify_question(const std::string& question) {
    const std::string q =
        text::lowercase(text::normalize_nfc(text::trim(question)));
    auto starts = [&](const char* prefix) { return q.starts_with(prefix); };
    auto contains = [&](const char* s) {
        return q.find(s) != std::string::npos;
    };
    if (starts("what color") || starts("what type") || starts("what kind"))
        return QuestionCategory::local_object;
    if (starts("how many") || contains("are there more"))
        return QuestionCategory::global_context;
    if (contains("right of") || contains("left of") || contains("middle") ||
        contains("next to"))
        return QuestionCategory::relational;
    if (starts("where") || contains("which way"))
        return QuestionCategory::direction_position;
    return QuestionCategory::other;
}

Json StatsReport::to_json() const {
    Json j;
    j["question_type_histogram"] = question_type_histogram;
    Json top = Json::array();
    for (const auto& [answer, count] : top_answers)
        top.push_back(Json{{"answer", answer}, {"count", count}});
    j["top_answers"] = top;
    j["totals_per_provenance"] = totals_per_provenance;
    return j;
}

StatsReport stats(const std::vector<QARecord>& records) {
    StatsReport report;
    for (QuestionCategory c :
         {QuestionCategory::local_object, QuestionCategory::global_context,
          QuestionCategory::relational, QuestionCategory::direction_position,
          QuestionCategory::other})
        report.question_type_histogram[to_string(c)] = 0;

    std::map<std::string, std::size_t> answer_counts;
    for (const auto& r : records) {
        ++report.question_type_histogram[to_string(
            classify_question(r.question))];
        ++report.totals_per_provenance[to_string(r.provenance)];
        ++answer_counts[text::lowercase(text::trim(r.answers.front()))];
    }

    std::vector<std::pair<std::string, std::size_t>> ranked(
        answer_counts.begin(), answer_counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > 20) ranked.resize(20);
    report.top_answers = std::move(ranked);
    return report;
}

PipelineConfig PipelineConfig::from_json(const Json& j) {
    PipelineConfig c;
    auto get = [&](const char* key, auto& target) {
        if (j.contains(key)) target = j.at(key).get<std::decay_t<decltype(target)>>();
    };
    get("qa_path", c.qa_path);
    get("captions_path", c.captions_path);
    get("out_dir", c.out_dir);
    get("work_dir", c.work_dir);
    get("strict", c.strict);
    get("seed", c.seed);
    get("workers", c.workers);
    get("enable_qa_gen", c.enable_qa_gen);
    get("enable_caption_gen", c.enable_caption_gen);
    get("enable_scene_gen", c.enable_scene_gen);
    get("qa_gen_target", c.qa_gen_target);
    get("caption_gen_target", c.caption_gen_target);
    get("scene_gen_target", c.scene_gen_target);
    get("max_subs", c.max_subs);
    get("qa_per_caption", c.qa_per_caption);
    get("qa_per_scene", c.qa_per_scene);
    get("calibrate", c.calibrate);
    get("keep_at_or_above", c.keep_at_or_above);
    get("theta_dup", c.theta_dup);
    if (j.contains("min_rel")) c.min_rel = j.at("min_rel").get<double>();
    get("thesaurus_path", c.thesaurus_path);
    get("antonyms_path", c.antonyms_path);
    get("templates_path", c.templates_path);
    get("relevance_weights_path", c.relevance_weights_path);
    get("colors_path", c.colors_path);
    get("relations_path", c.relations_path);
    get("backend", c.backend);
    get("embed_dimension", c.embed_dimension);
    get("hash_seed", c.hash_seed);
    get("created_at", c.created_at);
    if (j.contains("thresholds"))
        c.thresholds = thresholds_from_json(j.at("thresholds"));
    if (j.contains("embed_endpoint"))
        c.embed_endpoint = EndpointConfig::from_json(j.at("embed_endpoint"));
    if (j.contains("nli_endpoint"))
        c.nli_endpoint = EndpointConfig::from_json(j.at("nli_endpoint"));
    if (j.contains("gen_endpoint"))
        c.gen_endpoint = EndpointConfig::from_json(j.at("gen_endpoint"));
    return c;
}

PipelineConfig PipelineConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);
    try {
        return from_json(Json::parse(in));
    } catch (const Json::exception& e) {
        throw ConfigInvalidError(path + ": " + e.what());
    }
}

void PipelineConfig::apply_env_overrides() {
    if (const char* v = std::getenv("SDF_EMBED_URL")) embed_endpoint.url = v;
    if (const char* v = std::getenv("SDF_NLI_URL")) nli_endpoint.url = v;
    if (const char* v = std::getenv("SDF_GEN_URL")) gen_endpoint.url = v;
    if (const char* v = std::getenv("SDF_BEARER_TOKEN")) {
        embed_endpoint.bearer_token = v;
        nli_endpoint.bearer_token = v;
        gen_endpoint.bearer_token = v;
    }
}

void PipelineConfig::validate() const {
    if (!enable_qa_gen && !enable_caption_gen && !enable_scene_gen)
        throw ConfigInvalidError("at least one augmentation family must be "
                                 "enabled");
    if (qa_path.empty()) throw ConfigInvalidError("qa_path is required");
    if (enable_caption_gen && captions_path.empty())
        throw ConfigInvalidError(
            "captions_path is required when caption generation is enabled");
    if (theta_dup <= 0.0 || theta_dup > 1.0)
        throw ConfigInvalidError("theta_dup must be in (0,1]");
    if (max_subs < 1) throw ConfigInvalidError("max_subs must be >= 1");
    if (qa_per_caption < 1 || qa_per_scene < 1)
        throw ConfigInvalidError("per-record generation counts must be >= 1");
    if (workers < 1) throw ConfigInvalidError("workers must be >= 1");
    if (backend != "reference" && backend != "http")
        throw ConfigInvalidError("backend must be reference or http");
    if (backend == "http" &&
        (embed_endpoint.url.empty() || nli_endpoint.url.empty()))
        throw ConfigInvalidError("http backend needs embed and nli URLs");
}

BackendSet make_backends(const PipelineConfig& config) {
    BackendSet set;
    if (config.backend == "http") {
        set.embedder = std::make_shared<HttpEmbedder>(config.embed_endpoint,
                                                      config.embed_dimension);
        set.nli = std::make_shared<HttpNli>(config.nli_endpoint);
        if (!config.gen_endpoint.url.empty())
            set.generator =
                std::make_shared<HttpGenerator>(config.gen_endpoint);
        else
            set.generator = std::make_shared<ReferenceGenerator>();
    } else {
        set.embedder = std::make_shared<ReferenceEmbedder>(
            config.embed_dimension, config.hash_seed);
        set.nli = std::make_shared<ReferenceNli>();
        set.generator = std::make_shared<ReferenceGenerator>();
    }
    return set;
}

namespace {

struct Resources {
    Thesaurus thesaurus;
    Thesaurus antonyms;
    std::vector<QATemplate> templates;
    CaptionLexicons lexicons;
    std::optional<RelevanceWeights> relevance_weights;
};

Thesaurus builtin_thesaurus() {
    return Thesaurus::from_json(Json{
        {"big", {"large", "huge"}},      {"large", {"big"}},
        {"small", {"little", "tiny"}},   {"little", {"small"}},
        {"couch", {"sofa"}},             {"sofa", {"couch"}},
        {"picture", {"photo", "image"}}, {"trash", {"garbage"}},
        {"color", {"colour"}},           {"near", {"close to"}},
        {"shape", {"form"}},             {"kind", {"sort"}},
    });
}

Thesaurus builtin_antonyms() {
    return Thesaurus::from_json(Json{
        {"open", {"closed"}},   {"closed", {"open"}},
        {"left", {"right"}},    {"right", {"left"}},
        {"on", {"off"}},        {"off", {"on"}},
        {"above", {"below"}},   {"below", {"above"}},
        {"big", {"small"}},     {"small", {"big"}},
        {"near", {"far"}},      {"far", {"near"}},
        {"dark", {"light"}},    {"light", {"dark"}},
        {"empty", {"full"}},    {"full", {"empty"}},
        {"behind", {"in front of"}},
    });
}

std::vector<QATemplate> builtin_templates() {
    std::vector<QATemplate> t;
    auto add = [&](const char* id, TemplateCategory cat, const char* q,
                   AnswerSlot slot) {
        t.push_back({id, cat, q, slot});
    };
    add("color-0", TemplateCategory::color, "what color is the {object}?",
        AnswerSlot::color);
    add("count-0", TemplateCategory::count,
        "how many {object}s are there?", AnswerSlot::count);
    add("type-0", TemplateCategory::type,
        "what type of thing is near the {anchor}?", AnswerSlot::object);
    add("spatial-0", TemplateCategory::spatial,
        "what is {relation} the {anchor}?", AnswerSlot::object);
    add("location-0", TemplateCategory::location,
        "where is the {object}?", AnswerSlot::location_phrase);
    return t;
}

Resources load_resources(const PipelineConfig& config) {
    Resources res;
    res.thesaurus = config.thesaurus_path.empty()
                        ? builtin_thesaurus()
                        : Thesaurus::from_json_file(config.thesaurus_path);
    res.antonyms = config.antonyms_path.empty()
                       ? builtin_antonyms()
                       : Thesaurus::from_json_file(config.antonyms_path);
    res.templates = config.templates_path.empty()
                        ? builtin_templates()
                        : load_templates(config.templates_path);
    res.lexicons =
        (config.colors_path.empty() || config.relations_path.empty())
            ? CaptionLexicons::defaults()
            : CaptionLexicons::from_files(config.colors_path,
                                          config.relations_path);
    if (!config.relevance_weights_path.empty())
        res.relevance_weights =
            RelevanceWeights::from_json_file(config.relevance_weights_path);
    return res;
}

std::string resolve_created_at(const PipelineConfig& config) {
    if (!config.created_at.empty()) return config.created_at;
    std::time_t t = 0;
    if (const char* e = std::getenv("SOURCE_DATE_EPOCH"))
        t = static_cast<std::time_t>(std::strtoll(e, nullptr, 10));
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string scene_context(const SceneId& scene,
                          const std::vector<CaptionRecord>& captions,
                          const std::vector<QARecord>& originals) {
    std::string ctx = "scene " + scene.value + " contains";
    std::size_t added = 0;
    for (const auto& c : captions) {
        if (!(c.scene_id == scene)) continue;
        ctx += " " + (c.object_name.empty() ? c.description : c.object_name) +
               ";";
        if (++added >= 8) break;
    }
    if (added == 0) {
        for (const auto& q : originals) {
            if (!(q.scene_id == scene)) continue;
            ctx += " " + q.answers.front() + ";";
            if (++added >= 8) break;
        }
    }
    return ctx;
}

}  // namespace

AugmentOutput augment_stage(const PipelineConfig& config,
                            const std::vector<QARecord>& originals,
                            const std::vector<CaptionRecord>& captions,
                            const BackendSet& backends) {
    const Resources res = load_resources(config);
    AugmentOutput out;

    if (config.enable_qa_gen) {
        for (const auto& orig : originals) {
            if (out.qa_gen.size() >= config.qa_gen_target) break;
            auto variants = synonym_replace(orig, res.thesaurus, config.seed,
                                            config.max_subs);
            if (auto rev = logical_reverse(orig, res.antonyms))
                variants.push_back(std::move(*rev));
            if (auto shuf = order_shuffle(orig, config.seed))
                variants.push_back(std::move(*shuf));
            for (auto& v : variants) {
                if (out.qa_gen.size() >= config.qa_gen_target) break;
                out.qa_gen.push_back(std::move(v));
            }
        }
    }

    if (config.enable_caption_gen) {
        for (const auto& caption : captions) {
            if (out.caption_gen.size() >= config.caption_gen_target) break;
            const CaptionFacts facts = parse_caption(caption, res.lexicons);
            auto generated = caption_to_qa(caption, res.templates, facts);
            if (static_cast<int>(generated.size()) > config.qa_per_caption)
                generated.resize(config.qa_per_caption);
            for (auto& g : generated) {
                if (out.caption_gen.size() >= config.caption_gen_target)
                    break;
                out.caption_groups[caption.id].push_back(
                    out.caption_gen.size());
                out.caption_gen.push_back(std::move(g));
            }
        }
    }

    if (config.enable_scene_gen) {
        // unique scenes in first-seen order
        std::vector<SceneId> scenes;
        std::unordered_set<std::string> seen;
        for (const auto& q : originals)
            if (seen.insert(q.scene_id.value).second)
                scenes.push_back(q.scene_id);
        for (const auto& c : captions)
            if (seen.insert(c.scene_id.value).second)
                scenes.push_back(c.scene_id);
        for (const auto& scene : scenes) {
            if (out.scene_gen.size() >= config.scene_gen_target) break;
            auto result =
                scene_to_qa(scene, scene_context(scene, captions, originals),
                            *backends.generator, config.qa_per_scene);
            out.dropped += result.dropped;
            for (auto& r : result.records) {
                if (out.scene_gen.size() >= config.scene_gen_target) break;
                out.scene_gen.push_back(std::move(r));
            }
        }
    }
    return out;
}

namespace {

// s_q for each generated question: max cosine against the original pool of
// the same scene ("semantic search"), full pool when the scene is unseen.
void score_semantic_search(const PipelineConfig& config,
                           const std::vector<QARecord>& originals,
                           std::vector<QARecord>& generated,
                           const EmbeddingBackend& embedder) {
    if (generated.empty()) return;
    std::vector<std::string> orig_texts;
    std::map<std::string, std::vector<std::size_t>> by_scene;
    for (std::size_t i = 0; i < originals.size(); ++i) {
        orig_texts.push_back(originals[i].question);
        by_scene[originals[i].scene_id.value].push_back(i);
    }
    const auto orig_vecs = embedder.embed_batch(orig_texts);

    std::vector<std::string> gen_texts;
    for (const auto& g : generated) gen_texts.push_back(g.question);
    const auto gen_vecs = embedder.embed_batch(gen_texts);

    auto score_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto it = by_scene.find(generated[i].scene_id.value);
            double best = 0.0;
            if (it != by_scene.end()) {
                for (std::size_t j : it->second)
                    best = std::max(best, cosine(gen_vecs[i], orig_vecs[j]));
            } else {
                for (const auto& v : orig_vecs)
                    best = std::max(best, cosine(gen_vecs[i], v));
            }
            if (!generated[i].scores) generated[i].scores = QualityScores{};
            generated[i].scores->s_q = best;
        }
    };

    const std::size_t n = generated.size();
    const int workers = std::min<int>(config.workers, static_cast<int>(n));
    if (workers <= 1) {
        score_range(0, n);
    } else {
        std::vector<std::thread> threads;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::size_t b = w * chunk;
            const std::size_t e = std::min(n, b + chunk);
            if (b < e) threads.emplace_back(score_range, b, e);
        }
        for (auto& t : threads) t.join();
    }
}

}  // namespace

void score_stage(const PipelineConfig& config,
                 const std::vector<QARecord>& originals,
                 const std::vector<CaptionRecord>& captions,
                 AugmentOutput& augmented, const BackendSet& backends) {
    score_semantic_search(config, originals, augmented.qa_gen,
                          *backends.embedder);
    score_semantic_search(config, originals, augmented.scene_gen,
                          *backends.embedder);

    std::map<std::string, const CaptionRecord*> caption_by_id;
    for (const auto& c : captions) caption_by_id[c.id] = &c;
    for (const auto& [caption_id, indices] : augmented.caption_groups) {
        auto it = caption_by_id.find(caption_id);
        if (it == caption_by_id.end() || indices.empty()) continue;
        std::vector<QARecord> group;
        for (std::size_t i : indices) group.push_back(augmented.caption_gen[i]);
        const double s_cap =
            caption_consistency(*it->second, group, *backends.nli);
        for (std::size_t i : indices) {
            auto& r = augmented.caption_gen[i];
            if (!r.scores) r.scores = QualityScores{};
            r.scores->s_cap = s_cap;
        }
    }

    const Resources res = load_resources(config);
    if (res.relevance_weights) {
        auto apply_rel = [&](std::vector<QARecord>& records) {
            for (auto& r : records) {
                if (!r.scores) r.scores = QualityScores{};
                r.scores->rel =
                    relevance(r.answers.front(), r.question,
                              *res.relevance_weights, *backends.embedder);
            }
        };
        apply_rel(augmented.qa_gen);
        apply_rel(augmented.caption_gen);
        apply_rel(augmented.scene_gen);
    }
}

namespace {

void write_rejected(std::ofstream& out, const QARecord& r,
                    const std::string& reason) {
    Json j = to_json(r);
    j["reason"] = reason;
    out << j.dump() << '\n';
}

std::string config_fingerprint(const PipelineConfig& config,
                               const BackendSet& backends) {
    std::string s = config.qa_path + "|" + config.captions_path + "|" +
                    std::to_string(config.seed) + "|" + config.backend + "|" +
                    backends.embedder->version() + "|" +
                    backends.nli->version() + "|" +
                    backends.generator->version() + "|" +
                    std::to_string(config.qa_gen_target) + "|" +
                    std::to_string(config.caption_gen_target) + "|" +
                    std::to_string(config.scene_gen_target);
    return std::to_string(fnv1a(s));
}

}  // namespace

void save_augment_output(const std::string& work_dir,
                         const AugmentOutput& out) {
    write_qa_jsonl(out.qa_gen, work_dir + "/augment_qa_gen.jsonl");
    write_qa_jsonl(out.caption_gen, work_dir + "/augment_caption_gen.jsonl");
    write_qa_jsonl(out.scene_gen, work_dir + "/augment_scene_gen.jsonl");
    Json meta;
    meta["caption_groups"] = out.caption_groups;
    meta["dropped"] = out.dropped;
    std::ofstream f(work_dir + "/augment_meta.json");
    f << meta.dump(2) << '\n';
}

bool load_augment_output(const std::string& work_dir, AugmentOutput& out) {
    const std::string meta_path = work_dir + "/augment_meta.json";
    if (!fs::exists(meta_path)) return false;
    try {
        out.qa_gen = load_qa(work_dir + "/augment_qa_gen.jsonl", false);
        out.caption_gen =
            load_qa(work_dir + "/augment_caption_gen.jsonl", false);
        out.scene_gen = load_qa(work_dir + "/augment_scene_gen.jsonl", false);
        std::ifstream f(meta_path);
        const Json meta = Json::parse(f);
        out.caption_groups =
            meta.at("caption_groups")
                .get<std::map<std::string, std::vector<std::size_t>>>();
        out.dropped = meta.at("dropped").get<std::size_t>();
        return true;
    } catch (const std::exception&) {
        return false;  // partial checkpoint; recompute
    }
}

PipelineResult run(const PipelineConfig& config, const BackendSet* backends) {
    config.validate();
    BackendSet local;
    if (!backends) {
        local = make_backends(config);
        backends = &local;
    }

    const std::string work_dir =
        config.work_dir.empty() ? config.out_dir + "/work" : config.work_dir;
    fs::create_directories(config.out_dir);
    fs::create_directories(work_dir);

    // invalidate checkpoints from a different config or backend version
    const std::string fingerprint = config_fingerprint(config, *backends);
    const std::string fp_path = work_dir + "/fingerprint";
    {
        std::string previous;
        if (std::ifstream f(fp_path); f) std::getline(f, previous);
        if (previous != fingerprint) {
            for (const auto& entry : fs::directory_iterator(work_dir))
                fs::remove_all(entry.path());
            std::ofstream f(fp_path);
            f << fingerprint << '\n';
        }
    }

    // ingest
    LoadStats qa_stats;
    const auto originals = load_qa(config.qa_path, config.strict, &qa_stats);
    std::vector<CaptionRecord> captions;
    if (!config.captions_path.empty())
        captions = load_captions(config.captions_path, config.strict);

    // augment (checkpointed; the scene family may hit a remote backend)
    AugmentOutput augmented;
    if (!load_augment_output(work_dir, augmented)) {
        augmented = augment_stage(config, originals, captions, *backends);
        save_augment_output(work_dir, augmented);
    }

    // score (checkpointed; embed/NLI backends)
    {
        AugmentOutput scored;
        const std::string scored_dir = work_dir + "/scored";
        fs::create_directories(scored_dir);
        if (load_augment_output(scored_dir, scored)) {
            augmented = std::move(scored);
        } else {
            score_stage(config, originals, captions, augmented, *backends);
            save_augment_output(scored_dir, augmented);
        }
    }

    PipelineResult result;
    result.generated = augmented.qa_gen.size() + augmented.caption_gen.size() +
                       augmented.scene_gen.size();
    result.dropped_candidates = augmented.dropped;

    std::ofstream rejected_out(config.out_dir + "/rejected.jsonl",
                               std::ios::binary);
    if (!rejected_out)
        throw IoError("cannot write " + config.out_dir + "/rejected.jsonl");

    // optional relevance floor
    auto apply_min_rel = [&](std::vector<QARecord>& records) {
        if (!config.min_rel) return;
        std::vector<QARecord> kept;
        for (auto& r : records) {
            if (r.scores && r.scores->rel && *r.scores->rel < *config.min_rel) {
                write_rejected(rejected_out, r, "low_rel");
                ++result.rejected;
            } else {
                kept.push_back(std::move(r));
            }
        }
        records = std::move(kept);
    };
    apply_min_rel(augmented.qa_gen);
    apply_min_rel(augmented.caption_gen);
    apply_min_rel(augmented.scene_gen);

    // thresholds: fixed defaults unless calibration is requested
    ThresholdSet thresholds = config.thresholds;
    if (config.calibrate) {
        std::vector<double> qa_scores, cap_scores;
        for (const auto& r : augmented.qa_gen)
            if (r.scores && r.scores->s_q) qa_scores.push_back(*r.scores->s_q);
        for (const auto& r : augmented.scene_gen)
            if (r.scores && r.scores->s_q) qa_scores.push_back(*r.scores->s_q);
        for (const auto& r : augmented.caption_gen)
            if (r.scores && r.scores->s_cap)
                cap_scores.push_back(*r.scores->s_cap);
        if (qa_scores.size() >= 2)
            apply_calibration(thresholds, Task::qa,
                              calibrate_threshold(qa_scores));
        if (cap_scores.size() >= 2)
            apply_calibration(thresholds, Task::captioning,
                              calibrate_threshold(cap_scores));
    }

    // gate
    GateOptions gate_options{config.keep_at_or_above};
    auto run_gate = [&](std::vector<QARecord>& records, Task task) {
        auto gated = gate(records, thresholds, task, gate_options);
        for (const auto& r : gated.rejected) {
            write_rejected(rejected_out, r, "below_threshold");
            ++result.rejected;
        }
        records = std::move(gated.kept);
    };
    run_gate(augmented.qa_gen, Task::qa);
    run_gate(augmented.scene_gen, Task::qa);
    run_gate(augmented.caption_gen, Task::captioning);

    // dedup over all kept generated records, in family order
    std::vector<QARecord> generated;
    for (auto* family :
         {&augmented.qa_gen, &augmented.caption_gen, &augmented.scene_gen})
        for (auto& r : *family) generated.push_back(std::move(r));
    const auto deduped =
        semantic_dedup(generated, *backends->embedder, config.theta_dup);
    for (const auto& r : deduped.duplicates) {
        write_rejected(rejected_out, r, "duplicate");
        ++result.duplicates;
    }
    result.kept = deduped.unique.size();

    // compose and persist
    std::vector<Partition> partitions;
    partitions.push_back({Provenance::original, originals});
    for (Provenance prov : {Provenance::qa_gen, Provenance::caption_gen,
                            Provenance::scene_gen}) {
        Partition p{prov, {}};
        for (const auto& r : deduped.unique)
            if (r.provenance == prov) p.second.push_back(r);
        partitions.push_back(std::move(p));
    }
    auto [records, manifest] = compose_final(partitions);
    manifest.seed = config.seed;
    manifest.threshold_set = thresholds;
    manifest.created_at = resolve_created_at(config);
    write_dataset(records, manifest, config.out_dir);

    const StatsReport report = stats(records);
    {
        std::ofstream f(config.out_dir + "/stats.json", std::ios::binary);
        if (!f) throw IoError("cannot write stats.json");
        f << report.to_json().dump(2) << '\n';
    }

    result.manifest = std::move(manifest);
    return result;
}

}  // namespace sdf
