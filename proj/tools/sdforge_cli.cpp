// Dataset forge CLI: ingest -> augment -> score -> gate -> dedup ->
// compose -> stats, plus the standalone metric evaluator.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "sdf/augment.hpp"
#include "sdf/corpus_io.hpp"
#include "sdf/errors.hpp"
#include "sdf/metrics.hpp"
#include "sdf/pipeline.hpp"
#include "sdf/quality.hpp"
#include "sdf/text.hpp"

namespace fs = std::filesystem;
using sdf::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBackend = 3;
constexpr int kExitData = 4;

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    bool strict = false;
    std::string backend;
};

sdf::PipelineConfig load_config(const GlobalOpts& opts) {
    sdf::PipelineConfig config;
    if (!opts.config_path.empty())
        config = sdf::PipelineConfig::from_json_file(opts.config_path);
    if (opts.seed) config.seed = *opts.seed;
    if (opts.workers) config.workers = *opts.workers;
    if (opts.strict) config.strict = true;
    if (!opts.backend.empty()) config.backend = opts.backend;
    config.apply_env_overrides();
    return config;
}

sdf::metrics::Candidate parse_prediction(const Json& j) {
    sdf::metrics::Candidate c;
    c.id = j.at("id").get<std::string>();
    c.tokens = sdf::text::tokenize(j.at("text").get<std::string>());
    if (j.contains("box") && !j.at("box").is_null())
        c.box = sdf::box3d_from_json(j.at("box"));
    return c;
}

sdf::metrics::ReferenceSet parse_reference(const Json& j) {
    sdf::metrics::ReferenceSet r;
    r.id = j.at("id").get<std::string>();
    for (const auto& t : j.at("texts"))
        r.references.push_back(sdf::text::tokenize(t.get<std::string>()));
    if (j.contains("box") && !j.at("box").is_null())
        r.box = sdf::box3d_from_json(j.at("box"));
    return r;
}

template <typename T, typename Parse>
std::vector<T> read_jsonl(const std::string& path, Parse parse) {
    std::ifstream in(path);
    if (!in) throw sdf::FileNotFoundError(path);
    std::vector<T> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (sdf::text::trim(line).empty()) continue;
        try {
            out.push_back(parse(Json::parse(line)));
        } catch (const Json::exception& e) {
            throw sdf::MalformedRecordError(lineno, e.what());
        }
    }
    return out;
}

int dispatch(const std::function<int()>& body) {
    try {
        return body();
    } catch (const sdf::ConfigInvalidError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const sdf::BackendUnavailableError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const sdf::BackendProtocolError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const sdf::Error& e) {
        std::cerr << "data error [" << e.kind() << "]: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"3D-language dataset forge"};
    app.require_subcommand(1);

    GlobalOpts opts;
    app.add_option("--config", opts.config_path, "pipeline config JSON file");
    app.add_option("--seed", opts.seed, "override the pipeline seed");
    app.add_option("--workers", opts.workers, "worker thread count");
    app.add_flag("--strict", opts.strict, "strict ingest validation");
    app.add_option("--backend", opts.backend, "reference|http")
        ->check(CLI::IsMember({"reference", "http"}));

    // ingest
    auto* ingest = app.add_subcommand("ingest", "validate and count corpora");
    std::string ingest_qa, ingest_captions;
    ingest->add_option("--qa", ingest_qa, "QA jsonl path");
    ingest->add_option("--captions", ingest_captions, "caption jsonl path");
    ingest->callback([&] {
        std::exit(dispatch([&] {
            auto config = load_config(opts);
            if (!ingest_qa.empty()) config.qa_path = ingest_qa;
            if (!ingest_captions.empty()) config.captions_path = ingest_captions;
            if (!config.qa_path.empty()) {
                sdf::LoadStats s;
                auto records = sdf::load_qa(config.qa_path, config.strict, &s);
                std::cout << "qa: " << records.size() << " loaded, "
                          << s.skipped << " skipped\n";
            }
            if (!config.captions_path.empty()) {
                sdf::LoadStats s;
                auto records =
                    sdf::load_captions(config.captions_path, config.strict, &s);
                std::cout << "captions: " << records.size() << " loaded, "
                          << s.skipped << " skipped\n";
            }
            return kExitOk;
        }));
    });

    // augment
    auto* augment = app.add_subcommand("augment",
                                       "generate augmentation candidates");
    std::string augment_out = "augmented";
    augment->add_option("--out", augment_out, "output directory");
    augment->callback([&] {
        std::exit(dispatch([&] {
            auto config = load_config(opts);
            config.validate();
            auto backends = sdf::make_backends(config);
            auto originals = sdf::load_qa(config.qa_path, config.strict);
            std::vector<sdf::CaptionRecord> captions;
            if (!config.captions_path.empty())
                captions =
                    sdf::load_captions(config.captions_path, config.strict);
            auto out =
                sdf::augment_stage(config, originals, captions, backends);
            fs::create_directories(augment_out);
            sdf::save_augment_output(augment_out, out);
            std::cout << "qa_gen: " << out.qa_gen.size()
                      << "\ncaption_gen: " << out.caption_gen.size()
                      << "\nscene_gen: " << out.scene_gen.size()
                      << "\ndropped: " << out.dropped << "\n";
            return kExitOk;
        }));
    });

    // score
    auto* score = app.add_subcommand("score", "attach quality scores");
    std::string score_in = "augmented", score_out = "scored";
    score->add_option("--in", score_in, "augment output directory");
    score->add_option("--out", score_out, "scored output directory");
    score->callback([&] {
        std::exit(dispatch([&] {
            auto config = load_config(opts);
            config.validate();
            auto backends = sdf::make_backends(config);
            auto originals = sdf::load_qa(config.qa_path, config.strict);
            std::vector<sdf::CaptionRecord> captions;
            if (!config.captions_path.empty())
                captions =
                    sdf::load_captions(config.captions_path, config.strict);
            sdf::AugmentOutput augmented;
            if (!sdf::load_augment_output(score_in, augmented))
                throw sdf::IoError("no augment output in " + score_in);
            sdf::score_stage(config, originals, captions, augmented, backends);
            fs::create_directories(score_out);
            sdf::save_augment_output(score_out, augmented);
            std::cout << "scored "
                      << augmented.qa_gen.size() +
                             augmented.caption_gen.size() +
                             augmented.scene_gen.size()
                      << " records\n";
            return kExitOk;
        }));
    });

    // gate
    auto* gate_cmd = app.add_subcommand("gate", "apply quality thresholds");
    std::string gate_in, gate_kept = "kept.jsonl",
                gate_rejected = "rejected.jsonl", gate_task = "qa";
    gate_cmd->add_option("--in", gate_in, "scored records jsonl")->required();
    gate_cmd->add_option("--kept", gate_kept, "kept output jsonl");
    gate_cmd->add_option("--rejected", gate_rejected, "rejected output jsonl");
    gate_cmd->add_option("--task", gate_task, "qa|cap")
        ->check(CLI::IsMember({"qa", "cap"}));
    gate_cmd->callback([&] {
        std::exit(dispatch([&] {
            auto config = load_config(opts);
            auto records = sdf::load_qa(gate_in, false);
            const auto task =
                gate_task == "qa" ? sdf::Task::qa : sdf::Task::captioning;
            auto result = sdf::gate(records, config.thresholds, task,
                                    {config.keep_at_or_above});
            sdf::write_qa_jsonl(result.kept, gate_kept);
            sdf::write_qa_jsonl(result.rejected, gate_rejected);
            std::cout << "kept " << result.kept.size() << ", rejected "
                      << result.rejected.size() << " (tau="
                      << sdf::task_tau(config.thresholds, task) << ")\n";
            return kExitOk;
        }));
    });

    // dedup
    auto* dedup_cmd = app.add_subcommand("dedup", "semantic deduplication");
    std::string dedup_in, dedup_out = "unique.jsonl",
                dedup_dups = "duplicates.jsonl";
    dedup_cmd->add_option("--in", dedup_in, "records jsonl")->required();
    dedup_cmd->add_option("--out", dedup_out, "unique output jsonl");
    dedup_cmd->add_option("--duplicates", dedup_dups, "duplicate output jsonl");
    dedup_cmd->callback([&] {
        std::exit(dispatch([&] {
            auto config = load_config(opts);
            auto backends = sdf::make_backends(config);
            auto records = sdf::load_qa(dedup_in, false);
            auto result = sdf::semantic_dedup(records, *backends.embedder,
                                              config.theta_dup);
            sdf::write_qa_jsonl(result.unique, dedup_out);
            sdf::write_qa_jsonl(result.duplicates, dedup_dups);
            std::cout << "unique " << result.unique.size() << ", duplicates "
                      << result.duplicates.size() << "\n";
            return kExitOk;
        }));
    });

    // compose
    auto* compose = app.add_subcommand("compose",
                                       "merge partitions into a dataset");
    std::vector<std::string> compose_parts;
    std::string compose_out = "out";
    compose->add_option("--partition", compose_parts,
                        "provenance=path, repeatable")
        ->required();
    compose->add_option("--out", compose_out, "output directory");
    compose->callback([&] {
        std::exit(dispatch([&] {
            auto config = load_config(opts);
            std::vector<sdf::Partition> partitions;
            for (const auto& spec : compose_parts) {
                const auto eq = spec.find('=');
                if (eq == std::string::npos)
                    throw sdf::ConfigInvalidError(
                        "--partition needs provenance=path: " + spec);
                partitions.push_back(
                    {sdf::provenance_from_string(spec.substr(0, eq)),
                     sdf::load_qa(spec.substr(eq + 1), false)});
            }
            auto [records, manifest] = sdf::compose_final(partitions);
            manifest.seed = config.seed;
            manifest.threshold_set = config.thresholds;
            sdf::write_dataset(records, manifest, compose_out);
            std::cout << "total " << manifest.total << "\n";
            return kExitOk;
        }));
    });

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "dataset statistics report");
    std::string stats_in, stats_out;
    stats_cmd->add_option("--in", stats_in, "dataset jsonl")->required();
    stats_cmd->add_option("--out", stats_out, "stats JSON output path");
    stats_cmd->callback([&] {
        std::exit(dispatch([&] {
            auto records = sdf::load_qa(stats_in, false);
            const auto report = sdf::stats(records);
            const std::string dump = report.to_json().dump(2);
            if (stats_out.empty()) {
                std::cout << dump << "\n";
            } else {
                std::ofstream f(stats_out, std::ios::binary);
                if (!f) throw sdf::IoError("cannot write " + stats_out);
                f << dump << "\n";
            }
            return kExitOk;
        }));
    });

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "run the metric suite");
    std::string eval_preds, eval_refs, eval_out = "metrics.json";
    double eval_iou = 0.5;
    evaluate->add_option("--predictions", eval_preds, "predictions.jsonl")
        ->required();
    evaluate->add_option("--references", eval_refs, "references.jsonl")
        ->required();
    evaluate->add_option("--out", eval_out, "metrics JSON output");
    evaluate->add_option("--iou", eval_iou, "IoU gate threshold");
    evaluate->callback([&] {
        std::exit(dispatch([&] {
            auto cands = read_jsonl<sdf::metrics::Candidate>(
                eval_preds, parse_prediction);
            auto refs = read_jsonl<sdf::metrics::ReferenceSet>(
                eval_refs, parse_reference);
            const auto report =
                sdf::metrics::evaluate_corpus(cands, refs, eval_iou);
            std::ofstream f(eval_out, std::ios::binary);
            if (!f) throw sdf::IoError("cannot write " + eval_out);
            f << sdf::metrics::report_to_json(report).dump(2) << "\n";
            std::cout << "wrote " << eval_out << "\n";
            return kExitOk;
        }));
    });

    // fit-relevance
    auto* fit = app.add_subcommand(
        "fit-relevance", "fit relevance weights by logistic regression");
    std::string fit_out = "relevance_weights.json";
    fit->add_option("--out", fit_out, "weights JSON output");
    fit->callback([&] {
        std::exit(dispatch([&] {
            auto config = load_config(opts);
            auto backends = sdf::make_backends(config);
            auto originals = sdf::load_qa(config.qa_path, config.strict);
            const auto weights = sdf::fit_relevance_weights(
                originals, *backends.embedder, config.seed);
            std::ofstream f(fit_out, std::ios::binary);
            if (!f) throw sdf::IoError("cannot write " + fit_out);
            f << weights.to_json().dump(2) << "\n";
            std::cout << "wrote " << fit_out << "\n";
            return kExitOk;
        }));
    });

    // run
    auto* run_cmd = app.add_subcommand("run", "full pipeline");
    run_cmd->callback([&] {
        std::exit(dispatch([&] {
            auto config = load_config(opts);
            const auto result = sdf::run(config);
            std::cout << "generated " << result.generated << ", kept "
                      << result.kept << ", rejected " << result.rejected
                      << ", duplicates " << result.duplicates << "\n"
                      << "dataset total " << result.manifest.total << " -> "
                      << config.out_dir << "\n";
            return kExitOk;
        }));
    });

    // global options may appear after the subcommand name
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    return kExitOk;
}
