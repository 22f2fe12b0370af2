#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sdf/augment.hpp"
#include "sdf/backends.hpp"
#include "sdf/metrics.hpp"
#include "sdf/pipeline.hpp"
#include "sdf/quality.hpp"
#include "sdf/text.hpp"

namespace py = pybind11;
using namespace sdf;

namespace {

metrics::Candidate make_candidate(const std::string& id,
                                  const std::string& text,
                                  std::optional<Box3D> box) {
    return {id, text::tokenize(text), box};
}

metrics::ReferenceSet make_reference(const std::string& id,
                                     const std::vector<std::string>& texts,
                                     std::optional<Box3D> box) {
    metrics::ReferenceSet r{id, {}, box};
    for (const auto& t : texts) r.references.push_back(text::tokenize(t));
    return r;
}

}  // namespace

PYBIND11_MODULE(_sdforge, m) {
    m.doc() = "3D-language dataset forge: augmentation, quality gating, and "
              "captioning metrics.";

    py::class_<Box3D>(m, "Box3D")
        .def(py::init([](std::array<double, 3> center,
                         std::array<double, 3> dims) {
                 return Box3D{center, dims};
             }),
             py::arg("center"), py::arg("dims"))
        .def_readwrite("center", &Box3D::center)
        .def_readwrite("dims", &Box3D::dims);

    py::class_<QARecord>(m, "QARecord")
        .def(py::init([](std::string id, std::string scene_id,
                         std::string question,
                         std::vector<std::string> answers) {
                 QARecord r;
                 r.id = std::move(id);
                 r.scene_id.value = std::move(scene_id);
                 r.question = std::move(question);
                 r.answers = std::move(answers);
                 return r;
             }),
             py::arg("id"), py::arg("scene_id"), py::arg("question"),
             py::arg("answers"))
        .def_readwrite("id", &QARecord::id)
        .def_property(
            "scene_id",
            [](const QARecord& r) { return r.scene_id.value; },
            [](QARecord& r, std::string v) { r.scene_id.value = std::move(v); })
        .def_readwrite("question", &QARecord::question)
        .def_readwrite("answers", &QARecord::answers)
        .def_property_readonly("provenance", [](const QARecord& r) {
            return std::string(to_string(r.provenance));
        });

    m.def("tokenize", &text::tokenize, py::arg("text"),
          "Shared pipeline tokenizer (NFC, lowercase, punctuation kept).");
    m.def("stem", &text::stem, py::arg("token"));

    m.def("reference_embed", &reference_embed, py::arg("text"),
          py::arg("dimension") = 256, py::arg("hash_seed") = 0,
          "Deterministic hashed bag-of-words embedding, L2-normalized.");
    m.def("reference_nli", &reference_nli, py::arg("premise"),
          py::arg("hypothesis"));
    m.def("cosine", &cosine, py::arg("a"), py::arg("b"));

    m.def(
        "semantic_similarity",
        [](const std::string& orig, const std::string& gen,
           std::size_t dimension) {
            const ReferenceEmbedder embedder(dimension);
            return semantic_similarity(orig, gen, embedder);
        },
        py::arg("original"), py::arg("generated"), py::arg("dimension") = 256);

    m.def(
        "calibrate_threshold",
        [](const std::vector<double>& scores) {
            const auto r = calibrate_threshold(scores);
            return py::make_tuple(r.mu, r.sigma, r.tau);
        },
        py::arg("scores"), "Returns (mu, sigma, tau) with tau = mu + 1.96 "
                           "sigma.");

    m.def("iou3d", &metrics::iou3d, py::arg("a"), py::arg("b"));

    m.def(
        "bleu",
        [](const std::vector<std::string>& cands,
           const std::vector<std::vector<std::string>>& refs, int n) {
            std::vector<metrics::Candidate> c;
            std::vector<metrics::ReferenceSet> r;
            for (std::size_t i = 0; i < cands.size(); ++i) {
                const std::string id = std::to_string(i);
                c.push_back(make_candidate(id, cands[i], std::nullopt));
                r.push_back(make_reference(id, refs[i], std::nullopt));
            }
            return metrics::bleu(c, r, n);
        },
        py::arg("candidates"), py::arg("references"), py::arg("n") = 4);

    m.def(
        "evaluate",
        [](const std::vector<std::string>& cands,
           const std::vector<std::vector<std::string>>& refs) {
            std::vector<metrics::Candidate> c;
            std::vector<metrics::ReferenceSet> r;
            for (std::size_t i = 0; i < cands.size(); ++i) {
                const std::string id = std::to_string(i);
                c.push_back(make_candidate(id, cands[i], std::nullopt));
                r.push_back(make_reference(id, refs[i], std::nullopt));
            }
            const auto report =
                metrics::evaluate_corpus(c, r, std::nullopt);
            py::dict d;
            for (int n = 0; n < 4; ++n)
                d[("bleu_" + std::to_string(n + 1)).c_str()] = report.bleu[n];
            d["rouge_l"] = report.rouge_l;
            d["meteor"] = report.meteor;
            d["cider"] = report.cider;
            return d;
        },
        py::arg("candidates"), py::arg("references"),
        "Full ungated metric suite over aligned text corpora.");

    m.def("classify_question", [](const std::string& q) {
        return std::string(to_string(classify_question(q)));
    });

    m.def(
        "synonym_replace",
        [](const QARecord& q, const std::map<std::string,
                                             std::vector<std::string>>& entries,
           std::uint64_t seed, int max_subs) {
            Thesaurus t;
            t.entries = entries;
            return synonym_replace(q, t, seed, max_subs);
        },
        py::arg("record"), py::arg("thesaurus"), py::arg("seed") = 0,
        py::arg("max_subs") = 2);

    m.def(
        "run_pipeline",
        [](const std::string& config_path) {
            auto config = PipelineConfig::from_json_file(config_path);
            config.apply_env_overrides();
            const auto result = run(config);
            py::dict d;
            d["total"] = result.manifest.total;
            d["generated"] = result.generated;
            d["kept"] = result.kept;
            d["rejected"] = result.rejected;
            d["duplicates"] = result.duplicates;
            return d;
        },
        py::arg("config_path"), "Run the full pipeline from a config file.");
}
