#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sdf/backends.hpp"
#include "sdf/records.hpp"

namespace sdf {

// Synonym (or antonym) table: lowercase token -> alternatives. No token
// maps to itself.
struct Thesaurus {
    std::map<std::string, std::vector<std::string>> entries;

    static Thesaurus from_json_file(const std::string& path);
    static Thesaurus from_json(const Json& j);
    const std::vector<std::string>* lookup(const std::string& token) const;
};

enum class TemplateCategory { color, count, type, spatial, location };
enum class AnswerSlot { color, count, object, relation_target,
                        location_phrase };

TemplateCategory template_category_from_string(const std::string& s);
AnswerSlot answer_slot_from_string(const std::string& s);
const char* to_string(TemplateCategory c);

// One handcrafted question pattern with slots {object}, {anchor},
// {relation}.
struct QATemplate {
    std::string id;
    TemplateCategory category = TemplateCategory::color;
    std::string question_pattern;
    AnswerSlot answer_slot = AnswerSlot::color;
};

std::vector<QATemplate> load_templates(const std::string& path);

// Intermediate parse of a caption for template filling.
struct CaptionFacts {
    std::string object;
    std::vector<std::string> colors;
    std::optional<int> count;
    std::vector<std::pair<std::string, std::string>> relations;
    std::optional<std::string> location;
};

// Word lists driving the caption fact extractor.
struct CaptionLexicons {
    std::unordered_set<std::string> colors;
    std::vector<std::string> relations;  // multiword phrases allowed

    static CaptionLexicons defaults();
    static CaptionLexicons from_files(const std::string& colors_path,
                                      const std::string& relations_path);
};

// W_r and bias for rel(A,Q) = sigmoid(w . [f(A); f(Q)] + bias).
struct RelevanceWeights {
    Vector w;  // length 2d
    double bias = 0;

    static RelevanceWeights from_json_file(const std::string& path);
    Json to_json() const;
};

// Each variant replaces 1..max_subs distinct question tokens that have
// thesaurus entries and do not appear in any answer string. Seeded choice
// of positions and synonyms; empty result when nothing is replaceable.
std::vector<QARecord> synonym_replace(const QARecord& q,
                                      const Thesaurus& thesaurus,
                                      std::uint64_t seed, int max_subs);

// Applies only to polar pairs (answers exactly {"yes"} or {"no"}) whose
// question contains an antonym-mapped token: flips that token and the
// answer. Involution when the antonym table is symmetric.
std::optional<QARecord> logical_reverse(const QARecord& q,
                                        const Thesaurus& antonyms);

// Splits the question at top-level conjunctions/commas; emits a seeded
// non-identity permutation of the clauses with the WH head kept first.
std::optional<QARecord> order_shuffle(const QARecord& q, std::uint64_t seed);

// rel(A,Q) = sigmoid(w . [embed(a); embed(q)] + bias), in (0,1).
double relevance(const std::string& a, const std::string& q,
                 const RelevanceWeights& weights,
                 const EmbeddingBackend& embedder);

// Fits w, bias by logistic regression: original (answer, question) pairs
// as positives, mismatched pairs as negatives.
RelevanceWeights fit_relevance_weights(const std::vector<QARecord>& corpus,
                                       const EmbeddingBackend& embedder,
                                       std::uint64_t seed, int epochs = 50,
                                       double learning_rate = 0.5);

// Pattern extractor: head object, color adjectives, cardinal count,
// prepositional relations, trailing location phrase. Unparseable captions
// yield facts with the object only.
CaptionFacts parse_caption(const CaptionRecord& c,
                           const CaptionLexicons& lexicons);

// Fills every template whose slots are satisfiable from the facts.
// Emitted questions contain no unfilled {slot}; provenance=caption_gen.
std::vector<QARecord> caption_to_qa(const CaptionRecord& c,
                                    const std::vector<QATemplate>& templates,
                                    const CaptionFacts& facts);

struct SceneToQaResult {
    std::vector<QARecord> records;
    std::size_t dropped = 0;
};

// Adapter over the generator backend: one request per scene, up to k
// parsed pairs; malformed candidates are dropped and counted.
SceneToQaResult scene_to_qa(const SceneId& scene_id,
                            const std::string& context,
                            const GeneratorBackend& generator, int k);

}  // namespace sdf
