#include "sdf/augment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "sdf/errors.hpp"
#include "sdf/rng.hpp"
#include "sdf/text.hpp"

namespace sdf {

namespace {

const std::unordered_set<std::string>& determiners() {
    static const std::unordered_set<std::string> d = {
        "a", "an", "the", "this", "that", "these", "those", "its", "his",
        "her", "their"};
    return d;
}

const std::unordered_set<std::string>& size_adjectives() {
    static const std::unordered_set<std::string> d = {
        "big",   "large", "small", "little", "tiny",   "huge",  "wooden",
        "metal", "plastic", "leather", "round", "square", "tall", "short",
        "long",  "new",   "old"};
    return d;
}

std::optional<int> parse_cardinal(const std::string& tok) {
    static const std::map<std::string, int> words = {
        {"one", 1}, {"two", 2},   {"three", 3}, {"four", 4}, {"five", 5},
        {"six", 6}, {"seven", 7}, {"eight", 8}, {"nine", 9}, {"ten", 10},
        {"eleven", 11}, {"twelve", 12}};
    auto it = words.find(tok);
    if (it != words.end()) return it->second;
    if (!tok.empty() &&
        std::all_of(tok.begin(), tok.end(),
                    [](unsigned char c) { return std::isdigit(c); })) {
        const int v = std::stoi(tok);
        if (v >= 1) return v;
    }
    return std::nullopt;
}

std::string join(const std::vector<std::string>& tokens, std::size_t begin,
                 std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (!out.empty()) out += ' ';
        out += tokens[i];
    }
    return out;
}

bool replace_all(std::string& s, const std::string& slot,
                 const std::string& value) {
    bool found = false;
    std::size_t pos = 0;
    while ((pos = s.find(slot, pos)) != std::string::npos) {
        s.replace(pos, slot.size(), value);
        pos += value.size();
        found = true;
    }
    return found;
}

}  // namespace

Thesaurus Thesaurus::from_json(const Json& j) {
    Thesaurus t;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = text::lowercase(it.key());
        std::vector<std::string> syns;
        for (const auto& s : it.value()) {
            std::string v = text::lowercase(s.get<std::string>());
            if (v == key) continue;  // no token maps to itself
            syns.push_back(std::move(v));
        }
        if (!syns.empty()) t.entries[key] = std::move(syns);
    }
    return t;
}

Thesaurus Thesaurus::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);
    return from_json(Json::parse(in));
}

const std::vector<std::string>* Thesaurus::lookup(
    const std::string& token) const {
    auto it = entries.find(token);
    return it == entries.end() ? nullptr : &it->second;
}

TemplateCategory template_category_from_string(const std::string& s) {
    if (s == "color") return TemplateCategory::color;
    if (s == "count") return TemplateCategory::count;
    if (s == "type") return TemplateCategory::type;
    if (s == "spatial") return TemplateCategory::spatial;
    if (s == "location") return TemplateCategory::location;
    throw ConfigInvalidError("unknown template category: " + s);
}

const char* to_string(TemplateCategory c) {
    switch (c) {
        case TemplateCategory::color: return "color";
        case TemplateCategory::count: return "count";
        case TemplateCategory::type: return "type";
        case TemplateCategory::spatial: return "spatial";
        case TemplateCategory::location: return "location";
    }
    return "color";
}

AnswerSlot answer_slot_from_string(const std::string& s) {
    if (s == "color") return AnswerSlot::color;
    if (s == "count") return AnswerSlot::count;
    if (s == "object") return AnswerSlot::object;
    if (s == "relation_target") return AnswerSlot::relation_target;
    if (s == "location_phrase") return AnswerSlot::location_phrase;
    throw ConfigInvalidError("unknown answer slot: " + s);
}

std::vector<QATemplate> load_templates(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);
    const Json j = Json::parse(in);
    std::vector<QATemplate> templates;
    std::unordered_set<std::string> ids;
    for (const auto& entry : j) {
        QATemplate t;
        t.id = entry.at("id").get<std::string>();
        t.category = template_category_from_string(
            entry.at("category").get<std::string>());
        t.question_pattern = entry.at("question").get<std::string>();
        t.answer_slot =
            answer_slot_from_string(entry.at("answer_slot").get<std::string>());
        if (t.question_pattern.find('{') == std::string::npos)
            throw ConfigInvalidError("template " + t.id + " has no slot");
        if (!ids.insert(t.id).second)
            throw ConfigInvalidError("duplicate template id: " + t.id);
        templates.push_back(std::move(t));
    }
    return templates;
}

CaptionLexicons CaptionLexicons::defaults() {
    CaptionLexicons lex;
    lex.colors = {"black", "white", "brown", "red",    "blue",  "green",
                  "yellow", "gray", "grey",  "orange", "purple", "pink",
                  "beige", "tan",  "silver", "gold",   "dark",   "light"};
    lex.relations = {"in front of", "next to", "left of", "right of",
                     "above",       "under",   "near",    "behind",
                     "beside",      "below",   "over",    "on"};
    return lex;
}

CaptionLexicons CaptionLexicons::from_files(const std::string& colors_path,
                                            const std::string& relations_path) {
    CaptionLexicons lex;
    lex.colors = text::load_word_list(colors_path);
    std::ifstream in(relations_path);
    if (!in) throw FileNotFoundError(relations_path);
    std::string line;
    while (std::getline(in, line)) {
        line = text::trim(line);
        if (line.empty() || line[0] == '#') continue;
        lex.relations.push_back(text::lowercase(line));
    }
    // longest phrases first so "in front of" wins over "on"
    std::sort(lex.relations.begin(), lex.relations.end(),
              [](const std::string& a, const std::string& b) {
                  return a.size() > b.size();
              });
    return lex;
}

RelevanceWeights RelevanceWeights::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);
    const Json j = Json::parse(in);
    RelevanceWeights w;
    w.w = j.at("w").get<Vector>();
    w.bias = j.at("bias").get<double>();
    return w;
}

Json RelevanceWeights::to_json() const {
    Json j;
    j["w"] = w;
    j["bias"] = bias;
    return j;
}

std::vector<QARecord> synonym_replace(const QARecord& q,
                                      const Thesaurus& thesaurus,
                                      std::uint64_t seed, int max_subs) {
    if (max_subs < 1)
        throw ConfigInvalidError("max_subs must be >= 1");
    const std::string norm =
        text::lowercase(text::normalize_nfc(q.question));
    const auto spans = text::tokenize_spans(norm);

    std::unordered_set<std::string> answer_tokens;
    for (const auto& a : q.answers)
        for (const auto& t : text::tokenize(a)) answer_tokens.insert(t);

    std::vector<std::size_t> replaceable;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        if (answer_tokens.count(spans[i].value)) continue;
        if (thesaurus.lookup(spans[i].value)) replaceable.push_back(i);
    }
    if (replaceable.empty()) return {};

    auto rng = record_rng(seed, "synonym_replace", q.id);
    std::vector<QARecord> variants;
    const int limit =
        std::min<int>(max_subs, static_cast<int>(replaceable.size()));
    for (int subs = 1; subs <= limit; ++subs) {
        std::vector<std::size_t> positions = replaceable;
        std::shuffle(positions.begin(), positions.end(), rng);
        positions.resize(subs);
        std::sort(positions.begin(), positions.end());

        std::string question = norm;
        // splice right-to-left so earlier spans stay valid
        for (auto it = positions.rbegin(); it != positions.rend(); ++it) {
            const auto& span = spans[*it];
            const auto& syns = *thesaurus.lookup(span.value);
            const auto& replacement =
                syns[rng() % syns.size()];
            question.replace(span.begin, span.end - span.begin, replacement);
        }
        QARecord v = q;
        v.id = "qa_gen-" + q.id + "-syn" + std::to_string(subs - 1);
        v.question = question;
        v.provenance = Provenance::qa_gen;
        v.scores.reset();
        variants.push_back(std::move(v));
    }
    return variants;
}

std::optional<QARecord> logical_reverse(const QARecord& q,
                                        const Thesaurus& antonyms) {
    if (q.answers.size() != 1) return std::nullopt;
    const std::string answer = text::lowercase(text::trim(q.answers[0]));
    if (answer != "yes" && answer != "no") return std::nullopt;

    const std::string norm =
        text::lowercase(text::normalize_nfc(q.question));
    const auto spans = text::tokenize_spans(norm);
    for (const auto& span : spans) {
        const auto* opposites = antonyms.lookup(span.value);
        if (!opposites) continue;
        std::string question = norm;
        question.replace(span.begin, span.end - span.begin,
                         opposites->front());
        QARecord v = q;
        v.id = "qa_gen-" + q.id + "-rev0";
        v.question = question;
        v.answers = {answer == "yes" ? "no" : "yes"};
        v.provenance = Provenance::qa_gen;
        v.scores.reset();
        return v;
    }
    return std::nullopt;
}

namespace {

// Leading interrogative/auxiliary run kept in place by order_shuffle.
bool is_wh_head_token(const std::string& t) {
    static const std::unordered_set<std::string> head = {
        "what", "which", "where",  "who",  "whose", "whom", "how",
        "why",  "when",  "is",     "are",  "was",   "were", "am",
        "do",   "does",  "did",    "can",  "could", "will", "would",
        "shall", "should"};
    return head.count(t) > 0;
}

bool is_clause_separator(const std::string& t) {
    return t == "," || t == ";" || t == "and" || t == "or";
}

}  // namespace

std::optional<QARecord> order_shuffle(const QARecord& q, std::uint64_t seed) {
    const std::string norm =
        text::lowercase(text::normalize_nfc(q.question));
    const auto spans = text::tokenize_spans(norm);
    if (spans.empty()) return std::nullopt;

    std::size_t end = spans.size();
    std::string trailing;
    while (end > 0 && text::is_punct_token(spans[end - 1].value) &&
           !is_clause_separator(spans[end - 1].value)) {
        trailing = spans[end - 1].value + trailing;
        --end;
    }

    std::size_t head_end = 0;
    while (head_end < end && is_wh_head_token(spans[head_end].value))
        ++head_end;

    // clause segments between top-level separators
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    std::size_t seg_begin = head_end;
    for (std::size_t i = head_end; i < end; ++i) {
        if (is_clause_separator(spans[i].value)) {
            if (i > seg_begin) segments.push_back({seg_begin, i});
            seg_begin = i + 1;
        }
    }
    if (end > seg_begin) segments.push_back({seg_begin, end});
    if (segments.size() < 2) return std::nullopt;

    std::vector<std::size_t> order(segments.size());
    std::iota(order.begin(), order.end(), 0);
    auto rng = record_rng(seed, "order_shuffle", q.id);
    const std::vector<std::size_t> identity = order;
    do {
        std::shuffle(order.begin(), order.end(), rng);
    } while (order == identity);

    std::string question;
    if (head_end > 0)
        question = norm.substr(spans[0].begin,
                               spans[head_end - 1].end - spans[0].begin);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto [b, e] = segments[order[i]];
        const std::string segment =
            norm.substr(spans[b].begin, spans[e - 1].end - spans[b].begin);
        if (question.empty())
            question = segment;
        else
            question += (i == 0 ? " " : ", ") + segment;
    }
    question += trailing;

    QARecord v = q;
    v.id = "qa_gen-" + q.id + "-shuf0";
    v.question = question;
    v.provenance = Provenance::qa_gen;
    v.scores.reset();
    return v;
}

double relevance(const std::string& a, const std::string& q,
                 const RelevanceWeights& weights,
                 const EmbeddingBackend& embedder) {
    const std::size_t d = embedder.dimension();
    if (weights.w.size() != 2 * d)
        throw DimensionMismatchError(2 * d, weights.w.size());
    const Vector ea = embedder.embed(a);
    const Vector eq = embedder.embed(q);
    double z = weights.bias;
    for (std::size_t i = 0; i < d; ++i) z += weights.w[i] * ea[i];
    for (std::size_t i = 0; i < d; ++i) z += weights.w[d + i] * eq[i];
    return 1.0 / (1.0 + std::exp(-z));
}

RelevanceWeights fit_relevance_weights(const std::vector<QARecord>& corpus,
                                       const EmbeddingBackend& embedder,
                                       std::uint64_t seed, int epochs,
                                       double learning_rate) {
    const std::size_t d = embedder.dimension();
    RelevanceWeights weights;
    weights.w.assign(2 * d, 0.0);
    if (corpus.size() < 2) return weights;

    struct Sample {
        Vector x;
        double y;
    };
    std::vector<Sample> samples;
    std::vector<Vector> qs, as;
    for (const auto& r : corpus) {
        qs.push_back(embedder.embed(r.question));
        as.push_back(embedder.embed(r.answers.front()));
    }
    auto concat = [&](const Vector& a, const Vector& q) {
        Vector x(a);
        x.insert(x.end(), q.begin(), q.end());
        return x;
    };
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        samples.push_back({concat(as[i], qs[i]), 1.0});
        // mismatched pair: answer i against the next record's question
        samples.push_back({concat(as[i], qs[(i + 1) % corpus.size()]), 0.0});
    }

    auto rng = std::mt19937_64(splitmix64(seed ^ fnv1a("fit_relevance")));
    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::shuffle(samples.begin(), samples.end(), rng);
        for (const auto& s : samples) {
            double z = weights.bias;
            for (std::size_t i = 0; i < s.x.size(); ++i)
                z += weights.w[i] * s.x[i];
            const double p = 1.0 / (1.0 + std::exp(-z));
            const double g = p - s.y;
            for (std::size_t i = 0; i < s.x.size(); ++i)
                weights.w[i] -= learning_rate * g * s.x[i];
            weights.bias -= learning_rate * g;
        }
    }
    return weights;
}

CaptionFacts parse_caption(const CaptionRecord& c,
                           const CaptionLexicons& lexicons) {
    CaptionFacts facts;
    const auto tokens = text::word_tokens(c.description);

    // relation phrases, longest-first at each position
    std::vector<std::vector<std::string>> phrases;
    for (const auto& rel : lexicons.relations)
        phrases.push_back(text::word_tokens(rel));
    std::stable_sort(phrases.begin(), phrases.end(),
                     [](const auto& a, const auto& b) {
                         return a.size() > b.size();
                     });

    std::vector<bool> consumed(tokens.size(), false);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        for (const auto& phrase : phrases) {
            if (i + phrase.size() > tokens.size()) continue;
            bool match = true;
            for (std::size_t k = 0; k < phrase.size(); ++k)
                if (tokens[i + k] != phrase[k] || consumed[i + k]) {
                    match = false;
                    break;
                }
            if (!match) continue;
            std::size_t t = i + phrase.size();
            while (t < tokens.size() &&
                   (determiners().count(tokens[t]) ||
                    lexicons.colors.count(tokens[t]) ||
                    size_adjectives().count(tokens[t])))
                ++t;
            if (t >= tokens.size()) continue;
            facts.relations.push_back({join(phrase, 0, phrase.size()),
                                       tokens[t]});
            for (std::size_t k = i; k < i + phrase.size(); ++k)
                consumed[k] = true;
            break;
        }
    }

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (consumed[i]) continue;
        if (lexicons.colors.count(tokens[i]))
            facts.colors.push_back(tokens[i]);
        else if (!facts.count) {
            if (auto n = parse_cardinal(tokens[i])) facts.count = n;
        }
    }

    // trailing "in the ..." / "by the ..." / "at the ..." location phrase
    for (std::size_t i = tokens.size(); i-- > 0;) {
        if (i + 2 >= tokens.size()) continue;  // needs prep + "the" + noun
        if ((tokens[i] == "in" || tokens[i] == "by" || tokens[i] == "at") &&
            tokens[i + 1] == "the" && !consumed[i]) {
            facts.location = join(tokens, i, tokens.size());
            break;
        }
    }

    if (!c.object_name.empty()) {
        facts.object =
            text::lowercase(text::trim(text::normalize_nfc(c.object_name)));
    } else {
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (consumed[i]) break;  // relation begins; head noun was before
            const auto& t = tokens[i];
            if (determiners().count(t) || size_adjectives().count(t) ||
                lexicons.colors.count(t) || parse_cardinal(t))
                continue;
            facts.object = t;
            break;
        }
    }
    return facts;
}

std::vector<QARecord> caption_to_qa(const CaptionRecord& c,
                                    const std::vector<QATemplate>& templates,
                                    const CaptionFacts& facts) {
    if (templates.empty())
        throw ConfigInvalidError("template set is empty");
    std::vector<QARecord> out;
    for (const auto& tpl : templates) {
        if (facts.object.empty()) break;
        std::string question = tpl.question_pattern;
        replace_all(question, "{object}", facts.object);
        if (question.find("{anchor}") != std::string::npos) {
            if (facts.relations.empty()) continue;
            replace_all(question, "{anchor}", facts.relations[0].second);
        }
        if (question.find("{relation}") != std::string::npos) {
            if (facts.relations.empty()) continue;
            replace_all(question, "{relation}", facts.relations[0].first);
        }
        if (question.find('{') != std::string::npos) continue;

        std::string answer;
        switch (tpl.answer_slot) {
            case AnswerSlot::color:
                if (facts.colors.empty()) continue;
                answer = facts.colors[0];
                break;
            case AnswerSlot::count:
                if (!facts.count) continue;
                answer = std::to_string(*facts.count);
                break;
            case AnswerSlot::object:
                answer = facts.object;
                break;
            case AnswerSlot::relation_target:
                if (facts.relations.empty()) continue;
                answer = facts.relations[0].second;
                break;
            case AnswerSlot::location_phrase:
                if (!facts.location) continue;
                answer = *facts.location;
                break;
        }

        QARecord r;
        r.id = "caption_gen-" + c.id + "-" + std::to_string(out.size());
        r.scene_id = c.scene_id;
        r.question = question;
        r.answers = {answer};
        r.object_ids = {c.object_id};
        r.provenance = Provenance::caption_gen;
        out.push_back(std::move(r));
    }
    return out;
}

SceneToQaResult scene_to_qa(const SceneId& scene_id,
                            const std::string& context,
                            const GeneratorBackend& generator, int k) {
    if (k < 1) throw ConfigInvalidError("k must be >= 1");
    GenerationRequest req;
    req.scene_id = scene_id.value;
    req.context = context;
    req.prompt_template =
        "Given the indoor scene summary, produce question/answer pairs "
        "grounded in the described objects.";
    req.k = k;
    const GenerationResult gen = generator.generate(req);

    SceneToQaResult result;
    result.dropped = gen.dropped;
    for (const auto& cand : gen.candidates) {
        if (static_cast<int>(result.records.size()) >= k) break;
        if (text::trim(cand.question).empty() ||
            text::trim(cand.answer).empty()) {
            ++result.dropped;
            continue;
        }
        QARecord r;
        r.id = "scene_gen-" + scene_id.value + "-" +
               std::to_string(result.records.size());
        r.scene_id = scene_id;
        r.question = text::normalize_nfc(cand.question);
        r.answers = {text::normalize_nfc(cand.answer)};
        r.provenance = Provenance::scene_gen;
        result.records.push_back(std::move(r));
    }
    return result;
}

}  // namespace sdf
