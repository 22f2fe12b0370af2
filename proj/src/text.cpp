#include "sdf/text.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "sdf/errors.hpp"

namespace sdf::text {

namespace {

// (base, combining mark) -> composed codepoint, Latin letters only.
const std::map<std::pair<char32_t, char32_t>, char32_t>& composition_table() {
    static const std::map<std::pair<char32_t, char32_t>, char32_t> table = {
        {{U'a', 0x300}, U'à'}, {{U'a', 0x301}, U'á'}, {{U'a', 0x302}, U'â'},
        {{U'a', 0x303}, U'ã'}, {{U'a', 0x308}, U'ä'}, {{U'a', 0x30A}, U'å'},
        {{U'e', 0x300}, U'è'}, {{U'e', 0x301}, U'é'}, {{U'e', 0x302}, U'ê'},
        {{U'e', 0x308}, U'ë'},
        {{U'i', 0x300}, U'ì'}, {{U'i', 0x301}, U'í'}, {{U'i', 0x302}, U'î'},
        {{U'i', 0x308}, U'ï'},
        {{U'o', 0x300}, U'ò'}, {{U'o', 0x301}, U'ó'}, {{U'o', 0x302}, U'ô'},
        {{U'o', 0x303}, U'õ'}, {{U'o', 0x308}, U'ö'},
        {{U'u', 0x300}, U'ù'}, {{U'u', 0x301}, U'ú'}, {{U'u', 0x302}, U'û'},
        {{U'u', 0x308}, U'ü'},
        {{U'n', 0x303}, U'ñ'}, {{U'c', 0x327}, U'ç'}, {{U'y', 0x301}, U'ý'},
        {{U'A', 0x300}, U'À'}, {{U'A', 0x301}, U'Á'}, {{U'A', 0x302}, U'Â'},
        {{U'A', 0x303}, U'Ã'}, {{U'A', 0x308}, U'Ä'}, {{U'A', 0x30A}, U'Å'},
        {{U'E', 0x300}, U'È'}, {{U'E', 0x301}, U'É'}, {{U'E', 0x302}, U'Ê'},
        {{U'E', 0x308}, U'Ë'},
        {{U'I', 0x300}, U'Ì'}, {{U'I', 0x301}, U'Í'}, {{U'I', 0x302}, U'Î'},
        {{U'I', 0x308}, U'Ï'},
        {{U'O', 0x300}, U'Ò'}, {{U'O', 0x301}, U'Ó'}, {{U'O', 0x302}, U'Ô'},
        {{U'O', 0x303}, U'Õ'}, {{U'O', 0x308}, U'Ö'},
        {{U'U', 0x300}, U'Ù'}, {{U'U', 0x301}, U'Ú'}, {{U'U', 0x302}, U'Û'},
        {{U'U', 0x308}, U'Ü'},
        {{U'N', 0x303}, U'Ñ'}, {{U'C', 0x327}, U'Ç'},
    };
    return table;
}

// Decodes one codepoint starting at i; returns (codepoint, bytes consumed).
// Invalid sequences report (0xFFFFFFFF, 1) so the caller can copy the byte.
std::pair<char32_t, std::size_t> decode_utf8(const std::string& s,
                                             std::size_t i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) return {b0, 1};
    auto cont = [&](std::size_t k) {
        return i + k < s.size() &&
               (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    auto cb = [&](std::size_t k) {
        return static_cast<char32_t>(static_cast<unsigned char>(s[i + k]) &
                                     0x3F);
    };
    if ((b0 & 0xE0) == 0xC0 && cont(1))
        return {(static_cast<char32_t>(b0 & 0x1F) << 6) | cb(1), 2};
    if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2))
        return {(static_cast<char32_t>(b0 & 0x0F) << 12) | (cb(1) << 6) |
                    cb(2),
                3};
    if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3))
        return {(static_cast<char32_t>(b0 & 0x07) << 18) | (cb(1) << 12) |
                    (cb(2) << 6) | cb(3),
                4};
    return {0xFFFFFFFF, 1};
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

}  // namespace

std::string normalize_nfc(const std::string& utf8) {
    std::string out;
    out.reserve(utf8.size());
    std::size_t i = 0;
    while (i < utf8.size()) {
        auto [cp, len] = decode_utf8(utf8, i);
        if (cp == 0xFFFFFFFF) {
            out.push_back(utf8[i]);
            i += 1;
            continue;
        }
        std::size_t next = i + len;
        if (next < utf8.size()) {
            auto [mark, mlen] = decode_utf8(utf8, next);
            if (mark != 0xFFFFFFFF) {
                auto it = composition_table().find({cp, mark});
                if (it != composition_table().end()) {
                    encode_utf8(it->second, out);
                    i = next + mlen;
                    continue;
                }
            }
        }
        encode_utf8(cp, out);
        i = next;
    }
    return out;
}

std::string lowercase(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        c = static_cast<char>(
            std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<Token> tokenize_spans(const std::string& s) {
    const std::string norm = lowercase(normalize_nfc(s));
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < norm.size()) {
        const auto c = static_cast<unsigned char>(norm[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (std::ispunct(c)) {
            tokens.push_back({std::string(1, norm[i]), i, i + 1});
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < norm.size()) {
            const auto d = static_cast<unsigned char>(norm[i]);
            if (d < 0x80 && (std::isspace(d) || std::ispunct(d))) break;
            ++i;
        }
        tokens.push_back({norm.substr(begin, i - begin), begin, i});
    }
    return tokens;
}

std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> out;
    for (auto& t : tokenize_spans(s)) out.push_back(std::move(t.value));
    return out;
}

std::vector<std::string> word_tokens(const std::string& s) {
    std::vector<std::string> out;
    for (auto& t : tokenize_spans(s))
        if (!is_punct_token(t.value)) out.push_back(std::move(t.value));
    return out;
}

bool is_punct_token(const std::string& token) {
    return token.size() == 1 &&
           std::ispunct(static_cast<unsigned char>(token[0]));
}

std::string stem(const std::string& token) {
    auto ends_with = [&](const char* suf) {
        const std::size_t n = std::char_traits<char>::length(suf);
        return token.size() > n + 2 &&
               token.compare(token.size() - n, n, suf) == 0;
    };
    if (ends_with("ing")) return token.substr(0, token.size() - 3);
    if (ends_with("ed")) return token.substr(0, token.size() - 2);
    if (ends_with("es")) return token.substr(0, token.size() - 2);
    if (ends_with("s")) return token.substr(0, token.size() - 1);
    return token;
}

std::unordered_set<std::string> load_word_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        words.insert(lowercase(line));
    }
    return words;
}

const std::unordered_set<std::string>& default_stopwords() {
    static const std::unordered_set<std::string> words = {
        "a", "an", "the", "this", "that", "these", "those", "is", "are",
        "was", "were", "be", "been", "being", "am", "do", "does", "did",
        "have", "has", "had", "will", "would", "shall", "should", "can",
        "could", "may", "might", "must", "of", "in", "on", "at", "to",
        "from", "by", "with", "about", "as", "into", "onto", "through",
        "over", "under", "above", "below", "between", "and", "or", "but",
        "nor", "so", "yet", "for", "if", "then", "else", "when", "while",
        "where", "why", "how", "what", "which", "who", "whom", "whose",
        "it", "its", "they", "them", "their", "there", "here", "he", "she",
        "his", "her", "him", "we", "us", "our", "you", "your", "i", "me",
        "my", "mine", "not", "no", "yes", "very", "too", "also", "just",
        "than", "such", "own", "same", "other", "some", "any", "each",
        "all", "both", "few", "more", "most", "many", "much", "one",
        "up", "down", "out", "off", "again", "further", "once", "because",
        "until", "during", "before", "after", "against",
    };
    return words;
}

}  // namespace sdf::text
