#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace senseforge {

// Part-of-speech tags. Synsets carry one of n/v/a/r; corpus tokens may also
// carry x (unknown), which never matches a lexicon entry.
enum class Pos : uint8_t { Noun, Verb, Adjective, Adverb, Unknown };

inline char pos_char(Pos p) {
    switch (p) {
        case Pos::Noun: return 'n';
        case Pos::Verb: return 'v';
        case Pos::Adjective: return 'a';
        case Pos::Adverb: return 'r';
        default: return 'x';
    }
}

inline std::optional<Pos> parse_pos(std::string_view s, bool allow_unknown = false) {
    if (s.size() != 1) return std::nullopt;
    switch (s[0]) {
        case 'n': return Pos::Noun;
        case 'v': return Pos::Verb;
        case 'a': return Pos::Adjective;
        case 'r': return Pos::Adverb;
        case 'x':
            if (allow_unknown) return Pos::Unknown;
            return std::nullopt;
        default: return std::nullopt;
    }
}

// Lexicon key: lemmas are disambiguated per part of speech.
struct LemmaKey {
    std::string lemma;
    Pos pos;

    bool operator==(const LemmaKey& o) const { return pos == o.pos && lemma == o.lemma; }
    bool operator<(const LemmaKey& o) const {
        if (lemma != o.lemma) return lemma < o.lemma;
        return pos_char(pos) < pos_char(o.pos);
    }
};

struct LemmaKeyHash {
    size_t operator()(const LemmaKey& k) const {
        return std::hash<std::string>()(k.lemma) * 31u + static_cast<size_t>(k.pos);
    }
};

}  // namespace senseforge
