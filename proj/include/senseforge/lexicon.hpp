#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "senseforge/graph.hpp"
#include "senseforge/pos.hpp"

namespace senseforge {

// (lemma, pos) -> ordered candidate senses. The order is the sense ranking o:
// taken from the ranking file when one is given, otherwise first-seen order
// in the synsets file. Immutable after construction.
class Lexicon {
public:
    // Ordered candidate senses, or nullptr when the key is absent.
    const std::vector<int32_t>* find(const std::string& lemma, Pos pos) const {
        auto it = entries_.find(LemmaKey{lemma, pos});
        if (it == entries_.end()) return nullptr;
        return &it->second;
    }

    // 1-based position of a sense in the ordering o; nullopt when absent.
    std::optional<int> sense_index(const std::string& lemma, Pos pos, int32_t synset) const {
        const auto* senses = find(lemma, pos);
        if (!senses) return std::nullopt;
        for (size_t i = 0; i < senses->size(); ++i)
            if ((*senses)[i] == synset) return static_cast<int>(i) + 1;
        return std::nullopt;
    }

    size_t size() const { return entries_.size(); }
    const std::unordered_map<LemmaKey, std::vector<int32_t>, LemmaKeyHash>& entries() const {
        return entries_;
    }

private:
    friend Lexicon build_lexicon(const SemanticGraph&, const std::string&, struct LexiconLoadStats*);
    std::unordered_map<LemmaKey, std::vector<int32_t>, LemmaKeyHash> entries_;
};

struct LexiconLoadStats {
    int64_t ranking_lines_applied = 0;
    int64_t ranking_lines_skipped = 0;  // unknown lemma/synset pair, warned
};

// ranking file lines: LEMMA<TAB>POS<TAB>SYNSET_ID1,SYNSET_ID2,...
// A valid line moves the listed senses to the front in the given order; a
// line naming an unknown lemma or a synset that does not carry the lemma is
// warned about and skipped. Pass an empty ranking_path for the file-order
// fallback.
Lexicon build_lexicon(const SemanticGraph& graph, const std::string& ranking_path = {},
                      LexiconLoadStats* stats = nullptr);

}  // namespace senseforge
