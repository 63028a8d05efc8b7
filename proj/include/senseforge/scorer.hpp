#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "senseforge/graph.hpp"
#include "senseforge/lexicon.hpp"
#include "senseforge/pos.hpp"
#include "senseforge/profile_store.hpp"

namespace senseforge {

struct Token {
    std::string surface;
    std::string lemma;  // normalized
    Pos pos = Pos::Unknown;
};

struct Sentence {
    std::string id;
    int64_t line_no = 0;
    std::vector<Token> tokens;
};

enum class PriorKind { Uniform, Zipf };

// P(s|w) when PriorKind::Zipf: proportional to 1/rank^kZipfPriorExponent.
inline constexpr double kZipfPriorExponent = 1.0;

// Floor for context lemmas absent from a profile; a zero factor would
// annihilate the whole product.
inline constexpr double kSmoothingFloor = 1e-7;

// Normalized probabilities over one occurrence's candidate senses.
struct SenseDistribution {
    std::string target_lemma;
    Pos target_pos = Pos::Unknown;
    std::vector<std::pair<int32_t, double>> probabilities;  // desc, ties by id asc
    double confidence = 0.0;  // top1 - top2; 1.0 when monosemous

    int32_t argmax() const { return probabilities.front().first; }
};

class StopwordSet {
public:
    StopwordSet() = default;
    // one lemma per line, '#' comments
    static StopwordSet load(const std::string& path);

    bool contains(const std::string& lemma) const { return lemmas_.count(lemma) > 0; }
    size_t size() const { return lemmas_.size(); }
    void insert(const std::string& lemma);

private:
    std::unordered_set<std::string> lemmas_;
};

struct ScoreCounters {
    uint64_t occurrences_scored = 0;
    uint64_t senses_missing_profile = 0;
};

// Highest profile value over the synsets whose lemma set contains `lemma`
// (restricted to pos_filter when given); kSmoothingFloor when none appears
// in the profile.
double word_probability(const LexicalProfile& profile, const std::string& lemma,
                        std::optional<Pos> pos_filter, const SemanticGraph& graph);

// Scores one target occurrence against its candidate senses: per sense,
// log P(s|w) plus the sum of log word_probability over the eligible context
// tokens (tokens whose lemma appears in some graph synset and is not a
// stopword; the target token included, duplicates each counted). The
// exponentiated scores are normalized into a distribution.
// Throws if tokens[target_index] has no lexicon entry.
SenseDistribution score_occurrence(const Sentence& sentence, size_t target_index,
                                   const Lexicon& lexicon, const ProfileStore& store,
                                   const SemanticGraph& graph, PriorKind prior,
                                   const StopwordSet& stopwords, ScoreCounters* counters = nullptr);

}  // namespace senseforge
