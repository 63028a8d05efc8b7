#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "senseforge/lexicon.hpp"
#include "senseforge/scorer.hpp"

namespace senseforge {

// Raw corpus: one sentence per line, space-separated tokens of the form
// surface|lemma|pos, a literal '|' escaped as '\|'. Sentence ids are
// "<file-stem>.<line-number>" (1-based physical lines).
class RawCorpusReader {
public:
    explicit RawCorpusReader(const std::string& path);

    struct RawLine {
        int64_t line_no;
        std::string text;
    };
    std::optional<RawLine> next();

    const std::string& stem() const { return stem_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::string stem_;
    std::ifstream in_;
    int64_t line_no_ = 0;
};

enum class SentenceSkip { Empty, MalformedToken };

// Sentence or the reason the line was skipped.
std::variant<Sentence, SentenceSkip> parse_sentence_line(const std::string& text, int64_t line_no,
                                                         const std::string& stem);

// Token positions eligible as targets: (lemma, pos) has a lexicon entry and
// pos passes the optional filter. Unknown-pos tokens never match.
std::vector<int32_t> target_positions(const Sentence& sentence, const Lexicon& lexicon,
                                      std::optional<Pos> pos_filter = std::nullopt);

}  // namespace senseforge
