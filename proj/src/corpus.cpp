#include "senseforge/corpus.hpp"

#include <filesystem>

#include "senseforge/error.hpp"
#include "senseforge/text.hpp"

namespace senseforge {

RawCorpusReader::RawCorpusReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw Error("cannot open " + path);
    stem_ = std::filesystem::path(path).stem().string();
    if (stem_.empty()) stem_ = "corpus";
}

std::optional<RawCorpusReader::RawLine> RawCorpusReader::next() {
    std::string line;
    if (!std::getline(in_, line)) return std::nullopt;
    ++line_no_;
    return RawLine{line_no_, std::move(line)};
}

namespace {

// Splits one token on unescaped '|'; "\|" yields a literal pipe.
std::optional<Token> parse_token(std::string_view raw) {
    std::vector<std::string> fields(1);
    for (size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (c == '\\' && i + 1 < raw.size() && raw[i + 1] == '|') {
            fields.back().push_back('|');
            ++i;
        } else if (c == '|') {
            fields.emplace_back();
        } else {
            fields.back().push_back(c);
        }
    }
    if (fields.size() != 3) return std::nullopt;
    if (fields[0].empty() || fields[1].empty()) return std::nullopt;
    auto pos = parse_pos(fields[2], /*allow_unknown=*/true);
    if (!pos) return std::nullopt;
    Token tok;
    tok.surface = std::move(fields[0]);
    tok.lemma = normalize_lemma(fields[1]);
    tok.pos = *pos;
    return tok;
}

}  // namespace

std::variant<Sentence, SentenceSkip> parse_sentence_line(const std::string& text, int64_t line_no,
                                                         const std::string& stem) {
    Sentence s;
    s.line_no = line_no;
    s.id = stem + "." + std::to_string(line_no);
    for (auto part : split(text, ' ')) {
        if (part.empty()) continue;
        auto tok = parse_token(part);
        if (!tok) return SentenceSkip::MalformedToken;
        s.tokens.push_back(std::move(*tok));
    }
    if (s.tokens.empty()) return SentenceSkip::Empty;
    return s;
}

std::vector<int32_t> target_positions(const Sentence& sentence, const Lexicon& lexicon,
                                      std::optional<Pos> pos_filter) {
    std::vector<int32_t> positions;
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
        const Token& tok = sentence.tokens[i];
        if (tok.pos == Pos::Unknown) continue;
        if (pos_filter && tok.pos != *pos_filter) continue;
        const auto* senses = lexicon.find(tok.lemma, tok.pos);
        if (senses && !senses->empty()) positions.push_back(static_cast<int32_t>(i));
    }
    return positions;
}

}  // namespace senseforge
