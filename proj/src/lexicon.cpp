#include "senseforge/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include "senseforge/error.hpp"
#include "senseforge/text.hpp"

namespace senseforge {

Lexicon build_lexicon(const SemanticGraph& graph, const std::string& ranking_path,
                      LexiconLoadStats* stats) {
    Lexicon lex;
    for (int32_t i = 0; i < graph.num_nodes(); ++i) {
        const Synset& s = graph.synset(i);
        for (const auto& lemma : s.lemmas) lex.entries_[LemmaKey{lemma, s.pos}].push_back(i);
    }

    if (ranking_path.empty()) return lex;

    std::ifstream in(ranking_path);
    if (!in) throw Error("cannot open " + ranking_path);
    std::string line;
    long long lineno = 0;
    auto warn_skip = [&](const std::string& what) {
        std::cerr << "warning: " << ranking_path << ":" << lineno << ": " << what
                  << " (line skipped)\n";
        if (stats) stats->ranking_lines_skipped++;
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split(line, '\t');
        if (fields.size() != 3) {
            warn_skip("expected LEMMA<TAB>POS<TAB>SYNSET_IDS");
            continue;
        }
        std::string lemma = normalize_lemma(fields[0]);
        auto pos = parse_pos(fields[1]);
        if (!pos) {
            warn_skip("bad POS '" + std::string(fields[1]) + "'");
            continue;
        }
        auto entry = lex.entries_.find(LemmaKey{lemma, *pos});
        if (entry == lex.entries_.end()) {
            warn_skip("unknown lemma '" + lemma + "' (" + std::string(fields[1]) + ")");
            continue;
        }

        std::vector<int32_t> ranked;
        bool ok = true;
        for (auto id : split(fields[2], ',')) {
            auto idx = graph.find(std::string(trim(id)));
            if (!idx ||
                std::find(entry->second.begin(), entry->second.end(), *idx) == entry->second.end()) {
                warn_skip("synset '" + std::string(trim(id)) + "' does not carry lemma '" + lemma +
                          "'");
                ok = false;
                break;
            }
            if (std::find(ranked.begin(), ranked.end(), *idx) != ranked.end()) continue;
            ranked.push_back(*idx);
        }
        if (!ok) continue;
        // listed senses first, unlisted ones keep first-seen order after them
        for (int32_t s : entry->second)
            if (std::find(ranked.begin(), ranked.end(), s) == ranked.end()) ranked.push_back(s);
        entry->second = std::move(ranked);
        if (stats) stats->ranking_lines_applied++;
    }
    return lex;
}

}  // namespace senseforge
