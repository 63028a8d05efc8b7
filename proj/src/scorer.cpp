#include "senseforge/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "senseforge/error.hpp"
#include "senseforge/text.hpp"

namespace senseforge {

StopwordSet StopwordSet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    StopwordSet set;
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        set.lemmas_.insert(normalize_lemma(t));
    }
    return set;
}

void StopwordSet::insert(const std::string& lemma) { lemmas_.insert(normalize_lemma(lemma)); }

double word_probability(const LexicalProfile& profile, const std::string& lemma,
                        std::optional<Pos> pos_filter, const SemanticGraph& graph) {
    double best = 0.0;
    for (int32_t syn : graph.synsets_with_lemma(lemma)) {
        if (pos_filter && graph.synset(syn).pos != *pos_filter) continue;
        if (auto p = profile.prob_of(syn)) best = std::max(best, *p);
    }
    return best > 0.0 ? best : kSmoothingFloor;
}

SenseDistribution score_occurrence(const Sentence& sentence, size_t target_index,
                                   const Lexicon& lexicon, const ProfileStore& store,
                                   const SemanticGraph& graph, PriorKind prior,
                                   const StopwordSet& stopwords, ScoreCounters* counters) {
    if (target_index >= sentence.tokens.size())
        throw Error("score_occurrence: target index out of range");
    const Token& target = sentence.tokens[target_index];
    const std::vector<int32_t>* senses = lexicon.find(target.lemma, target.pos);
    if (!senses || senses->empty())
        throw Error("score_occurrence: no lexicon entry for '" + target.lemma + "' (" +
                    std::string(1, pos_char(target.pos)) + ")");

    // Eq. 3 context: every token whose lemma the graph knows, minus stopwords.
    std::vector<const std::string*> context;
    context.reserve(sentence.tokens.size());
    for (const Token& tok : sentence.tokens) {
        if (stopwords.contains(tok.lemma)) continue;
        if (!graph.has_lemma(tok.lemma)) continue;
        context.push_back(&tok.lemma);
    }

    const size_t n = senses->size();
    double zipf_norm = 0.0;
    if (prior == PriorKind::Zipf)
        for (size_t i = 0; i < n; ++i)
            zipf_norm += 1.0 / std::pow(static_cast<double>(i + 1), kZipfPriorExponent);

    std::vector<double> log_scores(n);
    for (size_t i = 0; i < n; ++i) {
        double ls = prior == PriorKind::Uniform
                        ? std::log(1.0 / static_cast<double>(n))
                        : std::log(1.0 / std::pow(static_cast<double>(i + 1), kZipfPriorExponent) /
                                   zipf_norm);
        auto profile = store.lookup((*senses)[i]);
        if (!profile) {
            // unseen sense: every context word bottoms out at the floor
            ls += static_cast<double>(context.size()) * std::log(kSmoothingFloor);
            if (counters) counters->senses_missing_profile++;
        } else {
            for (const std::string* lemma : context)
                ls += std::log(word_probability(*profile, *lemma, std::nullopt, graph));
        }
        log_scores[i] = ls;
    }

    double max_ls = *std::max_element(log_scores.begin(), log_scores.end());
    std::vector<double> weights(n);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        weights[i] = std::exp(log_scores[i] - max_ls);
        total += weights[i];
    }

    SenseDistribution dist;
    dist.target_lemma = target.lemma;
    dist.target_pos = target.pos;
    dist.probabilities.reserve(n);
    for (size_t i = 0; i < n; ++i) dist.probabilities.emplace_back((*senses)[i], weights[i] / total);
    std::sort(dist.probabilities.begin(), dist.probabilities.end(),
              [&graph](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return graph.id_less(a.first, b.first);
              });
    dist.confidence = n == 1 ? 1.0 : dist.probabilities[0].second - dist.probabilities[1].second;
    if (counters) counters->occurrences_scored++;
    return dist;
}

}  // namespace senseforge
