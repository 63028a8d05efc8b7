#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "senseforge/corpus.hpp"
#include "senseforge/graph.hpp"
#include "senseforge/lexicon.hpp"
#include "senseforge/ranker.hpp"
#include "senseforge/scorer.hpp"

namespace senseforge {

inline constexpr const char* kAnnotatedTsvHeader = "#format=senseforge-tsv-v1";

// Sentences that contain at least one lexicon target, with the matching
// token positions; skipped lines are tallied by reason.
class FilteredSentenceStream {
public:
    struct Item {
        Sentence sentence;
        std::vector<int32_t> targets;
    };
    struct Counters {
        int64_t lines = 0;
        int64_t skipped_empty = 0;
        int64_t skipped_malformed = 0;
        int64_t without_targets = 0;
    };

    FilteredSentenceStream(RawCorpusReader& reader, const Lexicon& lexicon,
                           std::optional<Pos> pos_filter = std::nullopt)
        : reader_(reader), lexicon_(lexicon), pos_filter_(pos_filter) {}

    std::optional<Item> next();
    const Counters& counters() const { return counters_; }

private:
    RawCorpusReader& reader_;
    const Lexicon& lexicon_;
    std::optional<Pos> pos_filter_;
    Counters counters_;
};

inline FilteredSentenceStream filter_sentences(RawCorpusReader& reader, const Lexicon& lexicon,
                                               std::optional<Pos> pos_filter = std::nullopt) {
    return FilteredSentenceStream(reader, lexicon, pos_filter);
}

struct RunConfig {
    std::string synsets_path;
    std::string edges_path;
    std::string ranking_path;    // empty: file-order senses
    std::string stopwords_path;  // empty: no stopword filtering
    bool symmetrize = true;

    std::string store_dir;
    std::string corpus_path;
    std::string out_dir;

    SelectionParams selection;
    PriorKind prior = PriorKind::Uniform;
    std::optional<Pos> pos_filter;
    int threads = 1;
};

struct CorpusStats {
    int64_t annotation_count = 0;
    int64_t distinct_lemmas = 0;  // distinct (lemma, pos)
    int64_t distinct_senses = 0;
    double avg_sentences_per_sense = 0.0;
    double avg_confidence = 0.0;  // in [0,1]
    double avg_polysemy = 0.0;    // mean candidate count over annotated (lemma, pos)

    bool operator==(const CorpusStats&) const = default;
};

struct BucketSummary {
    std::string lemma;
    Pos pos = Pos::Unknown;
    SynsetId sense_id;
    int sense_index = 0;
    int64_t quota = 0;
    int64_t candidates = 0;
    int64_t kept = 0;
};

struct RunReport {
    CorpusStats stats;

    int64_t sentences_total = 0;
    int64_t sentences_skipped_empty = 0;
    int64_t sentences_skipped_malformed = 0;
    int64_t sentences_without_targets = 0;
    uint64_t occurrences_scored = 0;
    uint64_t senses_missing_profile = 0;
    uint64_t dropped_unknown_sense = 0;
    uint64_t dropped_below_min_confidence = 0;
    uint64_t dropped_over_quota = 0;
    int64_t annotations_emitted = 0;

    std::vector<BucketSummary> selection;
    std::vector<std::pair<std::string, double>> timings;  // stage name, seconds

    std::string annotations_path;
    std::string report_path;
};

// Full annotate pass: filter -> score -> select -> emit TSV + report.
// Outputs land atomically (temp file then rename); identical inputs and
// config reproduce the TSV byte for byte.
RunReport run(const RunConfig& config);

// Re-derives the corpus statistics from an annotated TSV.
CorpusStats compute_stats(const std::string& annotated_path, const Lexicon& lexicon);

}  // namespace senseforge
