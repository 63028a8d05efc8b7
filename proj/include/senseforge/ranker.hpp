#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "senseforge/error.hpp"
#include "senseforge/graph.hpp"
#include "senseforge/lexicon.hpp"
#include "senseforge/scorer.hpp"

namespace senseforge {

struct SelectionParams {
    int64_t k = 100;              // examples for the first sense
    double z = 2.0;               // Zipf exponent
    double min_confidence = 0.0;  // candidates below this never enter a bucket

    void validate() const {
        if (k < 1) throw Error("k must be >= 1");
        if (z < 0.0) throw Error("z must be >= 0");
        if (min_confidence < 0.0 || min_confidence > 1.0)
            throw Error("min-confidence must be in [0,1]");
    }
};

// Confidence margin of a distribution: top1 - top2, 1.0 when monosemous.
double confidence(const SenseDistribution& dist);

// Zipf quota for the sense at 1-based ordering_index: floor(k / index^z).
int64_t allocation(int64_t ordering_index, const SelectionParams& params);

struct ScoredCandidate {
    std::string sentence_id;
    int64_t line_no = 0;
    int32_t target_index = 0;
    std::string lemma;
    Pos pos = Pos::Unknown;
    int32_t sense = -1;      // argmax of the distribution
    double conf = 0.0;
    std::vector<std::pair<int32_t, double>> distribution;  // desc
};

// (conf desc, sentence_id asc, target_index asc): a total order, so the
// selected set is independent of arrival order.
bool candidate_precedes(const ScoredCandidate& a, const ScoredCandidate& b);

struct SelectedBucket {
    std::string lemma;
    Pos pos = Pos::Unknown;
    int32_t sense = -1;
    int sense_index = 0;     // 1-based position in the ordering o
    int64_t quota = 0;
    int64_t candidates = 0;  // everything that arrived for this bucket
    std::vector<ScoredCandidate> kept;
};

struct SelectionResult {
    std::vector<SelectedBucket> buckets;  // ordered by (lemma, pos, sense_index)
    uint64_t dropped_unknown_sense = 0;
    uint64_t dropped_below_min_confidence = 0;
    uint64_t dropped_over_quota = 0;
};

// Streaming top-quota selection: each candidate lands in its
// (lemma, pos, argmax sense) bucket; buckets keep at most
// allocation(sense_index) candidates, the best ones under candidate_precedes.
// Memory stays proportional to what is kept, not to the candidate stream.
class Selector {
public:
    Selector(const Lexicon& lexicon, const SemanticGraph& graph, const SelectionParams& params);
    void add(ScoredCandidate&& candidate);
    SelectionResult finish();

private:
    struct BucketState {
        int sense_index = 0;
        int64_t quota = 0;
        int64_t candidates = 0;
        std::vector<ScoredCandidate> heap;  // max-heap on "worst precedes"
    };

    const Lexicon& lexicon_;
    const SemanticGraph& graph_;
    SelectionParams params_;
    std::map<std::tuple<std::string, char, int32_t>, BucketState> buckets_;
    SelectionResult result_;
    bool finished_ = false;
};

// One-shot convenience over a materialized candidate list.
SelectionResult select(std::vector<ScoredCandidate> candidates, const Lexicon& lexicon,
                       const SemanticGraph& graph, const SelectionParams& params);

}  // namespace senseforge
