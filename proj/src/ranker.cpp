#include "senseforge/ranker.hpp"

#include <algorithm>
#include <cmath>

namespace senseforge {

double confidence(const SenseDistribution& dist) {
    if (dist.probabilities.empty()) throw Error("confidence: empty distribution");
    if (dist.probabilities.size() == 1) return 1.0;
    return dist.probabilities[0].second - dist.probabilities[1].second;
}

int64_t allocation(int64_t ordering_index, const SelectionParams& params) {
    if (ordering_index < 1) throw Error("allocation: ordering index must be >= 1");
    double quota = static_cast<double>(params.k) /
                   std::pow(static_cast<double>(ordering_index), params.z);
    if (quota < 0.0) return 0;
    return static_cast<int64_t>(std::floor(quota));
}

bool candidate_precedes(const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.conf != b.conf) return a.conf > b.conf;
    if (a.sentence_id != b.sentence_id) return a.sentence_id < b.sentence_id;
    return a.target_index < b.target_index;
}

Selector::Selector(const Lexicon& lexicon, const SemanticGraph& graph,
                   const SelectionParams& params)
    : lexicon_(lexicon), graph_(graph), params_(params) {
    params_.validate();
}

void Selector::add(ScoredCandidate&& c) {
    if (finished_) throw Error("Selector::add after finish");
    if (c.conf < params_.min_confidence) {
        result_.dropped_below_min_confidence++;
        return;
    }
    auto key = std::make_tuple(c.lemma, pos_char(c.pos), c.sense);
    auto it = buckets_.find(key);
    if (it == buckets_.end()) {
        auto index = lexicon_.sense_index(c.lemma, c.pos, c.sense);
        if (!index) {
            result_.dropped_unknown_sense++;
            return;
        }
        BucketState st;
        st.sense_index = *index;
        st.quota = allocation(*index, params_);
        it = buckets_.emplace(std::move(key), std::move(st)).first;
    }
    BucketState& st = it->second;
    st.candidates++;
    if (st.quota == 0) {
        result_.dropped_over_quota++;
        return;
    }
    // heap top = worst kept candidate
    auto worse = [](const ScoredCandidate& a, const ScoredCandidate& b) {
        return candidate_precedes(a, b);
    };
    if (static_cast<int64_t>(st.heap.size()) < st.quota) {
        st.heap.push_back(std::move(c));
        std::push_heap(st.heap.begin(), st.heap.end(), worse);
    } else if (candidate_precedes(c, st.heap.front())) {
        std::pop_heap(st.heap.begin(), st.heap.end(), worse);
        st.heap.back() = std::move(c);
        std::push_heap(st.heap.begin(), st.heap.end(), worse);
        result_.dropped_over_quota++;
    } else {
        result_.dropped_over_quota++;
    }
}

SelectionResult Selector::finish() {
    if (finished_) throw Error("Selector::finish called twice");
    finished_ = true;
    std::vector<std::pair<std::tuple<std::string, char, int, int32_t>, BucketState*>> ordered;
    ordered.reserve(buckets_.size());
    for (auto& [key, st] : buckets_)
        ordered.emplace_back(std::make_tuple(std::get<0>(key), std::get<1>(key), st.sense_index,
                                             std::get<2>(key)),
                             &st);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    result_.buckets.reserve(ordered.size());
    for (auto& [key, st] : ordered) {
        SelectedBucket bucket;
        bucket.lemma = std::get<0>(key);
        bucket.pos = *parse_pos(std::string(1, std::get<1>(key)), true);
        bucket.sense = std::get<3>(key);
        bucket.sense_index = st->sense_index;
        bucket.quota = st->quota;
        bucket.candidates = st->candidates;
        bucket.kept = std::move(st->heap);
        std::sort(bucket.kept.begin(), bucket.kept.end(), candidate_precedes);
        result_.buckets.push_back(std::move(bucket));
    }
    buckets_.clear();
    return std::move(result_);
}

SelectionResult select(std::vector<ScoredCandidate> candidates, const Lexicon& lexicon,
                       const SemanticGraph& graph, const SelectionParams& params) {
    Selector selector(lexicon, graph, params);
    for (auto& c : candidates) selector.add(std::move(c));
    return selector.finish();
}

}  // namespace senseforge
