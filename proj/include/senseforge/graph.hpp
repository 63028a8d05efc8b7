#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "senseforge/pos.hpp"

namespace senseforge {

using SynsetId = std::string;

struct Synset {
    SynsetId id;
    Pos pos;
    std::vector<std::string> lemmas;  // normalized, sorted, duplicate-free
};

struct GraphLoadOptions {
    // The semantic network is used as an undirected relatedness graph, so
    // every stored edge is mirrored by default.
    bool symmetrize = true;
};

// Immutable synset graph. Nodes get dense int32 indices in file order; the
// adjacency is CSR with sorted, duplicate-free out-neighbor lists and no
// self-loops. Safe for unrestricted concurrent reads once built.
class SemanticGraph {
public:
    int32_t num_nodes() const { return static_cast<int32_t>(nodes_.size()); }
    int64_t num_edges() const { return static_cast<int64_t>(adjacency_.size()); }

    const Synset& synset(int32_t idx) const { return nodes_[static_cast<size_t>(idx)]; }
    const SynsetId& id_of(int32_t idx) const { return nodes_[static_cast<size_t>(idx)].id; }

    std::optional<int32_t> find(const SynsetId& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::span<const int32_t> out_neighbors(int32_t idx) const {
        auto u = static_cast<size_t>(idx);
        return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
    }
    int32_t out_degree(int32_t idx) const {
        auto u = static_cast<size_t>(idx);
        return static_cast<int32_t>(offsets_[u + 1] - offsets_[u]);
    }
    const std::vector<int32_t>& dangling_nodes() const { return dangling_; }

    // All synsets (any part of speech) containing the normalized lemma.
    std::span<const int32_t> synsets_with_lemma(const std::string& lemma) const {
        auto it = lemma_index_.find(lemma);
        if (it == lemma_index_.end()) return {};
        return {it->second.data(), it->second.size()};
    }
    bool has_lemma(const std::string& lemma) const { return lemma_index_.count(lemma) > 0; }

    // Orders ties deterministically: compares the id strings of two nodes.
    bool id_less(int32_t a, int32_t b) const { return id_of(a) < id_of(b); }

private:
    friend SemanticGraph load_graph(const std::string&, const std::string&,
                                    const GraphLoadOptions&);

    std::vector<Synset> nodes_;
    std::unordered_map<SynsetId, int32_t> index_;
    std::vector<int64_t> offsets_;   // size num_nodes()+1
    std::vector<int32_t> adjacency_;
    std::vector<int32_t> dangling_;  // nodes with out_degree == 0
    std::unordered_map<std::string, std::vector<int32_t>> lemma_index_;
};

// Loads and validates the graph.
//   synsets file: SYNSET_ID<TAB>POS<TAB>lemma1|lemma2|...   (# comments)
//   edges file:   SRC_ID<TAB>DST_ID
// An empty edges_path loads a node-only graph (used by `stats`, which needs
// the lexicon but no topology).
SemanticGraph load_graph(const std::string& synsets_path, const std::string& edges_path,
                         const GraphLoadOptions& options = {});

struct DegreeStats {
    int64_t nodes = 0;
    int64_t directed_edges = 0;
    int64_t dangling = 0;
    std::vector<int32_t> out_degree_deciles;  // 11 values: min, p10..p90, max
};

DegreeStats degree_stats(const SemanticGraph& graph);

}  // namespace senseforge
