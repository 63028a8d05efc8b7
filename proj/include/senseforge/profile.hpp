#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "senseforge/error.hpp"
#include "senseforge/graph.hpp"

namespace senseforge {

struct PprParams {
    double alpha = 0.85;     // damping factor, in (0,1)
    double epsilon = 1e-6;   // L1 convergence threshold
    int max_iters = 30;
    int top_n = 1000;        // profile truncation size

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must be in (0,1)");
        if (!(epsilon > 0.0)) throw Error("epsilon must be > 0");
        if (max_iters < 1) throw Error("max-iters must be >= 1");
        if (top_n < 1) throw Error("top-n must be >= 1");
    }
};

// Truncated sparse fixed point of v = (1-alpha)*e_src + alpha*M*v, where M is
// the column-stochastic transition matrix of the graph and the mass sitting
// on dangling nodes is redirected to the restart node every iteration.
class LexicalProfile {
public:
    LexicalProfile() = default;
    // entries must already be sorted by (prob desc, id string asc).
    LexicalProfile(int32_t source, std::vector<std::pair<int32_t, double>> entries,
                   bool converged, int iterations);

    int32_t source() const { return source_; }
    bool converged() const { return converged_; }
    int iterations() const { return iterations_; }
    double mass() const { return mass_; }
    size_t size() const { return entries_.size(); }

    // (node, probability), descending by probability.
    const std::vector<std::pair<int32_t, double>>& entries() const { return entries_; }

    // Probability of one node, or nullopt if it fell outside the profile.
    std::optional<double> prob_of(int32_t node) const;

private:
    int32_t source_ = -1;
    bool converged_ = false;
    int iterations_ = 0;
    double mass_ = 0.0;
    std::vector<std::pair<int32_t, double>> entries_;   // prob desc
    std::vector<std::pair<int32_t, double>> by_node_;   // node asc, for lookups
};

// Shares the transposed adjacency across solves; cheap to copy around by
// reference, safe for concurrent solve() calls (each call owns its buffers).
class PprSolver {
public:
    explicit PprSolver(const SemanticGraph& graph);

    LexicalProfile solve(int32_t source, const PprParams& params) const;

    // Solves a batch of sources with one blocked iteration (identical
    // per-source arithmetic to solve(), lane by lane).
    std::vector<LexicalProfile> solve_batch(std::span<const int32_t> sources,
                                            const PprParams& params) const;

    const SemanticGraph& graph() const { return graph_; }

private:
    template <int Width>
    void solve_block(std::span<const int32_t> sources, const PprParams& params,
                     LexicalProfile* out) const;

    const SemanticGraph& graph_;
    std::vector<int64_t> in_offsets_;   // CSR of in-edges
    std::vector<int32_t> in_adjacency_;
    std::vector<double> alpha_free_share_;  // 1/out_degree, 0 for dangling
    std::vector<int32_t> dangling_;
};

// One-shot convenience (spec operation): builds a solver and runs one source.
LexicalProfile ppr(const SemanticGraph& graph, int32_t source, const PprParams& params = {});
LexicalProfile ppr(const SemanticGraph& graph, const SynsetId& source, const PprParams& params = {});

}  // namespace senseforge
