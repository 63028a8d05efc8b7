#include "senseforge/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace senseforge {

LexicalProfile::LexicalProfile(int32_t source, std::vector<std::pair<int32_t, double>> entries,
                               bool converged, int iterations)
    : source_(source), converged_(converged), iterations_(iterations), entries_(std::move(entries)) {
    mass_ = 0.0;
    for (const auto& [node, p] : entries_) mass_ += p;
    by_node_ = entries_;
    std::sort(by_node_.begin(), by_node_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

std::optional<double> LexicalProfile::prob_of(int32_t node) const {
    auto it = std::lower_bound(by_node_.begin(), by_node_.end(), node,
                               [](const auto& e, int32_t n) { return e.first < n; });
    if (it == by_node_.end() || it->first != node) return std::nullopt;
    return it->second;
}

PprSolver::PprSolver(const SemanticGraph& graph) : graph_(graph) {
    const size_t n = static_cast<size_t>(graph.num_nodes());
    // transpose the adjacency: the update pulls over in-edges so writes stay
    // sequential; in-neighbor lists keep ascending source order, which makes
    // the per-node accumulation order identical to a push over the CSR
    std::vector<int32_t> in_degree(n, 0);
    for (int32_t u = 0; u < graph.num_nodes(); ++u)
        for (int32_t v : graph.out_neighbors(u)) in_degree[static_cast<size_t>(v)]++;
    in_offsets_.assign(n + 1, 0);
    for (size_t i = 0; i < n; ++i) in_offsets_[i + 1] = in_offsets_[i] + in_degree[i];
    in_adjacency_.resize(static_cast<size_t>(graph.num_edges()));
    std::vector<int64_t> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
    for (int32_t u = 0; u < graph.num_nodes(); ++u)
        for (int32_t v : graph.out_neighbors(u))
            in_adjacency_[static_cast<size_t>(cursor[static_cast<size_t>(v)]++)] = u;

    alpha_free_share_.resize(n);
    for (size_t i = 0; i < n; ++i) {
        int32_t d = graph.out_degree(static_cast<int32_t>(i));
        alpha_free_share_[i] = d > 0 ? 1.0 / static_cast<double>(d) : 0.0;
    }
    dangling_ = graph.dangling_nodes();
}

namespace {

// Extracts the positive entries of one converged iterate, sorts them by
// (probability desc, synset id asc) and truncates to a pure top_n prefix.
LexicalProfile finalize_profile(const SemanticGraph& graph, int32_t source,
                                const double* column, size_t stride, size_t n, int top_n,
                                bool converged, int iterations) {
    std::vector<std::pair<int32_t, double>> entries;
    for (size_t i = 0; i < n; ++i) {
        double p = column[i * stride];
        if (p > 0.0) entries.emplace_back(static_cast<int32_t>(i), p);
    }
    auto better = [&graph](const std::pair<int32_t, double>& a, const std::pair<int32_t, double>& b) {
        if (a.second != b.second) return a.second > b.second;
        return graph.id_less(a.first, b.first);
    };
    if (entries.size() > static_cast<size_t>(top_n)) {
        std::nth_element(entries.begin(), entries.begin() + top_n, entries.end(), better);
        entries.resize(static_cast<size_t>(top_n));
    }
    std::sort(entries.begin(), entries.end(), better);
    return LexicalProfile(source, std::move(entries), converged, iterations);
}

}  // namespace

template <int Width>
void PprSolver::solve_block(std::span<const int32_t> sources, const PprParams& params,
                            LexicalProfile* out) const {
    const size_t n = static_cast<size_t>(graph_.num_nodes());
    const double alpha = params.alpha;
    const double restart = 1.0 - alpha;
    const int lanes = static_cast<int>(sources.size());

    std::vector<double> v_buf(n * Width, 0.0), next_buf(n * Width, 0.0), contrib_buf(n * Width);
    double* __restrict v = v_buf.data();
    double* __restrict next = next_buf.data();
    double* __restrict contrib = contrib_buf.data();
    const double* __restrict share = alpha_free_share_.data();
    const int32_t* __restrict in_adj = in_adjacency_.data();
    const int64_t* __restrict in_ofs = in_offsets_.data();

    for (int l = 0; l < lanes; ++l) v[static_cast<size_t>(sources[l]) * Width + l] = 1.0;

    bool done[Width] = {};
    int remaining = lanes;

    for (int iter = 1; iter <= params.max_iters && remaining > 0; ++iter) {
        // contributions each node pushes along every out-edge
        for (size_t u = 0; u < n; ++u) {
            const double s = alpha * share[u];
            for (int l = 0; l < Width; ++l) contrib[u * Width + l] = s * v[u * Width + l];
        }
        double dangling_mass[Width] = {};
        for (int32_t u : dangling_)
            for (int l = 0; l < Width; ++l)
                dangling_mass[l] += v[static_cast<size_t>(u) * Width + l];

        for (size_t w = 0; w < n; ++w) {
            double acc[Width] = {};
            for (int64_t e = in_ofs[w]; e < in_ofs[w + 1]; ++e) {
                const double* row = contrib + static_cast<size_t>(in_adj[e]) * Width;
                for (int l = 0; l < Width; ++l) acc[l] += row[l];
            }
            for (int l = 0; l < Width; ++l) next[w * Width + l] = acc[l];
        }
        // restart probability plus the redirected dangling mass
        for (int l = 0; l < lanes; ++l)
            next[static_cast<size_t>(sources[l]) * Width + l] += restart + alpha * dangling_mass[l];

        double delta[Width] = {};
        for (size_t i = 0; i < n; ++i)
            for (int l = 0; l < Width; ++l) delta[l] += std::fabs(next[i * Width + l] - v[i * Width + l]);

        std::swap(v, next);

        for (int l = 0; l < lanes; ++l) {
            if (done[l]) continue;
            const bool converged = delta[l] < params.epsilon;
            if (converged || iter == params.max_iters) {
                out[l] = finalize_profile(graph_, sources[l], v + l, Width, n, params.top_n,
                                          converged, iter);
                done[l] = true;
                --remaining;
            }
        }
    }
}

LexicalProfile PprSolver::solve(int32_t source, const PprParams& params) const {
    params.validate();
    if (source < 0 || source >= graph_.num_nodes()) throw Error("ppr: source out of range");
    LexicalProfile result;
    int32_t src[1] = {source};
    solve_block<1>(src, params, &result);
    return result;
}

std::vector<LexicalProfile> PprSolver::solve_batch(std::span<const int32_t> sources,
                                                   const PprParams& params) const {
    params.validate();
    for (int32_t s : sources)
        if (s < 0 || s >= graph_.num_nodes()) throw Error("ppr: source out of range");
    std::vector<LexicalProfile> results(sources.size());
    size_t pos = 0;
    auto run = [&](auto width_tag) {
        constexpr int W = decltype(width_tag)::value;
        while (sources.size() - pos >= W) {
            solve_block<W>(sources.subspan(pos, W), params, results.data() + pos);
            pos += W;
        }
    };
    run(std::integral_constant<int, 16>{});
    run(std::integral_constant<int, 8>{});
    run(std::integral_constant<int, 4>{});
    run(std::integral_constant<int, 2>{});
    run(std::integral_constant<int, 1>{});
    return results;
}

LexicalProfile ppr(const SemanticGraph& graph, int32_t source, const PprParams& params) {
    return PprSolver(graph).solve(source, params);
}

LexicalProfile ppr(const SemanticGraph& graph, const SynsetId& source, const PprParams& params) {
    auto idx = graph.find(source);
    if (!idx) throw Error("ppr: unknown synset '" + source + "'");
    return PprSolver(graph).solve(*idx, params);
}

}  // namespace senseforge
