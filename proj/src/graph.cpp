#include "senseforge/graph.hpp"

#include <algorithm>
#include <fstream>

#include "senseforge/error.hpp"
#include "senseforge/text.hpp"

namespace senseforge {

namespace {

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return in;
}

bool skippable(std::string_view line) {
    auto t = trim(line);
    return t.empty() || t[0] == '#';
}

}  // namespace

SemanticGraph load_graph(const std::string& synsets_path, const std::string& edges_path,
                         const GraphLoadOptions& options) {
    SemanticGraph g;

    {
        std::ifstream in = open_or_throw(synsets_path);
        std::string line;
        long long lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (skippable(line)) continue;
            auto fields = split(line, '\t');
            if (fields.size() != 3)
                throw file_error(synsets_path, lineno, "expected SYNSET_ID<TAB>POS<TAB>lemmas");
            Synset s;
            s.id = std::string(fields[0]);
            if (s.id.empty()) throw file_error(synsets_path, lineno, "empty synset id");
            auto pos = parse_pos(fields[1]);
            if (!pos)
                throw file_error(synsets_path, lineno,
                                 "bad POS '" + std::string(fields[1]) + "' (want n/v/a/r)");
            s.pos = *pos;
            for (auto lemma : split(fields[2], '|')) {
                if (trim(lemma).empty()) continue;
                s.lemmas.push_back(normalize_lemma(lemma));
            }
            std::sort(s.lemmas.begin(), s.lemmas.end());
            s.lemmas.erase(std::unique(s.lemmas.begin(), s.lemmas.end()), s.lemmas.end());
            if (s.lemmas.empty())
                throw file_error(synsets_path, lineno, "synset '" + s.id + "' has no lemmas");
            if (g.index_.count(s.id))
                throw file_error(synsets_path, lineno, "duplicate synset id '" + s.id + "'");
            int32_t idx = static_cast<int32_t>(g.nodes_.size());
            g.index_.emplace(s.id, idx);
            g.nodes_.push_back(std::move(s));
        }
    }
    if (g.nodes_.empty()) throw Error(synsets_path + ": empty graph (no synsets)");

    std::vector<std::pair<int32_t, int32_t>> edges;
    if (!edges_path.empty()) {
        std::ifstream in = open_or_throw(edges_path);
        std::string line;
        long long lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (skippable(line)) continue;
            auto fields = split(line, '\t');
            if (fields.size() != 2)
                throw file_error(edges_path, lineno, "expected SRC_ID<TAB>DST_ID");
            auto src = g.index_.find(std::string(fields[0]));
            if (src == g.index_.end())
                throw file_error(edges_path, lineno,
                                 "edge references unknown synset '" + std::string(fields[0]) + "'");
            auto dst = g.index_.find(std::string(fields[1]));
            if (dst == g.index_.end())
                throw file_error(edges_path, lineno,
                                 "edge references unknown synset '" + std::string(fields[1]) + "'");
            if (src->second == dst->second) continue;  // self-loops dropped
            edges.emplace_back(src->second, dst->second);
            if (options.symmetrize) edges.emplace_back(dst->second, src->second);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    const size_t n = g.nodes_.size();
    g.offsets_.assign(n + 1, 0);
    for (auto& [u, v] : edges) g.offsets_[static_cast<size_t>(u) + 1]++;
    for (size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.adjacency_.resize(edges.size());
    {
        std::vector<int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
        for (auto& [u, v] : edges) g.adjacency_[static_cast<size_t>(cursor[static_cast<size_t>(u)]++)] = v;
    }
    for (size_t i = 0; i < n; ++i)
        if (g.offsets_[i] == g.offsets_[i + 1]) g.dangling_.push_back(static_cast<int32_t>(i));

    for (size_t i = 0; i < n; ++i)
        for (const auto& lemma : g.nodes_[i].lemmas)
            g.lemma_index_[lemma].push_back(static_cast<int32_t>(i));

    return g;
}

DegreeStats degree_stats(const SemanticGraph& graph) {
    DegreeStats st;
    st.nodes = graph.num_nodes();
    st.directed_edges = graph.num_edges();
    st.dangling = static_cast<int64_t>(graph.dangling_nodes().size());

    std::vector<int32_t> degrees(static_cast<size_t>(graph.num_nodes()));
    for (int32_t i = 0; i < graph.num_nodes(); ++i)
        degrees[static_cast<size_t>(i)] = graph.out_degree(i);
    std::sort(degrees.begin(), degrees.end());
    st.out_degree_deciles.reserve(11);
    for (int q = 0; q <= 10; ++q) {
        size_t pos = (degrees.size() - 1) * static_cast<size_t>(q) / 10;
        st.out_degree_deciles.push_back(degrees[pos]);
    }
    return st;
}

}  // namespace senseforge
