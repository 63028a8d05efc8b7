#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "senseforge/graph.hpp"
#include "senseforge/profile.hpp"

namespace senseforge {

// On-disk layout, inside one directory:
//   profiles.idx — SYNSET_ID<TAB>offset<TAB>length per record
//   profiles.dat — records `SYNSET_ID<TAB>id1:p1 id2:p2 ...\n`, probabilities
//                  as shortest round-trip decimals
// The data record is flushed before its index line, so every indexed record
// is fully on disk and an interrupted run leaves a valid (shorter) store.
class ProfileStoreWriter {
public:
    // resume=false truncates any existing store; resume=true keeps indexed
    // records (dropping a torn trailing record, if any) and appends.
    ProfileStoreWriter(const std::string& dir, const SemanticGraph& graph, bool resume);
    ~ProfileStoreWriter();

    const std::unordered_set<SynsetId>& existing() const { return existing_; }
    void append(const LexicalProfile& profile);
    void close();

private:
    const SemanticGraph& graph_;
    std::string idx_path_, dat_path_;
    std::ofstream idx_, dat_;
    uint64_t dat_pos_ = 0;
    std::unordered_set<SynsetId> existing_;
};

// Read view over a store. lookup() parses on demand and keeps a bounded cache
// of decoded profiles; safe for concurrent readers.
class ProfileStore {
public:
    // Opens an on-disk store written against the same synset inventory.
    ProfileStore(const std::string& dir, const SemanticGraph& graph);
    // In-memory store (tests, bindings, ad-hoc scoring).
    ProfileStore(const SemanticGraph& graph, std::vector<LexicalProfile> profiles);
    ~ProfileStore();

    ProfileStore(const ProfileStore&) = delete;
    ProfileStore& operator=(const ProfileStore&) = delete;

    // nullptr when the id was never profiled.
    std::shared_ptr<const LexicalProfile> lookup(const SynsetId& id) const;
    std::shared_ptr<const LexicalProfile> lookup(int32_t node) const;

    bool contains(const SynsetId& id) const;
    size_t size() const;
    const SemanticGraph& graph() const { return graph_; }

private:
    struct Extent {
        uint64_t offset;
        uint64_t length;
    };
    std::shared_ptr<const LexicalProfile> parse_record(const Extent& e) const;

    const SemanticGraph& graph_;
    std::unordered_map<SynsetId, Extent> index_;
    const char* data_ = nullptr;  // mmap of profiles.dat
    size_t data_len_ = 0;

    mutable std::shared_mutex cache_mtx_;
    mutable std::unordered_map<SynsetId, std::shared_ptr<const LexicalProfile>> cache_;
    mutable std::vector<SynsetId> cache_order_;  // FIFO eviction
    size_t cache_cap_ = 4096;
};

struct ProfileAllOptions {
    int threads = 1;
    bool resume = false;
    int batch = 64;  // sources per worker task
    // restrict to these nodes (default: every node in the graph)
    std::optional<std::vector<int32_t>> targets;
};

struct ProfileAllReport {
    uint64_t computed = 0;
    uint64_t skipped_existing = 0;
    uint64_t not_converged = 0;
};

// Runs ppr for every target and persists the profiles incrementally, in
// target order, so identical runs produce byte-identical stores and an
// interrupted run can resume.
ProfileAllReport profile_all(const SemanticGraph& graph, const PprParams& params,
                             const std::string& store_dir, const ProfileAllOptions& options = {});

}  // namespace senseforge
