#include "senseforge/profile_store.hpp"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>

#include "senseforge/parallel.hpp"
#include "senseforge/text.hpp"

namespace senseforge {

namespace fs = std::filesystem;

namespace {

struct IndexScan {
    uint64_t data_end = 0;        // end of the last indexed record
    uint64_t good_idx_bytes = 0;  // length of the well-formed index prefix
};

}  // namespace

// Reads the index, tolerating a torn final line (crash mid-append).
static IndexScan scan_index(const std::string& idx_path,
                            std::unordered_map<SynsetId, std::pair<uint64_t, uint64_t>>* into,
                            std::unordered_set<SynsetId>* ids) {
    IndexScan out;
    std::ifstream in(idx_path, std::ios::binary);
    if (!in) return out;
    std::string line;
    uint64_t consumed = 0;
    while (std::getline(in, line)) {
        if (in.eof() && !line.empty()) break;  // no trailing newline: torn line
        auto fields = split(line, '\t');
        if (fields.size() != 3) break;
        auto off = parse_int(fields[1]);
        auto len = parse_int(fields[2]);
        if (fields[0].empty() || !off || !len || *off < 0 || *len <= 0) break;
        SynsetId id(fields[0]);
        if (into) (*into)[id] = {static_cast<uint64_t>(*off), static_cast<uint64_t>(*len)};
        if (ids) ids->insert(id);
        out.data_end = std::max(out.data_end, static_cast<uint64_t>(*off + *len));
        consumed += line.size() + 1;
        out.good_idx_bytes = consumed;
    }
    return out;
}

ProfileStoreWriter::ProfileStoreWriter(const std::string& dir, const SemanticGraph& graph,
                                       bool resume)
    : graph_(graph) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create store directory " + dir + ": " + ec.message());
    idx_path_ = (fs::path(dir) / "profiles.idx").string();
    dat_path_ = (fs::path(dir) / "profiles.dat").string();

    if (resume && fs::exists(idx_path_)) {
        IndexScan scan = scan_index(idx_path_, nullptr, &existing_);
        // drop anything past the well-formed prefix, then append
        fs::resize_file(idx_path_, scan.good_idx_bytes, ec);
        if (ec) throw Error("cannot truncate " + idx_path_ + ": " + ec.message());
        if (fs::exists(dat_path_)) {
            fs::resize_file(dat_path_, scan.data_end, ec);
            if (ec) throw Error("cannot truncate " + dat_path_ + ": " + ec.message());
        } else if (scan.data_end > 0) {
            throw Error(dat_path_ + ": missing data file for non-empty index");
        }
        dat_pos_ = scan.data_end;
        idx_.open(idx_path_, std::ios::binary | std::ios::app);
        dat_.open(dat_path_, std::ios::binary | std::ios::app);
    } else {
        idx_.open(idx_path_, std::ios::binary | std::ios::trunc);
        dat_.open(dat_path_, std::ios::binary | std::ios::trunc);
        dat_pos_ = 0;
    }
    if (!idx_) throw Error("cannot open " + idx_path_ + " for writing");
    if (!dat_) throw Error("cannot open " + dat_path_ + " for writing");
}

ProfileStoreWriter::~ProfileStoreWriter() {
    // flushes; errors surfaced by close() for callers that care
    if (idx_.is_open()) idx_.flush();
    if (dat_.is_open()) dat_.flush();
}

void ProfileStoreWriter::append(const LexicalProfile& profile) {
    const SynsetId& id = graph_.id_of(profile.source());
    std::string record;
    record.reserve(profile.size() * 24 + id.size() + 2);
    record += id;
    record += '\t';
    bool first = true;
    for (const auto& [node, p] : profile.entries()) {
        if (!first) record += ' ';
        first = false;
        record += graph_.id_of(node);
        record += ':';
        record += shortest_double(p);
    }
    record += '\n';

    dat_.write(record.data(), static_cast<std::streamsize>(record.size()));
    dat_.flush();
    if (!dat_) throw Error("write failed on " + dat_path_);
    idx_ << id << '\t' << dat_pos_ << '\t' << record.size() << '\n';
    idx_.flush();
    if (!idx_) throw Error("write failed on " + idx_path_);
    dat_pos_ += record.size();
    existing_.insert(id);
}

void ProfileStoreWriter::close() {
    if (idx_.is_open()) {
        idx_.flush();
        if (!idx_) throw Error("write failed on " + idx_path_);
        idx_.close();
    }
    if (dat_.is_open()) {
        dat_.flush();
        if (!dat_) throw Error("write failed on " + dat_path_);
        dat_.close();
    }
}

ProfileStore::ProfileStore(const std::string& dir, const SemanticGraph& graph) : graph_(graph) {
    std::string idx_path = (fs::path(dir) / "profiles.idx").string();
    std::string dat_path = (fs::path(dir) / "profiles.dat").string();
    if (!fs::exists(idx_path)) throw Error("profile store not found: " + idx_path);

    std::unordered_map<SynsetId, std::pair<uint64_t, uint64_t>> extents;
    scan_index(idx_path, &extents, nullptr);
    for (auto& [id, e] : extents) index_.emplace(id, Extent{e.first, e.second});

    int fd = ::open(dat_path.c_str(), O_RDONLY);
    if (fd < 0) throw Error("cannot open " + dat_path);
    struct stat st {};
    if (::fstat(fd, &st) != 0) {
        ::close(fd);
        throw Error("cannot stat " + dat_path);
    }
    data_len_ = static_cast<size_t>(st.st_size);
    if (data_len_ > 0) {
        void* p = ::mmap(nullptr, data_len_, PROT_READ, MAP_PRIVATE, fd, 0);
        if (p == MAP_FAILED) {
            ::close(fd);
            throw Error("cannot mmap " + dat_path);
        }
        data_ = static_cast<const char*>(p);
    }
    ::close(fd);
    for (const auto& [id, e] : index_)
        if (e.offset + e.length > data_len_)
            throw Error(dat_path + ": record for '" + id + "' at offset " +
                        std::to_string(e.offset) + " extends past end of data");
}

ProfileStore::ProfileStore(const SemanticGraph& graph, std::vector<LexicalProfile> profiles)
    : graph_(graph) {
    std::lock_guard lk(cache_mtx_);
    cache_cap_ = profiles.size() + 1;
    for (auto& p : profiles) {
        const SynsetId& id = graph.id_of(p.source());
        index_.emplace(id, Extent{0, 0});
        cache_[id] = std::make_shared<LexicalProfile>(std::move(p));
    }
}

ProfileStore::~ProfileStore() {
    if (data_) ::munmap(const_cast<char*>(data_), data_len_);
}

std::shared_ptr<const LexicalProfile> ProfileStore::parse_record(const Extent& e) const {
    std::string_view record(data_ + e.offset, e.length);
    auto corrupt = [&](const std::string& what) {
        return Error("profile store: corrupted record at offset " + std::to_string(e.offset) +
                     ": " + what);
    };
    if (record.empty() || record.back() != '\n') throw corrupt("record does not end with newline");
    record.remove_suffix(1);
    size_t tab = record.find('\t');
    if (tab == std::string_view::npos) throw corrupt("missing id field");
    std::string source_id(record.substr(0, tab));
    auto source = graph_.find(source_id);
    if (!source) throw corrupt("unknown source synset '" + source_id + "'");

    std::vector<std::pair<int32_t, double>> entries;
    std::string_view body = record.substr(tab + 1);
    if (!body.empty()) {
        for (auto part : split(body, ' ')) {
            size_t colon = part.rfind(':');
            if (colon == std::string_view::npos) throw corrupt("entry without ':'");
            std::string id(part.substr(0, colon));
            auto node = graph_.find(id);
            if (!node) throw corrupt("unknown synset '" + id + "'");
            auto p = parse_double(part.substr(colon + 1));
            if (!p || !(*p > 0.0)) throw corrupt("bad probability for '" + id + "'");
            entries.emplace_back(*node, *p);
        }
    }
    // stored records are converged output; iteration metadata is not persisted
    return std::make_shared<LexicalProfile>(*source, std::move(entries), true, 0);
}

std::shared_ptr<const LexicalProfile> ProfileStore::lookup(const SynsetId& id) const {
    {
        std::shared_lock lk(cache_mtx_);
        auto it = cache_.find(id);
        if (it != cache_.end()) return it->second;
    }
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    auto profile = parse_record(it->second);
    std::lock_guard lk(cache_mtx_);
    if (cache_.size() >= cache_cap_ && !cache_order_.empty()) {
        cache_.erase(cache_order_.front());
        cache_order_.erase(cache_order_.begin());
    }
    auto [pos, inserted] = cache_.emplace(id, profile);
    if (inserted) cache_order_.push_back(id);
    return pos->second;
}

std::shared_ptr<const LexicalProfile> ProfileStore::lookup(int32_t node) const {
    return lookup(graph_.id_of(node));
}

bool ProfileStore::contains(const SynsetId& id) const { return index_.count(id) > 0; }

size_t ProfileStore::size() const { return index_.size(); }

ProfileAllReport profile_all(const SemanticGraph& graph, const PprParams& params,
                             const std::string& store_dir, const ProfileAllOptions& options) {
    params.validate();
    ProfileAllReport report;

    std::vector<int32_t> targets;
    if (options.targets) {
        targets = *options.targets;
        for (int32_t t : targets)
            if (t < 0 || t >= graph.num_nodes()) throw Error("profile_all: target out of range");
    } else {
        targets.resize(static_cast<size_t>(graph.num_nodes()));
        for (int32_t i = 0; i < graph.num_nodes(); ++i) targets[static_cast<size_t>(i)] = i;
    }

    ProfileStoreWriter writer(store_dir, graph, options.resume);
    if (options.resume && !writer.existing().empty()) {
        std::vector<int32_t> pending;
        pending.reserve(targets.size());
        for (int32_t t : targets) {
            if (writer.existing().count(graph.id_of(t)))
                report.skipped_existing++;
            else
                pending.push_back(t);
        }
        targets = std::move(pending);
    }

    PprSolver solver(graph);
    const size_t batch = std::max<size_t>(1, static_cast<size_t>(options.batch));
    size_t cursor = 0;

    auto produce = [&]() -> std::optional<std::pair<size_t, size_t>> {
        if (cursor >= targets.size()) return std::nullopt;
        size_t begin = cursor;
        cursor = std::min(targets.size(), cursor + batch);
        return std::make_pair(begin, cursor);
    };
    auto work = [&](std::pair<size_t, size_t>&& range) {
        std::span<const int32_t> chunk(targets.data() + range.first, range.second - range.first);
        return solver.solve_batch(chunk, params);
    };
    auto consume = [&](std::vector<LexicalProfile>&& profiles) {
        for (const auto& p : profiles) {
            writer.append(p);
            report.computed++;
            if (!p.converged()) report.not_converged++;
        }
    };
    ordered_pipeline(produce, work, consume, options.threads);
    writer.close();
    return report;
}

}  // namespace senseforge
