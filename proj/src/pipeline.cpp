#include "senseforge/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "senseforge/error.hpp"
#include "senseforge/parallel.hpp"
#include "senseforge/profile_store.hpp"
#include "senseforge/text.hpp"

namespace senseforge {

namespace fs = std::filesystem;

std::optional<FilteredSentenceStream::Item> FilteredSentenceStream::next() {
    while (auto raw = reader_.next()) {
        counters_.lines++;
        auto parsed = parse_sentence_line(raw->text, raw->line_no, reader_.stem());
        if (std::holds_alternative<SentenceSkip>(parsed)) {
            if (std::get<SentenceSkip>(parsed) == SentenceSkip::Empty)
                counters_.skipped_empty++;
            else
                counters_.skipped_malformed++;
            continue;
        }
        Item item{std::move(std::get<Sentence>(parsed)), {}};
        item.targets = target_positions(item.sentence, lexicon_, pos_filter_);
        if (item.targets.empty()) {
            counters_.without_targets++;
            continue;
        }
        return item;
    }
    return std::nullopt;
}

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string render_distribution(const std::vector<std::pair<int32_t, double>>& dist,
                                const SemanticGraph& graph) {
    std::string out;
    size_t n = std::min<size_t>(3, dist.size());
    for (size_t i = 0; i < n; ++i) {
        if (i) out += ',';
        out += fixed6(dist[i].second);
        out += ':';
        out += graph.id_of(dist[i].first);
    }
    return out;
}

struct KeptAnnotation {
    std::string sentence_id;
    std::string lemma;
    Pos pos;
    int32_t sense;
    double conf;
    std::vector<std::pair<int32_t, double>> distribution;
};

void remove_if_exists(const std::string& path) {
    std::error_code ec;
    fs::remove(path, ec);
}

}  // namespace

RunReport run(const RunConfig& config) {
    config.selection.validate();
    RunReport report;
    std::string stage = "load";

    fs::path out_dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error("annotate/load: cannot create " + config.out_dir + ": " + ec.message());
    std::string tsv_tmp = (out_dir / "annotations.tsv.tmp").string();
    std::string report_tmp = (out_dir / "report.txt.tmp").string();

    try {
        Timer t_load;
        SemanticGraph graph =
            load_graph(config.synsets_path, config.edges_path, GraphLoadOptions{config.symmetrize});
        Lexicon lexicon = build_lexicon(graph, config.ranking_path);
        StopwordSet stopwords;
        if (!config.stopwords_path.empty()) stopwords = StopwordSet::load(config.stopwords_path);
        ProfileStore store(config.store_dir, graph);
        report.timings.emplace_back("load", t_load.seconds());

        // score every target occurrence, feed candidates straight into the
        // bounded per-bucket selection
        stage = "score";
        Timer t_score;
        Selector selector(lexicon, graph, config.selection);
        ScoreCounters score_counters;
        {
            RawCorpusReader reader(config.corpus_path);
            FilteredSentenceStream stream(reader, lexicon, config.pos_filter);

            using Batch = std::vector<FilteredSentenceStream::Item>;
            constexpr size_t kBatchSentences = 64;
            auto produce = [&]() -> std::optional<Batch> {
                Batch batch;
                while (batch.size() < kBatchSentences) {
                    auto item = stream.next();
                    if (!item) break;
                    batch.push_back(std::move(*item));
                }
                if (batch.empty()) return std::nullopt;
                return batch;
            };
            struct Scored {
                std::vector<ScoredCandidate> candidates;
                ScoreCounters counters;
            };
            auto work = [&](Batch&& batch) {
                Scored out;
                for (const auto& item : batch) {
                    for (int32_t target : item.targets) {
                        SenseDistribution dist =
                            score_occurrence(item.sentence, static_cast<size_t>(target), lexicon,
                                             store, graph, config.prior, stopwords, &out.counters);
                        ScoredCandidate c;
                        c.sentence_id = item.sentence.id;
                        c.line_no = item.sentence.line_no;
                        c.target_index = target;
                        c.lemma = dist.target_lemma;
                        c.pos = dist.target_pos;
                        c.sense = dist.argmax();
                        c.conf = dist.confidence;
                        c.distribution = std::move(dist.probabilities);
                        out.candidates.push_back(std::move(c));
                    }
                }
                return out;
            };
            auto consume = [&](Scored&& scored) {
                score_counters.occurrences_scored += scored.counters.occurrences_scored;
                score_counters.senses_missing_profile += scored.counters.senses_missing_profile;
                for (auto& c : scored.candidates) selector.add(std::move(c));
            };
            ordered_pipeline(produce, work, consume, config.threads);

            report.sentences_total = stream.counters().lines;
            report.sentences_skipped_empty = stream.counters().skipped_empty;
            report.sentences_skipped_malformed = stream.counters().skipped_malformed;
            report.sentences_without_targets = stream.counters().without_targets;
        }
        report.occurrences_scored = score_counters.occurrences_scored;
        report.senses_missing_profile = score_counters.senses_missing_profile;
        report.timings.emplace_back("score", t_score.seconds());

        stage = "select";
        Timer t_select;
        SelectionResult selection = selector.finish();
        report.dropped_unknown_sense = selection.dropped_unknown_sense;
        report.dropped_below_min_confidence = selection.dropped_below_min_confidence;
        report.dropped_over_quota = selection.dropped_over_quota;

        std::map<std::pair<int64_t, int32_t>, KeptAnnotation> kept;  // (line, token) -> record
        for (auto& bucket : selection.buckets) {
            BucketSummary summary;
            summary.lemma = bucket.lemma;
            summary.pos = bucket.pos;
            summary.sense_id = graph.id_of(bucket.sense);
            summary.sense_index = bucket.sense_index;
            summary.quota = bucket.quota;
            summary.candidates = bucket.candidates;
            summary.kept = static_cast<int64_t>(bucket.kept.size());
            report.selection.push_back(std::move(summary));
            for (auto& c : bucket.kept) {
                KeptAnnotation a{c.sentence_id, c.lemma,  c.pos,
                                 c.sense,       c.conf,   std::move(c.distribution)};
                kept.emplace(std::make_pair(c.line_no, c.target_index), std::move(a));
            }
        }
        report.annotations_emitted = static_cast<int64_t>(kept.size());
        report.timings.emplace_back("select", t_select.seconds());

        // second corpus pass: emit the kept annotations in corpus order with
        // their surface text
        stage = "emit";
        Timer t_emit;
        {
            std::ofstream tsv(tsv_tmp, std::ios::binary | std::ios::trunc);
            if (!tsv) throw Error("cannot open " + tsv_tmp + " for writing");
            tsv << kAnnotatedTsvHeader << '\n';
            RawCorpusReader reader(config.corpus_path);
            auto it = kept.begin();
            while (it != kept.end()) {
                auto raw = reader.next();
                if (!raw) throw Error("corpus shrank between passes: " + config.corpus_path);
                if (raw->line_no != it->first.first) continue;
                auto parsed = parse_sentence_line(raw->text, raw->line_no, reader.stem());
                const Sentence& sentence = std::get<Sentence>(parsed);
                std::string surfaces;
                for (size_t i = 0; i < sentence.tokens.size(); ++i) {
                    if (i) surfaces += ' ';
                    surfaces += sentence.tokens[i].surface;
                }
                for (; it != kept.end() && it->first.first == raw->line_no; ++it) {
                    const KeptAnnotation& a = it->second;
                    tsv << a.sentence_id << '\t' << it->first.second << '\t' << a.lemma << '\t'
                        << pos_char(a.pos) << '\t' << graph.id_of(a.sense) << '\t' << fixed6(a.conf)
                        << '\t' << render_distribution(a.distribution, graph) << '\t' << surfaces
                        << '\n';
                }
            }
            tsv.flush();
            if (!tsv) throw Error("write failed on " + tsv_tmp);
        }
        report.annotations_path = (out_dir / "annotations.tsv").string();
        fs::rename(tsv_tmp, report.annotations_path);
        report.timings.emplace_back("emit", t_emit.seconds());

        stage = "stats";
        Timer t_stats;
        report.stats = compute_stats(report.annotations_path, lexicon);
        report.timings.emplace_back("stats", t_stats.seconds());

        stage = "report";
        {
            std::ofstream rep(report_tmp, std::ios::binary | std::ios::trunc);
            if (!rep) throw Error("cannot open " + report_tmp + " for writing");
            rep << "# senseforge run report\n";
            rep << "[config]\n";
            rep << "corpus=" << config.corpus_path << '\n';
            rep << "store=" << config.store_dir << '\n';
            rep << "synsets=" << config.synsets_path << '\n';
            rep << "edges=" << config.edges_path << '\n';
            rep << "ranking=" << (config.ranking_path.empty() ? "-" : config.ranking_path) << '\n';
            rep << "stopwords=" << (config.stopwords_path.empty() ? "-" : config.stopwords_path)
                << '\n';
            rep << "symmetrize=" << (config.symmetrize ? "true" : "false") << '\n';
            rep << "k=" << config.selection.k << '\n';
            rep << "z=" << shortest_double(config.selection.z) << '\n';
            rep << "prior=" << (config.prior == PriorKind::Uniform ? "uniform" : "zipf") << '\n';
            rep << "min_confidence=" << shortest_double(config.selection.min_confidence) << '\n';
            rep << "pos=" << (config.pos_filter ? std::string(1, pos_char(*config.pos_filter)) : "all")
                << '\n';
            rep << "threads=" << config.threads << '\n';
            rep << "\n[counters]\n";
            rep << "sentences_total=" << report.sentences_total << '\n';
            rep << "sentences_skipped_empty=" << report.sentences_skipped_empty << '\n';
            rep << "sentences_skipped_malformed=" << report.sentences_skipped_malformed << '\n';
            rep << "sentences_without_targets=" << report.sentences_without_targets << '\n';
            rep << "occurrences_scored=" << report.occurrences_scored << '\n';
            rep << "senses_missing_profile=" << report.senses_missing_profile << '\n';
            rep << "candidates_dropped_unknown_sense=" << report.dropped_unknown_sense << '\n';
            rep << "candidates_dropped_below_min_confidence="
                << report.dropped_below_min_confidence << '\n';
            rep << "candidates_dropped_over_quota=" << report.dropped_over_quota << '\n';
            rep << "annotations_emitted=" << report.annotations_emitted << '\n';
            rep << "\n[stats]\n";
            rep << "annotation_count=" << report.stats.annotation_count << '\n';
            rep << "distinct_lemmas=" << report.stats.distinct_lemmas << '\n';
            rep << "distinct_senses=" << report.stats.distinct_senses << '\n';
            rep << "avg_sentences_per_sense=" << fixed6(report.stats.avg_sentences_per_sense)
                << '\n';
            rep << "avg_confidence=" << fixed6(report.stats.avg_confidence) << '\n';
            rep << "avg_confidence_x100=" << fixed6(report.stats.avg_confidence * 100.0) << '\n';
            rep << "avg_polysemy=" << fixed6(report.stats.avg_polysemy) << '\n';
            rep << "\n[selection]\n";
            rep << "# lemma\tpos\tsense\tindex\tquota\tcandidates\tkept\n";
            for (const auto& b : report.selection)
                rep << b.lemma << '\t' << pos_char(b.pos) << '\t' << b.sense_id << '\t'
                    << b.sense_index << '\t' << b.quota << '\t' << b.candidates << '\t' << b.kept
                    << '\n';
            rep << "\n[timings]\n";
            for (const auto& [name, secs] : report.timings)
                rep << name << "_s=" << fixed6(secs) << '\n';
            rep.flush();
            if (!rep) throw Error("write failed on " + report_tmp);
        }
        report.report_path = (out_dir / "report.txt").string();
        fs::rename(report_tmp, report.report_path);
        return report;
    } catch (const std::exception& e) {
        remove_if_exists(tsv_tmp);
        remove_if_exists(report_tmp);
        throw Error("annotate/" + stage + ": " + e.what());
    }
}

CorpusStats compute_stats(const std::string& annotated_path, const Lexicon& lexicon) {
    std::ifstream in(annotated_path, std::ios::binary);
    if (!in) throw Error("cannot open " + annotated_path);

    CorpusStats stats;
    std::unordered_map<std::string, int64_t> lemma_polysemy;  // "lemma\tpos" -> candidates
    std::unordered_set<std::string> senses;
    double conf_sum = 0.0;

    std::string line;
    long long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split(line, '\t');
        if (fields.size() != 8)
            throw file_error(annotated_path, lineno, "expected 8 tab-separated fields");
        auto target_index = parse_int(fields[1]);
        if (!target_index || *target_index < 0)
            throw file_error(annotated_path, lineno, "bad target index");
        std::string lemma(fields[2]);
        auto pos = parse_pos(fields[3]);
        if (!pos) throw file_error(annotated_path, lineno, "bad POS '" + std::string(fields[3]) + "'");
        auto conf = parse_double(fields[5]);
        if (!conf || *conf < 0.0 || *conf > 1.0 + 1e-9)
            throw file_error(annotated_path, lineno, "bad confidence");

        const auto* entry = lexicon.find(lemma, *pos);
        if (!entry)
            throw file_error(annotated_path, lineno,
                             "lemma '" + lemma + "' (" + std::string(fields[3]) +
                                 ") has no lexicon entry");
        stats.annotation_count++;
        conf_sum += *conf;
        senses.insert(std::string(fields[4]));
        lemma_polysemy.emplace(lemma + "\t" + std::string(fields[3]),
                               static_cast<int64_t>(entry->size()));
    }

    stats.distinct_lemmas = static_cast<int64_t>(lemma_polysemy.size());
    stats.distinct_senses = static_cast<int64_t>(senses.size());
    if (stats.distinct_senses > 0)
        stats.avg_sentences_per_sense = static_cast<double>(stats.annotation_count) /
                                        static_cast<double>(stats.distinct_senses);
    if (stats.annotation_count > 0)
        stats.avg_confidence = conf_sum / static_cast<double>(stats.annotation_count);
    if (!lemma_polysemy.empty()) {
        double poly_sum = 0.0;
        for (const auto& [key, count] : lemma_polysemy) poly_sum += static_cast<double>(count);
        stats.avg_polysemy = poly_sum / static_cast<double>(lemma_polysemy.size());
    }
    return stats;
}

}  // namespace senseforge
