#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <thread>

#include "senseforge/graph.hpp"
#include "senseforge/lexicon.hpp"
#include "senseforge/pipeline.hpp"
#include "senseforge/profile_store.hpp"
#include "senseforge/text.hpp"

using namespace senseforge;

namespace {

// One parseable line on stderr for every fatal error.
int fail(const std::string& stage, const std::string& message) {
    std::cerr << "error\t" << stage << "\t" << message << std::endl;
    return 1;
}

int default_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct CommonGraphArgs {
    std::string synsets;
    std::string edges;
    std::string ranking;
    bool no_symmetrize = false;
};

void add_graph_flags(CLI::App* cmd, CommonGraphArgs& args, bool edges_required,
                     bool with_ranking) {
    cmd->add_option("--synsets", args.synsets, "Synsets file (ID<TAB>POS<TAB>lemma1|lemma2|...)")
        ->required();
    auto* edges = cmd->add_option("--edges", args.edges, "Edges file (SRC_ID<TAB>DST_ID)");
    if (edges_required) edges->required();
    if (with_ranking)
        cmd->add_option("--ranking", args.ranking,
                        "Sense ranking file (LEMMA<TAB>POS<TAB>ID1,ID2,...); default: file order");
    cmd->add_flag("--no-symmetrize", args.no_symmetrize,
                  "Keep edges directed instead of mirroring them");
}

const CLI::Validator OpenUnitInterval(
    [](std::string& s) -> std::string {
        auto v = parse_double(s);
        if (!v || !(*v > 0.0 && *v < 1.0)) return std::string("value must be in (0,1) exclusive");
        return {};
    },
    "FLOAT in (0,1)");

std::string pos_to_string(const std::optional<Pos>& p) {
    return p ? std::string(1, pos_char(*p)) : "all";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"senseforge: sense-annotates a raw corpus against a semantic graph"};
    app.require_subcommand(1);
    app.set_config("--config")->description("key=value config file, overridden by flags");
    app.set_version_flag("--version", "senseforge 0.1.0");

    // ---- profile ----
    auto* profile_cmd =
        app.add_subcommand("profile", "Compute a lexical profile for every synset");
    CommonGraphArgs profile_graph;
    add_graph_flags(profile_cmd, profile_graph, /*edges_required=*/true, /*with_ranking=*/false);
    PprParams ppr_params;
    std::string profile_out;
    int profile_threads = default_threads();
    bool resume = false;
    profile_cmd->add_option("--alpha", ppr_params.alpha, "Damping factor, in (0,1)")
        ->capture_default_str()
        ->check(OpenUnitInterval);
    profile_cmd->add_option("--epsilon", ppr_params.epsilon, "L1 convergence threshold")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    profile_cmd->add_option("--max-iters", ppr_params.max_iters, "Power iteration cap")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    profile_cmd->add_option("--top-n", ppr_params.top_n, "Entries kept per profile")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    profile_cmd->add_option("--threads", profile_threads, "Worker count")
        ->capture_default_str()
        ->envname("SENSEFORGE_THREADS")
        ->check(CLI::PositiveNumber);
    profile_cmd->add_flag("--resume", resume, "Skip synsets already in the store");
    profile_cmd->add_option("--out", profile_out, "Profile store directory")->required();

    // ---- annotate ----
    auto* annotate_cmd =
        app.add_subcommand("annotate", "Sense-annotate a corpus using a profile store");
    CommonGraphArgs annotate_graph;
    add_graph_flags(annotate_cmd, annotate_graph, /*edges_required=*/true, /*with_ranking=*/true);
    RunConfig run_config;
    std::string prior = "uniform";
    std::string pos = "all";
    run_config.threads = default_threads();
    annotate_cmd->add_option("--store", run_config.store_dir, "Profile store directory")
        ->required();
    annotate_cmd->add_option("--corpus", run_config.corpus_path, "Raw corpus file")->required();
    annotate_cmd->add_option("--stopwords", run_config.stopwords_path,
                             "Stopword file (one lemma per line)");
    annotate_cmd->add_option("--k", run_config.selection.k, "Examples for the first sense")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    annotate_cmd->add_option("--z", run_config.selection.z, "Zipf exponent for sense quotas")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    annotate_cmd->add_option("--prior", prior, "Sense prior P(s|w)")
        ->capture_default_str()
        ->check(CLI::IsMember({"uniform", "zipf"}));
    annotate_cmd
        ->add_option("--min-confidence", run_config.selection.min_confidence,
                     "Drop candidates below this margin")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    annotate_cmd->add_option("--pos", pos, "Restrict targets to one part of speech")
        ->capture_default_str()
        ->check(CLI::IsMember({"n", "v", "a", "r", "all"}));
    annotate_cmd->add_option("--threads", run_config.threads, "Worker count")
        ->capture_default_str()
        ->envname("SENSEFORGE_THREADS")
        ->check(CLI::PositiveNumber);
    annotate_cmd->add_option("--out", run_config.out_dir, "Output directory")->required();

    // ---- stats ----
    auto* stats_cmd = app.add_subcommand("stats", "Summarize an annotated corpus");
    CommonGraphArgs stats_graph;
    add_graph_flags(stats_cmd, stats_graph, /*edges_required=*/false, /*with_ranking=*/true);
    std::string annotated_path;
    stats_cmd->add_option("annotations", annotated_path, "Annotated TSV file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (profile_cmd->parsed()) {
            ppr_params.validate();
            std::cerr << "[profile] loading graph from " << profile_graph.synsets << "\n";
            SemanticGraph graph = load_graph(profile_graph.synsets, profile_graph.edges,
                                             GraphLoadOptions{!profile_graph.no_symmetrize});
            DegreeStats deg = degree_stats(graph);
            std::cerr << "[profile] nodes=" << deg.nodes << " edges=" << deg.directed_edges
                      << " dangling=" << deg.dangling << "\n";
            ProfileAllOptions options;
            options.threads = profile_threads;
            options.resume = resume;
            ProfileAllReport rep = profile_all(graph, ppr_params, profile_out, options);
            std::cerr << "[profile] computed=" << rep.computed
                      << " skipped_existing=" << rep.skipped_existing
                      << " not_converged=" << rep.not_converged << "\n";
            return 0;
        }
        if (annotate_cmd->parsed()) {
            run_config.synsets_path = annotate_graph.synsets;
            run_config.edges_path = annotate_graph.edges;
            run_config.ranking_path = annotate_graph.ranking;
            run_config.symmetrize = !annotate_graph.no_symmetrize;
            run_config.prior = prior == "zipf" ? PriorKind::Zipf : PriorKind::Uniform;
            if (pos != "all") run_config.pos_filter = parse_pos(pos);
            RunReport rep = run(run_config);
            for (const auto& [name, secs] : rep.timings)
                std::cerr << "[annotate] stage " << name << ": " << fixed6(secs) << "s\n";
            std::cerr << "[annotate] annotations=" << rep.annotations_emitted << " -> "
                      << rep.annotations_path << "\n";
            return 0;
        }
        if (stats_cmd->parsed()) {
            SemanticGraph graph = load_graph(stats_graph.synsets, stats_graph.edges,
                                             GraphLoadOptions{!stats_graph.no_symmetrize});
            Lexicon lexicon = build_lexicon(graph, stats_graph.ranking);
            CorpusStats st = compute_stats(annotated_path, lexicon);
            std::cout << "Number of annotations          " << st.annotation_count << "\n"
                      << "Distinct lemmas covered        " << st.distinct_lemmas << "\n"
                      << "Distinct senses covered        " << st.distinct_senses << "\n"
                      << "Average # of sentences/sense   " << fixed6(st.avg_sentences_per_sense)
                      << "\n"
                      << "Average confidence score       " << fixed6(st.avg_confidence) << " ("
                      << fixed6(st.avg_confidence * 100.0) << " x100)\n"
                      << "Average polysemy               " << fixed6(st.avg_polysemy) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        if (profile_cmd->parsed()) return fail("profile", e.what());
        if (annotate_cmd->parsed()) return fail("annotate", e.what());
        return fail("stats", e.what());
    }
    return 0;
}
