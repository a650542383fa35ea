// phrasemine: corpus mining pipeline and its applications.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "phrasemine/artifacts.hpp"
#include "phrasemine/service.hpp"

using namespace phrasemine;
namespace fs = std::filesystem;

namespace {

std::string default_dir() {
    const char* env = std::getenv("PHRASEMINE_OUT");
    return env && *env ? env : "out";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Writes to the named file, or stdout when the name is empty or "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
        file_.open(path, std::ios::binary);
        if (!file_) throw IoError("cannot write " + path);
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

struct ConfigFlags {
    ModelConfig config;
    std::string unit_mode = "line";

    void attach(CLI::App* cmd) {
        cmd->add_option("--theta", config.theta, "halting slack")->capture_default_str();
        cmd->add_option("--fw-divisor", config.fw_divisor, "function words need multiplicity >= units / divisor")
            ->capture_default_str();
        cmd->add_option("--fw-sum", config.fw_sum, "minimum boosted prefix + suffix probability")->capture_default_str();
        cmd->add_option("--fw-ratio", config.fw_ratio, "bound on the prefix / suffix probability ratio")
            ->capture_default_str();
        cmd->add_option("--max-iterations", config.max_iterations)->capture_default_str();
        cmd->add_option("--unit-mode", unit_mode, "line or paragraph")
            ->check(CLI::IsMember({"line", "paragraph"}))
            ->capture_default_str();
    }
};

struct ModelFlags {
    std::string dir = default_dir();
    std::string corpus;

    void attach(CLI::App* cmd) {
        cmd->add_option("-m,--model-dir", dir, "output directory of `mine` (env PHRASEMINE_OUT)")->capture_default_str();
        cmd->add_option("--corpus", corpus, "corpus file, if it moved since `mine`");
    }
    MinedModel load() const { return load_mined_model(dir, corpus); }
};

void print_index_stats(std::ostream& out, const Corpus& corpus, const SymmetricIndex& index) {
    out << "units\t" << corpus.unit_count() << "\nsymbols\t" << corpus.symbol_count() << "\nstates\t"
        << index.state_count() << "\ntransitions\t" << index.transition_count() << "\ncandidates\t"
        << index.candidate_count() - 1 << "\ndigest\t" << corpus.digest() << '\n';
}

int cmd_mine(const std::string& corpus_path, const std::string& dir, ConfigFlags flags, unsigned threads,
             bool verbose) {
    flags.config.threads = threads;
    flags.config.validate();
    MineOutputs o;
    o.dir = dir;
    o.corpus_path = corpus_path;
    o.unit_mode = parse_unit_mode(flags.unit_mode);

    auto t0 = std::chrono::steady_clock::now();
    const Corpus corpus = Corpus::load(corpus_path, o.unit_mode);
    o.timings["load"] = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const SymmetricIndex index = SymmetricIndex::build(corpus);
    o.timings["index"] = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const FittedModel model = fit(index, flags.config, [&](const IterationRecord& r) {
        if (verbose)
            std::fprintf(stderr, "pass %u  rho %.6g  delta %.6g  %.2fs\n", r.iteration, r.rho, r.delta, r.seconds);
    });
    o.timings["fit"] = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    const auto fws = select_function_words(model, flags.config, index);
    const auto phrases = select_phrases(model, fws, index);
    o.timings["select"] = seconds_since(t0);

    o.corpus = &corpus;
    o.index = &index;
    o.config = &flags.config;
    o.model = &model;
    o.fws = &fws;
    o.phrases = &phrases;
    write_mine_outputs(o);
    std::fprintf(stderr, "%zu units, %zu function words, %zu phrases, %u iterations -> %s\n", corpus.unit_count(),
                 fws.size(), phrases.support(), model.final_iteration, dir.c_str());
    return 0;
}

int cmd_decompose(const MinedModel& m, const std::vector<std::uint32_t>& units, bool brackets, unsigned threads,
                  std::ostream& out) {
    const StatsTable stats = compute_stats(m.model.phrases, m.index, threads);
    const auto weights = weights_from_probabilities(stats.p_fw());
    auto one = [&](std::uint32_t u) {
        if (u >= m.index.unit_count()) throw Error("unit " + std::to_string(u) + " out of range");
        const auto d = decompose_sentence(m.index, u, weights, true);
        if (brackets)
            out << u << '\t' << bracket_notation(m.index.unit_text(u), d.path) << '\n';
        else
            write_decomposition(out, d);
    };
    if (units.empty())
        for (std::uint32_t u = 0; u < m.index.unit_count(); ++u) one(u);
    else
        for (auto u : units) one(u);
    return 0;
}

int cmd_subphrase(const MinedModel& m, const std::vector<std::string>& phrases, std::size_t instances,
                  std::ostream& out) {
    SubphraseModel sub(m.index, m.model, m.fws);
    if (phrases.empty()) {
        std::size_t malformed = 0;
        write_schemes(out, sub.all_schemes(m.phrases, instances, &malformed));
        if (malformed) std::fprintf(stderr, "%zu phrases without a scheme\n", malformed);
        return 0;
    }
    for (const auto& p : phrases) {
        const auto id = m.index.candidate_id(decode_utf8(p));
        if (!id || *id == kEmptyCandidate) throw NotFoundError("\"" + p + "\" is not a phrase candidate");
        const auto tree = sub.tree(*id);
        write_tree(out, tree, m.index);
        const auto s = sub.scheme(tree);
        out << "scheme\t" << escape_field(s.render()) << "\tkernels";
        for (const auto& k : s.kernels) out << '\t' << tsv_text(k);
        out << "\nunique\t" << (sub.unique_leaf_representation(*id) ? "yes" : "no") << "\n\n";
    }
    return 0;
}

KernelRanking keyword_ranking(const MinedModel& m) {
    SubphraseModel sub(m.index, m.model, m.fws);
    const MssForest forest = build_mss_forest(sub, m.phrases);
    return characteristic_kernels(forest, sub);
}

int cmd_serve(const ModelFlags& model, const std::string& host, int port) {
    Service service;
    HttpServer server(service);
    const int bound = server.bind(host, port);
    std::fprintf(stderr, "listening on http://%s:%d\n", host.c_str(), bound);
    // Requests are answered with 503 until the model is in memory.
    std::thread loader([&] {
        try {
            service.set_model(std::make_shared<const ServiceModel>(model.load()));
            std::fprintf(stderr, "model loaded from %s\n", model.dir.c_str());
        } catch (const std::exception& e) {
            std::fprintf(stderr, "phrasemine: error: %s\n", e.what());
            server.wait_until_ready();
            server.stop();
        }
    });
    server.run();
    loader.join();
    return service.model() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unsupervised mining of function words, phrases and kernels from raw text"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads, 0 = one per core")->capture_default_str();
    std::string out_path;

    // index
    auto* index_cmd = app.add_subcommand("index", "build or inspect the substring index");
    index_cmd->require_subcommand(1);
    std::string corpus_path, unit_mode = "line";
    std::string index_dir = default_dir();
    auto* index_build = index_cmd->add_subcommand("build", "write index.bin for a corpus");
    index_build->add_option("corpus", corpus_path)->required()->check(CLI::ExistingFile);
    index_build->add_option("-o,--output", index_dir, "output directory")->capture_default_str();
    auto* index_stats = index_cmd->add_subcommand("stats", "print index size figures");
    index_stats->add_option("corpus", corpus_path)->required()->check(CLI::ExistingFile);
    for (auto* c : {index_build, index_stats})
        c->add_option("--unit-mode", unit_mode)->check(CLI::IsMember({"line", "paragraph"}))->capture_default_str();

    // mine
    auto* mine = app.add_subcommand("mine", "fit the model and write function words and phrases");
    ConfigFlags config;
    config.attach(mine);
    std::string mine_dir = default_dir();
    bool verbose = false;
    mine->add_option("corpus", corpus_path)->required()->check(CLI::ExistingFile);
    mine->add_option("-o,--output", mine_dir, "output directory (env PHRASEMINE_OUT)")->capture_default_str();
    mine->add_flag("-v,--verbose", verbose, "report every pass");

    ModelFlags model;
    auto with_model = [&](CLI::App* c) {
        model.attach(c);
        c->add_option("-o,--output", out_path, "output file, default stdout");
        return c;
    };

    auto* decompose = with_model(app.add_subcommand("decompose", "optimal decompositions of corpus units"));
    std::vector<std::uint32_t> units;
    bool brackets = false;
    decompose->add_option("--unit", units, "unit ids, default all");
    decompose->add_flag("--brackets", brackets, "one representative decomposition in bracket notation");

    auto* subphrase = with_model(app.add_subcommand("subphrase", "decomposition trees and functional schemes"));
    std::vector<std::string> phrase_args;
    std::size_t instances = 3;
    subphrase->add_option("phrase", phrase_args, "phrases to show; default: scheme table of all phrases");
    subphrase->add_option("--instances", instances, "example phrases per scheme")->capture_default_str();

    auto* islands = with_model(app.add_subcommand("islands", "extended islands in corpus order"));
    std::string abstract_path;
    islands->add_option("--abstract", abstract_path, "also write the abstract corpus here");

    auto* schemes = with_model(app.add_subcommand("schemes", "phrases of the abstract corpus with island slots"));
    std::size_t scheme_instances = 5;
    schemes->add_option("--instances", scheme_instances, "instances per scheme")->capture_default_str();

    auto* keywords = with_model(app.add_subcommand("keywords", "characteristic kernels"));

    auto* terms = with_model(app.add_subcommand("terms", "kernels ranked low in comparison corpora"));
    std::vector<std::string> compare;
    std::uint32_t rank_cut = 1000;
    terms->add_option("--compare", compare, "ranking files from `keywords` on other corpora")
        ->required()
        ->check(CLI::ExistingFile);
    terms->add_option("--rank-cut", rank_cut, "drop kernels ranked above this elsewhere")->capture_default_str();

    auto* expand = with_model(app.add_subcommand("expand", "phrases around a kernel"));
    std::string query;
    std::size_t limit = 20;
    expand->add_option("query", query)->required();
    expand->add_option("--limit", limit)->check(CLI::PositiveNumber)->capture_default_str();

    auto* network = with_model(app.add_subcommand("network", "atom co-occurrence network"));
    std::vector<std::string> seeds;
    std::string format = "tsv";
    network->add_option("--seed", seeds, "keep edges touching these atoms or kernels");
    network->add_option("--format", format)->check(CLI::IsMember({"tsv", "dot"}))->capture_default_str();

    auto* stats = with_model(app.add_subcommand("stats", "phrase usage by word count"));

    auto* serve = app.add_subcommand("serve", "HTTP API over a mined model");
    model.attach(serve);
    std::string host = "127.0.0.1";
    int port = 8080;
    serve->add_option("--host", host)->capture_default_str();
    serve->add_option("--port", port)->check(CLI::Range(0, 65535))->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (index_build->parsed() || index_stats->parsed()) {
            const Corpus corpus = Corpus::load(corpus_path, parse_unit_mode(unit_mode));
            const SymmetricIndex index = SymmetricIndex::build(corpus);
            if (index_build->parsed()) {
                fs::create_directories(index_dir);
                index.save(fs::path(index_dir) / "index.bin", corpus.digest());
            }
            print_index_stats(std::cout, corpus, index);
            return 0;
        }
        if (mine->parsed()) return cmd_mine(corpus_path, mine_dir, config, threads, verbose);
        if (serve->parsed()) return cmd_serve(model, host, port);

        const MinedModel m = model.load();
        Output out(out_path);
        std::ostream& os = out.stream();
        if (decompose->parsed()) return cmd_decompose(m, units, brackets, threads, os);
        if (subphrase->parsed()) return cmd_subphrase(m, phrase_args, instances, os);
        if (islands->parsed() || schemes->parsed()) {
            const auto found = extended_islands(m.index, m.fws);
            if (islands->parsed()) {
                write_islands(os, found);
                if (!abstract_path.empty()) {
                    Output a(abstract_path);
                    const auto abstract = abstract_corpus(m.corpus, found);
                    for (const auto& u : abstract.corpus.units()) a.stream() << render_abstract(u) << '\n';
                }
                return 0;
            }
            ModelConfig cfg = m.config;
            cfg.threads = threads;
            write_island_schemes(os, island_schemes(abstract_corpus(m.corpus, found), cfg, scheme_instances));
            return 0;
        }
        if (keywords->parsed()) {
            write_ranking(os, keyword_ranking(m));
            return 0;
        }
        if (terms->parsed()) {
            std::vector<KernelRanking> others;
            std::vector<std::string> labels;
            for (const auto& f : compare) {
                others.push_back(load_ranking(f));
                labels.push_back(fs::path(f).stem().string());
            }
            write_ranking(os, terminological_kernels(keyword_ranking(m), others, rank_cut), labels);
            return 0;
        }
        if (expand->parsed()) {
            const auto mask = function_word_mask(m.fws, m.index.candidate_count());
            write_expansions(os, kernel_expansion(decode_utf8(query), m.phrases, mask, m.index, limit));
            return 0;
        }
        if (network->parsed()) {
            SubphraseModel sub(m.index, m.model, m.fws);
            const MssForest forest = build_mss_forest(sub, m.phrases);
            std::vector<Text> seed_texts;
            for (const auto& s : seeds) seed_texts.push_back(decode_utf8(s));
            const auto net = phrase_network(sub, forest, m.phrases, seed_texts);
            if (format == "dot") write_network_dot(os, net, m.index); else write_network_tsv(os, net, m.index);
            return 0;
        }
        if (stats->parsed()) {
            write_length_stats(os, length_stats(m.phrases, m.index));
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "phrasemine: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
