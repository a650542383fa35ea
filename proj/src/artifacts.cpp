#include "phrasemine/artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace phrasemine {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    for (int precision = 6; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string tsv_text(TextView t) { return escape_field(encode_utf8(t)); }

Text parse_tsv_text(std::string_view field) { return decode_utf8(unescape_field(field)); }

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t at = 0;
    while (true) {
        const auto tab = line.find('\t', at);
        out.push_back(line.substr(at, tab == std::string::npos ? std::string::npos : tab - at));
        if (tab == std::string::npos) break;
        at = tab + 1;
    }
    return out;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    return out;
}

std::ifstream open_in(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    return in;
}

CandidateId require_candidate(const SymmetricIndex& index, const Text& t, const fs::path& where) {
    const auto id = index.candidate_id(t);
    if (!id) throw ArtifactError(where.string() + ": \"" + encode_utf8(t) + "\" is not a candidate of the corpus");
    return *id;
}

const char* unit_mode_name(UnitMode m) { return m == UnitMode::line ? "line" : "paragraph"; }

PhraseMultiset read_phrase_table(const fs::path& p, const SymmetricIndex& index) {
    PhraseMultiset out(index.candidate_count());
    auto in = open_in(p);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_tabs(line);
        if (f.size() < 2) throw ArtifactError(p.string() + ": short row");
        out.set(require_candidate(index, parse_tsv_text(f[0]), p), static_cast<std::uint32_t>(std::stoul(f[1])));
    }
    return out;
}

}  // namespace

void write_function_words(std::ostream& out, const std::vector<FunctionWord>& fws) {
    out << "text\tmultiplicity\tpref\tsuff\tinf\tov\tp_pref\tp_suf\tp_pref_boosted\tp_suf_boosted\tp_fw\n";
    for (const auto& f : fws) {
        const auto& s = f.stats;
        out << tsv_text(f.text) << '\t' << f.overlap_multiplicity << '\t' << s.pref << '\t' << s.suff << '\t' << s.inf
            << '\t' << s.ov << '\t' << format_double(s.p_pref) << '\t' << format_double(s.p_suf) << '\t'
            << format_double(s.p_pref_boosted) << '\t' << format_double(s.p_suf_boosted) << '\t'
            << format_double(s.p_fw()) << '\n';
    }
}

void write_phrases(std::ostream& out, const PhraseMultiset& phrases, const SymmetricIndex& index) {
    out << "text\tmultiplicity\tocc\n";
    for (const auto& [id, m] : phrases.entries())
        out << tsv_text(index.candidate_text(id)) << '\t' << m << '\t' << index.candidate_occ(id) << '\n';
}

void write_trace(std::ostream& out, const std::vector<IterationRecord>& trace) {
    out << "iteration,rho,delta,unit_share,boost_violations,undecomposable\n";
    for (const auto& r : trace) {
        out << r.iteration << ',' << format_double(r.rho) << ',' << format_double(r.delta) << ','
            << format_double(r.unit_share) << ',' << r.boost_violations << ',' << r.undecomposable << '\n';
    }
}

void write_mine_outputs(const MineOutputs& o) {
    fs::create_directories(o.dir);
    {
        auto f = open_out(o.dir / "function-words.tsv");
        write_function_words(f, *o.fws);
    }
    {
        auto f = open_out(o.dir / "phrases.tsv");
        write_phrases(f, *o.phrases, *o.index);
    }
    {
        auto f = open_out(o.dir / "model-phrases.tsv");
        write_phrases(f, o.model->phrases, *o.index);
    }
    {
        auto f = open_out(o.dir / "rho-trace.csv");
        write_trace(f, o.model->trace);
    }
    const std::string digest = o.corpus->digest();
    o.index->save(o.dir / "index.bin", digest);

    const auto& c = *o.config;
    json m;
    m["corpus"] = {{"path", fs::absolute(o.corpus_path).lexically_normal().string()},
                   {"digest", digest},
                   {"units", o.corpus->unit_count()},
                   {"symbols", o.corpus->symbol_count()},
                   {"unit_mode", unit_mode_name(o.unit_mode)}};
    m["config"] = {{"theta", c.theta},       {"fw_divisor", c.fw_divisor},         {"fw_sum", c.fw_sum},
                   {"fw_ratio", c.fw_ratio}, {"max_iterations", c.max_iterations}};
    m["final_iteration"] = o.model->final_iteration;
    m["boost_violations"] = o.model->boost_violations;
    m["function_words"] = o.fws->size();
    m["phrases"] = o.phrases->support();
    m["timings"] = o.timings;
    m["outputs"] = {"function-words.tsv", "phrases.tsv", "model-phrases.tsv", "rho-trace.csv", "index.bin"};
    auto f = open_out(o.dir / "manifest.json");
    f << m.dump(2) << '\n';
}

MinedModel load_mined_model(const fs::path& dir, const fs::path& corpus_override) {
    json m;
    try {
        auto in = open_in(dir / "manifest.json");
        m = json::parse(in);
    } catch (const json::exception& e) {
        throw ArtifactError((dir / "manifest.json").string() + ": " + e.what());
    }
    MinedModel out;
    try {
        out.corpus_path = corpus_override.empty() ? fs::path(m.at("corpus").at("path").get<std::string>()) : corpus_override;
        out.unit_mode = parse_unit_mode(m.at("corpus").at("unit_mode").get<std::string>());
        const auto& c = m.at("config");
        out.config.theta = c.at("theta").get<double>();
        out.config.fw_divisor = c.at("fw_divisor").get<double>();
        out.config.fw_sum = c.at("fw_sum").get<double>();
        out.config.fw_ratio = c.at("fw_ratio").get<double>();
        out.config.max_iterations = c.at("max_iterations").get<unsigned>();
        out.model.final_iteration = m.at("final_iteration").get<std::uint32_t>();
    } catch (const json::exception& e) {
        throw ArtifactError((dir / "manifest.json").string() + ": " + e.what());
    }
    out.corpus = Corpus::load(out.corpus_path, out.unit_mode);
    const std::string digest = out.corpus.digest();
    if (digest != m["corpus"]["digest"].get<std::string>())
        throw ArtifactError("corpus " + out.corpus_path.string() + " does not match the mined model");
    try {
        out.index = SymmetricIndex::load(dir / "index.bin", digest);
    } catch (const Error&) {
        out.index = SymmetricIndex::build(out.corpus);
    }

    const std::size_t universe = out.index.candidate_count();
    out.model.stats.by_candidate.assign(universe, FunctionWordStats{});
    {
        const fs::path p = dir / "function-words.tsv";
        auto in = open_in(p);
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = split_tabs(line);
            if (f.size() < 10) throw ArtifactError(p.string() + ": short row");
            FunctionWord fw;
            fw.text = parse_tsv_text(f[0]);
            fw.id = require_candidate(out.index, fw.text, p);
            fw.overlap_multiplicity = static_cast<std::uint32_t>(std::stoul(f[1]));
            auto& s = fw.stats;
            s.pref = std::stoull(f[2]);
            s.suff = std::stoull(f[3]);
            s.inf = std::stoull(f[4]);
            s.ov = std::stoull(f[5]);
            s.p_pref = std::stod(f[6]);
            s.p_suf = std::stod(f[7]);
            s.p_pref_boosted = std::stod(f[8]);
            s.p_suf_boosted = std::stod(f[9]);
            out.model.stats.by_candidate[fw.id] = s;
            out.fws.push_back(std::move(fw));
        }
    }
    out.phrases = read_phrase_table(dir / "phrases.tsv", out.index);
    out.model.phrases = read_phrase_table(dir / "model-phrases.tsv", out.index);
    return out;
}

void write_ranking(std::ostream& out, const KernelRanking& ranking, const std::vector<std::string>& labels) {
    out << "rank\tkernel\tscore";
    for (const auto& l : labels) out << '\t' << escape_field(l);
    out << '\n';
    for (const auto& e : ranking.entries) {
        out << e.rank << '\t' << tsv_text(e.kernel) << '\t' << e.score;
        for (std::size_t k = 0; k < labels.size(); ++k) {
            out << '\t';
            if (k < e.comparison_ranks.size() && e.comparison_ranks[k]) out << *e.comparison_ranks[k]; else out << '-';
        }
        out << '\n';
    }
}

KernelRanking read_ranking(std::istream& in) {
    KernelRanking r;
    std::string line;
    std::getline(in, line);
    if (line.rfind("rank\tkernel\tscore", 0) != 0) throw ArtifactError("not a kernel ranking");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_tabs(line);
        if (f.size() < 3) throw ArtifactError("kernel ranking: short row");
        r.entries.push_back({parse_tsv_text(f[1]), std::stoull(f[2]), static_cast<std::uint32_t>(std::stoul(f[0])), {}});
    }
    return r;
}

KernelRanking load_ranking(const fs::path& path) {
    auto in = open_in(path);
    try {
        return read_ranking(in);
    } catch (const std::logic_error& e) {
        throw ArtifactError(path.string() + ": " + e.what());
    }
}

void write_expansions(std::ostream& out, const std::vector<Expansion>& ex) {
    out << "text\tocc\n";
    for (const auto& e : ex) out << tsv_text(e.text) << '\t' << e.occ << '\n';
}

void write_schemes(std::ostream& out, const std::vector<SchemeCount>& schemes) {
    out << "frame\tcount\tinstance\n";
    for (const auto& s : schemes)
        out << escape_field(s.frame) << '\t' << s.count << '\t'
            << (s.instances.empty() ? std::string() : tsv_text(s.instances.front())) << '\n';
}

void write_islands(std::ostream& out, const std::vector<IslandPhrase>& islands) {
    out << "text\tunit\tstart\tend\n";
    for (const auto& i : islands)
        out << tsv_text(i.text) << '\t' << i.ref.unit << '\t' << i.ref.start << '\t' << i.ref.end << '\n';
}

void write_island_schemes(std::ostream& out, const std::vector<IslandScheme>& schemes) {
    out << "scheme\tcount\tinstance\tunit\tstart\tend\n";
    for (const auto& s : schemes) {
        for (const auto& inst : s.instances) {
            out << escape_field(render_abstract(s.abstract_text)) << '\t' << s.count << '\t' << tsv_text(inst.text)
                << '\t' << inst.ref.unit << '\t' << inst.ref.start << '\t' << inst.ref.end << '\n';
        }
    }
}

void write_length_stats(std::ostream& out, const std::vector<LengthRow>& rows) {
    out << "words,phrases,uses,occurrences,ratio\n";
    for (const auto& r : rows)
        out << r.words << ',' << r.phrases << ',' << r.uses << ',' << r.occurrences << ',' << format_double(r.ratio())
            << '\n';
}

void write_tree(std::ostream& out, const DecompositionTree& tree, const SymmetricIndex& index) {
    if (tree.nodes.empty()) return;
    auto walk = [&](auto&& self, std::size_t k, int depth) -> void {
        const auto& n = tree.nodes[k];
        out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << tsv_text(index.candidate_text(n.id)) << "\t["
            << n.start << ',' << n.end << ")\tkernel=" << tsv_text(n.kernel) << '\n';
        for (auto c : n.children) self(self, c, depth + 1);
    };
    walk(walk, 0, 0);
}

}  // namespace phrasemine
