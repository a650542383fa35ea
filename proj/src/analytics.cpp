#include "phrasemine/analytics.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <unordered_set>

namespace phrasemine {

CandidateId most_specific_child(const SymmetricIndex& index, const PhraseSplit& split) {
    if (split.atomic || split.parts.empty()) throw NoChildError("atomic phrase has no children");
    CandidateId best = split.parts.front().cid;
    std::uint64_t best_occ = index.candidate_occ(best);
    for (const auto& part : split.parts) {
        const auto occ = index.candidate_occ(part.cid);
        if (occ < best_occ) {
            best = part.cid;
            best_occ = occ;
        }
    }
    return best;
}

CandidateId MssForest::root_of(CandidateId node) const {
    for (auto it = msc.find(node); it != msc.end(); it = msc.find(node)) node = it->second;
    return node;
}

std::size_t MssForest::chain_length(CandidateId node) const {
    std::size_t steps = 0;
    for (auto it = msc.find(node); it != msc.end(); it = msc.find(node)) {
        node = it->second;
        ++steps;
    }
    return steps;
}

MssForest build_mss_forest(SubphraseModel& model, const PhraseMultiset& phrases) {
    MssForest f;
    std::unordered_set<CandidateId> seen;
    std::vector<CandidateId> stack;
    for (const auto& [id, m] : phrases.entries()) {
        if (id == kEmptyCandidate || !seen.insert(id).second) continue;
        stack.push_back(id);
        while (!stack.empty()) {
            const CandidateId node = stack.back();
            stack.pop_back();
            f.nodes.push_back(node);
            const PhraseSplit& s = model.split(node);
            if (s.atomic) {
                f.roots.push_back(node);
                continue;
            }
            f.msc[node] = most_specific_child(model.index(), s);
            for (const auto& part : s.parts)
                if (seen.insert(part.cid).second) stack.push_back(part.cid);
        }
    }
    std::sort(f.nodes.begin(), f.nodes.end());
    std::sort(f.roots.begin(), f.roots.end());
    for (auto r : f.roots) f.rho[r] = 0;
    for (const auto& [id, m] : phrases.entries())
        if (id != kEmptyCandidate) ++f.rho[f.root_of(id)];
    return f;
}

std::optional<std::uint32_t> KernelRanking::rank_of(TextView kernel) const {
    for (const auto& e : entries)
        if (e.kernel == kernel) return e.rank;
    return std::nullopt;
}

namespace {

void assign_ranks(std::vector<RankedKernel>& v) {
    std::sort(v.begin(), v.end(), [](const RankedKernel& a, const RankedKernel& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.kernel < b.kernel;
    });
    for (std::size_t k = 0; k < v.size(); ++k) v[k].rank = static_cast<std::uint32_t>(k + 1);
}

}  // namespace

KernelRanking characteristic_kernels(const MssForest& forest, const SubphraseModel& model) {
    std::map<Text, std::uint64_t> by_kernel;
    for (auto r : forest.roots) {
        Text k = model.kernel(model.index().candidate_text(r));
        if (k.empty()) continue;
        const auto it = forest.rho.find(r);
        by_kernel[std::move(k)] += it == forest.rho.end() ? 0 : it->second;
    }
    KernelRanking out;
    for (auto& [k, score] : by_kernel) out.entries.push_back({k, score, 0, {}});
    assign_ranks(out.entries);
    return out;
}

KernelRanking terminological_kernels(const KernelRanking& ranking, const std::vector<KernelRanking>& comparisons,
                                     std::uint32_t rank_cut) {
    std::vector<std::unordered_map<Text, std::uint32_t>> lookup(comparisons.size());
    for (std::size_t c = 0; c < comparisons.size(); ++c)
        for (const auto& e : comparisons[c].entries) lookup[c].emplace(e.kernel, e.rank);
    KernelRanking out;
    for (const auto& e : ranking.entries) {
        RankedKernel kept = e;
        kept.comparison_ranks.clear();
        bool keep = true;
        for (const auto& table : lookup) {
            const auto it = table.find(e.kernel);
            if (it == table.end()) {
                kept.comparison_ranks.push_back(std::nullopt);
                continue;
            }
            kept.comparison_ranks.push_back(it->second);
            if (it->second < rank_cut) keep = false;
        }
        if (keep) out.entries.push_back(std::move(kept));
    }
    return out;
}

namespace {

// Lengths of the proper non-empty function-word prefixes and suffixes of t, longest first.
void function_word_borders_of(TextView t, const std::vector<bool>& mask, const SymmetricIndex& index,
                              std::vector<std::uint32_t>& prefixes, std::vector<std::uint32_t>& suffixes) {
    prefixes.clear();
    suffixes.clear();
    index.scan_candidate_suffixes(t, [&](std::uint32_t end, CandidateId id, std::uint32_t len) {
        if (len == t.size() || id >= mask.size() || !mask[id]) return;
        if (end == len) prefixes.push_back(len);
        if (end == t.size()) suffixes.push_back(len);
    });
    std::sort(prefixes.rbegin(), prefixes.rend());
    // suffixes arrive longest first already
}

}  // namespace

std::optional<Text> trim_borders(TextView text, TextView kernel, const std::vector<bool>& fw_mask,
                                 const SymmetricIndex& index) {
    if (text.find(kernel) == TextView::npos) return std::nullopt;
    TextView t = text;
    std::vector<std::uint32_t> pre, suf;
    for (bool changed = true; changed;) {
        changed = false;
        function_word_borders_of(t, fw_mask, index, pre, suf);
        for (auto len : pre) {
            if (t.substr(len).find(kernel) != TextView::npos) {
                t.remove_prefix(len);
                changed = true;
                break;
            }
        }
        if (changed) continue;
        for (auto len : suf) {
            if (t.substr(0, t.size() - len).find(kernel) != TextView::npos) {
                t.remove_suffix(len);
                changed = true;
                break;
            }
        }
    }
    function_word_borders_of(t, fw_mask, index, pre, suf);
    if (!pre.empty() || !suf.empty()) return std::nullopt;
    return Text(t);
}

std::vector<Expansion> kernel_expansion(TextView kernel, const PhraseMultiset& phrases,
                                        const std::vector<bool>& fw_mask, const SymmetricIndex& index,
                                        std::size_t limit) {
    if (kernel.empty()) return {};
    std::map<Text, std::uint64_t> merged;
    for (const auto& [id, m] : phrases.entries()) {
        if (id == kEmptyCandidate) continue;
        const TextView p = index.candidate_text(id);
        if (p.size() < kernel.size() || p.find(kernel) == TextView::npos) continue;
        if (auto t = trim_borders(p, kernel, fw_mask, index)) merged[std::move(*t)] += index.candidate_occ(id);
    }
    std::vector<Expansion> out;
    for (auto& [t, occ] : merged) out.push_back({t, occ});
    std::stable_sort(out.begin(), out.end(), [](const Expansion& a, const Expansion& b) { return a.occ > b.occ; });
    if (out.size() > limit) out.resize(limit);
    return out;
}

PhraseNetwork phrase_network(SubphraseModel& model, const MssForest& forest, const PhraseMultiset& phrases,
                             const std::vector<Text>& seeds) {
    const auto& index = model.index();
    std::unordered_set<CandidateId> seed_atoms;
    if (!seeds.empty()) {
        const std::set<Text> wanted(seeds.begin(), seeds.end());
        for (auto r : forest.roots) {
            const TextView t = index.candidate_text(r);
            if (wanted.count(Text(t)) || wanted.count(model.kernel(t))) seed_atoms.insert(r);
        }
    }
    auto by_text = [&](CandidateId a, CandidateId b) {
        const TextView x = index.candidate_text(a), y = index.candidate_text(b);
        return x != y ? x < y : a < b;
    };
    PhraseNetwork net;
    std::set<CandidateId> vertices;
    for (const auto& [id, m] : phrases.entries()) {
        if (id == kEmptyCandidate) continue;
        std::vector<CandidateId> atoms;
        for (const auto& node : model.tree(id).nodes) atoms.push_back(forest.root_of(node.id));
        std::sort(atoms.begin(), atoms.end(), by_text);
        atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
        for (std::size_t a = 0; a < atoms.size(); ++a) {
            for (std::size_t b = a + 1; b < atoms.size(); ++b) {
                if (!seed_atoms.empty() && !seed_atoms.count(atoms[a]) && !seed_atoms.count(atoms[b])) continue;
                net.edges.push_back({atoms[a], id, atoms[b], m});
                vertices.insert(atoms[a]);
                vertices.insert(atoms[b]);
            }
        }
    }
    net.vertices.assign(vertices.begin(), vertices.end());
    return net;
}

void write_network_tsv(std::ostream& out, const PhraseNetwork& net, const SymmetricIndex& index) {
    out << "atom1\tatom2\tphrase\tweight\n";
    for (const auto& e : net.edges) {
        out << escape_field(encode_utf8(index.candidate_text(e.first))) << '\t'
            << escape_field(encode_utf8(index.candidate_text(e.second))) << '\t'
            << escape_field(encode_utf8(index.candidate_text(e.phrase))) << '\t' << e.weight << '\n';
    }
}

namespace {

std::string dot_quote(TextView t) {
    std::string out = "\"";
    for (char c : encode_utf8(t)) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + '"';
}

}  // namespace

void write_network_dot(std::ostream& out, const PhraseNetwork& net, const SymmetricIndex& index) {
    out << "graph phrases {\n";
    for (auto v : net.vertices) out << "  " << dot_quote(index.candidate_text(v)) << ";\n";
    for (const auto& e : net.edges) {
        out << "  " << dot_quote(index.candidate_text(e.first)) << " -- " << dot_quote(index.candidate_text(e.second))
            << " [label=" << dot_quote(index.candidate_text(e.phrase)) << ", weight=" << e.weight << "];\n";
    }
    out << "}\n";
}

int word_count(TextView phrase, bool unit_prefix, bool unit_suffix) {
    const auto ws = std::count_if(phrase.begin(), phrase.end(), is_white_space);
    return static_cast<int>(ws) - 1 + (unit_prefix ? 1 : 0) + (unit_suffix ? 1 : 0);
}

std::vector<LengthRow> length_stats(const PhraseMultiset& phrases, const SymmetricIndex& index, int max_words) {
    std::vector<LengthRow> rows;
    for (int w = -1; w <= max_words; ++w) rows.push_back({w, 0, 0, 0});
    for (const auto& [id, m] : phrases.entries()) {
        if (id == kEmptyCandidate) continue;
        const int w = word_count(index.candidate_text(id), index.candidate_unit_prefix(id),
                                 index.candidate_unit_suffix(id));
        if (w < -1 || w > max_words) continue;
        auto& row = rows[static_cast<std::size_t>(w + 1)];
        ++row.phrases;
        row.uses += m;
        row.occurrences += index.candidate_occ(id);
    }
    return rows;
}

}  // namespace phrasemine
