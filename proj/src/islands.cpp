#include "phrasemine/islands.hpp"

#include <algorithm>

namespace phrasemine {

bool FunctionWordBorders::bounds(std::uint32_t i, std::uint32_t j) const {
    const std::uint32_t n = length();
    if (i >= j || j > n) return false;
    std::uint32_t left = 0, right = 0;
    if (i > 0) {
        left = shortest_from[i];
        if (left == 0) return false;
    }
    if (j < n) {
        right = shortest_to[j];
        if (right == 0) return false;
    }
    return left + right < j - i;
}

FunctionWordBorders function_word_borders(const SymmetricIndex& full, const std::vector<bool>& fw_mask,
                                          TextView unit) {
    const auto n = static_cast<std::uint32_t>(unit.size());
    FunctionWordBorders b{std::vector<std::uint32_t>(n + 1, 0), std::vector<std::uint32_t>(n + 1, 0)};
    full.scan_candidate_suffixes(unit, [&](std::uint32_t end, CandidateId id, std::uint32_t len) {
        if (id >= fw_mask.size() || !fw_mask[id]) return;
        // longest first within one end, so the last write is the shortest
        b.shortest_to[end] = len;
        auto& from = b.shortest_from[end - len];
        if (from == 0 || len < from) from = len;
    });
    return b;
}

std::vector<Span> covered_spans(const SymmetricIndex& prefix, TextView unit, const FunctionWordBorders& borders) {
    std::vector<Span> out;
    prefix.scan_matching_candidates(unit, [&](std::uint32_t end, std::uint32_t len) {
        if (!borders.bounds(end - len, end)) return true;
        out.push_back({end - len, end});
        return false;
    });
    return out;
}

std::vector<Span> uncovered_runs(std::uint32_t length, const std::vector<Span>& covered) {
    std::vector<int> delta(length + 1, 0);
    for (const auto& [a, b] : covered) {
        ++delta[a];
        --delta[b];
    }
    std::vector<Span> runs;
    int depth = 0;
    for (std::uint32_t k = 0; k < length; ++k) {
        depth += delta[k];
        if (depth > 0) continue;
        if (!runs.empty() && runs.back().second == k) {
            ++runs.back().second;
        } else {
            runs.push_back({k, k + 1});
        }
    }
    return runs;
}

Span extend_island(Span core, const FunctionWordBorders& borders) {
    const std::uint32_t n = borders.length();
    Span out{0, n};
    for (std::uint32_t q = core.first; q > 0; --q) {
        if (borders.shortest_to[q]) {
            out.first = q - borders.shortest_to[q];
            break;
        }
    }
    for (std::uint32_t q = core.second; q < n; ++q) {
        if (borders.shortest_from[q]) {
            out.second = q + borders.shortest_from[q];
            break;
        }
    }
    return out;
}

std::vector<IslandPhrase> unit_islands(const SymmetricIndex& prefix, const SymmetricIndex& full,
                                       const std::vector<bool>& fw_mask, std::uint32_t unit) {
    const TextView s = full.unit_text(unit);
    const auto borders = function_word_borders(full, fw_mask, s);
    std::vector<IslandPhrase> out;
    for (const auto& core : uncovered_runs(static_cast<std::uint32_t>(s.size()), covered_spans(prefix, s, borders))) {
        const auto ext = extend_island(core, borders);
        out.push_back({{unit, ext.first, ext.second},
                       Text(s.substr(ext.first, ext.second - ext.first)),
                       {unit, core.first, core.second}});
    }
    return out;
}

std::vector<IslandPhrase> extended_islands(const SymmetricIndex& full, const std::vector<FunctionWord>& fws) {
    const auto mask = function_word_mask(fws, full.candidate_count());
    SymmetricIndex prefix;
    std::vector<IslandPhrase> out;
    for (std::size_t u = 0; u < full.unit_count(); ++u) {
        auto found = unit_islands(prefix, full, mask, static_cast<std::uint32_t>(u));
        out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
        prefix.insert_unit(full.unit_text(u), false);
    }
    return out;
}

SubstringRef AbstractCorpus::pull_back(std::uint32_t unit, std::uint32_t start, std::uint32_t end) const {
    const auto& spans = islands.at(unit);
    auto map = [&](std::uint32_t pos) {
        std::uint32_t shift = 0;
        for (const auto& s : spans) {
            if (s.position >= pos) break;
            shift += s.original.length() - 1;
        }
        return pos + shift;
    };
    return {unit, map(start), map(end)};
}

Text AbstractCorpus::instantiate(std::uint32_t unit, std::uint32_t start, std::uint32_t end) const {
    const TextView a = TextView(corpus.unit(unit)).substr(start, end - start);
    const auto& spans = islands.at(unit);
    auto it = std::lower_bound(spans.begin(), spans.end(), start,
                               [](const IslandSpan& s, std::uint32_t pos) { return s.position < pos; });
    Text out;
    for (std::uint32_t k = 0; k < a.size(); ++k) {
        if (a[k] == kUnknownSymbol) {
            out += it->text;
            ++it;
        } else {
            out.push_back(a[k]);
        }
    }
    return out;
}

AbstractCorpus abstract_corpus(const Corpus& corpus, const std::vector<IslandPhrase>& islands) {
    for (std::size_t u = 0; u < corpus.unit_count(); ++u)
        if (corpus.unit(u).find(kUnknownSymbol) != Text::npos)
            throw ReservedSymbolError("unit " + std::to_string(u) + " contains the reserved island symbol U+E000");

    std::vector<std::vector<SubstringRef>> cores(corpus.unit_count());
    for (const auto& isl : islands) cores.at(isl.core.unit).push_back(isl.core);

    AbstractCorpus out;
    out.islands.resize(corpus.unit_count());
    std::vector<Text> units;
    units.reserve(corpus.unit_count());
    for (std::size_t u = 0; u < corpus.unit_count(); ++u) {
        auto& c = cores[u];
        std::sort(c.begin(), c.end());
        const Text& s = corpus.unit(u);
        Text a;
        std::uint32_t at = 0;
        for (const auto& r : c) {
            if (r.start < at) throw Error("island cores overlap in unit " + std::to_string(u));
            a.append(s, at, r.start - at);
            out.islands[u].push_back({static_cast<std::uint32_t>(a.size()), r, s.substr(r.start, r.length())});
            a.push_back(kUnknownSymbol);
            at = r.end;
        }
        a.append(s, at, Text::npos);
        units.push_back(std::move(a));
    }
    out.corpus = Corpus(std::move(units));
    return out;
}

std::vector<IslandScheme> island_schemes(const AbstractCorpus& abstract, const ModelConfig& config,
                                         std::size_t max_instances) {
    const bool any = std::any_of(abstract.islands.begin(), abstract.islands.end(),
                                 [](const auto& v) { return !v.empty(); });
    if (!any) return {};

    const auto index = SymmetricIndex::build(abstract.corpus);
    const auto model = fit(index, config);
    const auto fws = select_function_words(model, config, index);
    const auto phrases = select_phrases(model, fws, index);

    std::vector<IslandScheme> out;
    for (const auto& [id, m] : phrases.entries()) {
        const TextView t = index.candidate_text(id);
        if (t.find(kUnknownSymbol) == TextView::npos) continue;
        IslandScheme s{Text(t), m, {}};
        for (const auto& ref : index.occurrences(t, max_instances))
            s.instances.push_back({abstract.pull_back(ref.unit, ref.start, ref.end),
                                   abstract.instantiate(ref.unit, ref.start, ref.end)});
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const IslandScheme& a, const IslandScheme& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.abstract_text < b.abstract_text;
    });
    return out;
}

std::string render_abstract(TextView text) {
    std::string out;
    for (Symbol c : text) {
        if (c == kUnknownSymbol) {
            out += "UNK";
        } else {
            append_utf8(out, c);
        }
    }
    return out;
}

}  // namespace phrasemine
