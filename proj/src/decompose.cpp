#include "phrasemine/decompose.hpp"

#include <algorithm>
#include <ostream>
#include <thread>

namespace phrasemine {

std::vector<LatticeInterval> candidate_intervals(const SymmetricIndex& index, TextView s) {
    std::vector<LatticeInterval> out;
    index.scan_candidate_suffixes(s, [&](std::uint32_t end, CandidateId id, std::uint32_t len) {
        out.push_back({end - len, end, id});
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<OverlapWeight> weights_from_probabilities(std::span<const double> p) {
    std::vector<OverlapWeight> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = OverlapWeight::from_probability(p[i]);
    return out;
}

SentenceDecomposition decompose_sentence(const SymmetricIndex& index, std::uint32_t unit,
                                         std::span<const OverlapWeight> weights, bool with_path) {
    const TextView s = index.unit_text(unit);
    SentenceDecomposition d;
    d.unit = unit;
    d.length = static_cast<std::uint32_t>(s.size());
    Lattice lat(d.length, candidate_intervals(index, s), weights);
    d.decomposable = lat.decomposable();
    d.score = lat.best();
    if (!d.decomposable) return d;
    d.optimal_intervals = lat.optimal_intervals();
    d.optimal_overlaps = lat.optimal_overlaps();
    if (with_path) {
        for (auto k : lat.canonical_path()) d.path.push_back(lat.intervals()[k]);
        for (std::size_t m = 0; m + 1 < d.path.size(); ++m) {
            const auto a = d.path[m + 1].start, b = d.path[m].end;
            CandidateId cid = kEmptyCandidate;
            if (a < b) cid = *index.candidate_id(s.substr(a, b - a));
            d.path_overlaps.push_back({a, b, cid});
        }
    }
    return d;
}

unsigned resolve_threads(unsigned requested) {
    if (requested) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

CollectedMultisets collect_multisets(const SymmetricIndex& index, std::span<const OverlapWeight> weights,
                                     unsigned threads) {
    const std::size_t units = index.unit_count();
    const std::size_t universe = index.candidate_count();
    threads = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(1, units)));

    std::vector<CollectedMultisets> partial(threads);
    auto work = [&](unsigned t) {
        auto& acc = partial[t];
        acc.phrases = PhraseMultiset(universe);
        acc.overlaps = PhraseMultiset(universe);
        for (std::size_t u = t; u < units; u += threads) {
            const auto d = decompose_sentence(index, static_cast<std::uint32_t>(u), weights);
            if (!d.decomposable) {
                acc.phrases.add(*index.candidate_id(index.unit_text(u)));
                ++acc.undecomposable;
                continue;
            }
            for (const auto& v : d.optimal_intervals) acc.phrases.add(v.cid);
            for (const auto& v : d.optimal_overlaps) acc.overlaps.add(v.cid);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    CollectedMultisets out = std::move(partial[0]);
    for (unsigned t = 1; t < threads; ++t) {
        out.phrases += partial[t].phrases;
        out.overlaps += partial[t].overlaps;
        out.undecomposable += partial[t].undecomposable;
    }
    return out;
}

void write_decomposition(std::ostream& out, const SentenceDecomposition& d) {
    auto spans = [&](const std::vector<LatticeInterval>& v) {
        std::string s;
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (k) s += ' ';
            s += std::to_string(v[k].start) + '-' + std::to_string(v[k].end);
        }
        return s;
    };
    out << d.unit << '\t';
    if (d.decomposable) out << d.log_score(); else out << "whole";
    out << '\t' << spans(d.path) << '\t' << spans(d.path_overlaps) << '\n';
}

std::string bracket_notation(TextView sentence, const std::vector<LatticeInterval>& path) {
    const auto n = sentence.size();
    std::vector<std::string> opens(n + 1), closes(n + 1);
    for (std::size_t k = 0; k < path.size(); ++k) {
        const bool raised = k % 2 == 0;
        opens[path[k].start] += raised ? "⁽" : "₍";
        closes[path[k].end] += raised ? "⁾" : "₎";
    }
    std::string out;
    for (std::size_t i = 0; i <= n; ++i) {
        out += closes[i];
        out += opens[i];
        if (i < n) append_utf8(out, sentence[i]);
    }
    return out;
}

}  // namespace phrasemine
