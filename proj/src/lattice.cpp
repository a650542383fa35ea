#include "phrasemine/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace phrasemine {

namespace {

Score plus(const Score& s, const OverlapWeight& w) {
    if (!s.valid() || w.kind == OverlapKind::forbidden) return {};
    if (w.kind == OverlapKind::zero) return {s.zeros + 1, s.log_p};
    return {s.zeros, s.log_p + w.log_p};
}

Score plus(const Score& a, const Score& b) {
    if (!a.valid() || !b.valid()) return {};
    return {a.zeros + b.zeros, a.log_p + b.log_p};
}

void keep_better(Score& acc, const Score& s) {
    if (better(s, acc)) acc = s;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
    return b > cap - std::min(a, cap) ? cap : a + b;
}

}  // namespace

OverlapWeight OverlapWeight::from_probability(double p) {
    if (!(p > 0)) return {OverlapKind::zero, 0.0};
    return {OverlapKind::positive, std::log(p)};
}

bool better(const Score& a, const Score& b) {
    if (!a.valid()) return false;
    if (!b.valid()) return true;
    if (a.zeros != b.zeros) return a.zeros < b.zeros;
    return a.log_p > b.log_p;
}

bool same_score(const Score& a, const Score& b) {
    if (!a.valid() || !b.valid() || a.zeros != b.zeros) return false;
    return std::abs(a.log_p - b.log_p) <= 1e-9 * std::max(1.0, std::abs(b.log_p));
}

Lattice::Lattice(std::uint32_t length, std::vector<LatticeInterval> intervals, std::span<const OverlapWeight> weights)
    : length_(length), weights_(weights) {
    std::erase_if(intervals, [&](const LatticeInterval& v) {
        return v.start >= v.end || v.end > length || (v.start == 0 && v.end == length);
    });
    std::sort(intervals.begin(), intervals.end());
    intervals.erase(std::unique(intervals.begin(), intervals.end(),
                                [](const auto& a, const auto& b) { return a.start == b.start && a.end == b.end; }),
                    intervals.end());
    iv_ = std::move(intervals);

    const auto n = static_cast<std::uint32_t>(iv_.size());
    by_start_.assign(length + 1, {});
    by_end_.assign(length + 1, {});
    for (std::uint32_t k = 0; k < n; ++k) {
        by_start_[iv_[k].start].push_back(k);
        by_end_[iv_[k].end].push_back(k);
    }
    prefix_best_.assign(length + 1, {});
    suffix_best_.assign(length + 1, {});
    fwd_.assign(n, Score{});
    bwd_.assign(n, Score{});
    const OverlapWeight empty = weight(kEmptyCandidate);

    for (std::uint32_t e = 1; e <= length; ++e) {
        for (std::uint32_t k : by_end_[e]) {
            const auto s = iv_[k].start;
            if (s == 0) {
                fwd_[k] = Score::origin();
                continue;
            }
            Score acc = plus(best_end_before(s, s), empty);
            for (std::uint32_t o : by_start_[s]) {
                if (iv_[o].end >= e) break;
                keep_better(acc, plus(best_end_before(iv_[o].end, s), weight(iv_[o].cid)));
            }
            fwd_[k] = acc;
        }
        auto& pre = prefix_best_[e];
        pre.resize(by_end_[e].size());
        Score run;
        for (std::size_t t = 0; t < by_end_[e].size(); ++t) {
            keep_better(run, fwd_[by_end_[e][t]]);
            pre[t] = run;
        }
    }

    for (std::uint32_t s = length; s-- > 0;) {
        for (std::uint32_t k : by_start_[s]) {
            const auto e = iv_[k].end;
            if (e == length) {
                bwd_[k] = Score::origin();
                continue;
            }
            Score acc = plus(best_start_after(e, e), empty);
            const auto& ending = by_end_[e];
            for (auto it = ending.rbegin(); it != ending.rend(); ++it) {
                if (iv_[*it].start <= s) break;
                keep_better(acc, plus(best_start_after(iv_[*it].start, e), weight(iv_[*it].cid)));
            }
            bwd_[k] = acc;
        }
        auto& suf = suffix_best_[s];
        suf.resize(by_start_[s].size());
        Score run;
        for (std::size_t t = by_start_[s].size(); t-- > 0;) {
            keep_better(run, bwd_[by_start_[s][t]]);
            suf[t] = run;
        }
    }

    for (std::uint32_t k : by_start_[0]) keep_better(best_, bwd_[k]);
}

Score Lattice::best_end_before(std::uint32_t end, std::uint32_t start_below) const {
    const auto& list = by_end_[end];
    auto it = std::lower_bound(list.begin(), list.end(), start_below,
                               [&](std::uint32_t k, std::uint32_t v) { return iv_[k].start < v; });
    if (it == list.begin()) return {};
    return prefix_best_[end][static_cast<std::size_t>(it - list.begin()) - 1];
}

Score Lattice::best_start_after(std::uint32_t start, std::uint32_t end_above) const {
    const auto& list = by_start_[start];
    auto it = std::upper_bound(list.begin(), list.end(), end_above,
                               [&](std::uint32_t v, std::uint32_t k) { return v < iv_[k].end; });
    if (it == list.end()) return {};
    return suffix_best_[start][static_cast<std::size_t>(it - list.begin())];
}

bool Lattice::is_optimal(std::size_t k) const {
    return decomposable() && same_score(plus(fwd_[k], bwd_[k]), best_);
}

std::vector<LatticeInterval> Lattice::optimal_intervals() const {
    std::vector<LatticeInterval> out;
    for (std::size_t k = 0; k < iv_.size(); ++k)
        if (is_optimal(k)) out.push_back(iv_[k]);
    return out;
}

std::vector<LatticeInterval> Lattice::optimal_overlaps() const {
    std::vector<LatticeInterval> out;
    if (!decomposable()) return out;
    const OverlapWeight empty = weight(kEmptyCandidate);
    for (std::uint32_t a = 1; a < length_; ++a) {
        const Score s = plus(plus(best_end_before(a, a), empty), best_start_after(a, a));
        if (same_score(s, best_)) out.push_back({a, a, kEmptyCandidate});
    }
    for (const auto& o : iv_) {
        if (o.start == 0 || o.end == length_) continue;
        const Score s = plus(plus(best_end_before(o.end, o.start), weight(o.cid)), best_start_after(o.start, o.end));
        if (same_score(s, best_)) out.push_back(o);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint32_t> Lattice::tight_successors(std::uint32_t j) const {
    std::vector<std::uint32_t> out;
    if (!is_optimal(j)) return out;
    const auto& J = iv_[j];
    for (std::uint32_t s = J.start + 1; s <= J.end && s < length_; ++s) {
        const OverlapWeight w = s == J.end ? weight(kEmptyCandidate) : [&] {
            // the overlap [s, J.end) is an interval ending where J ends
            const auto& list = by_end_[J.end];
            auto it = std::lower_bound(list.begin(), list.end(), s,
                                       [&](std::uint32_t k, std::uint32_t v) { return iv_[k].start < v; });
            if (it == list.end() || iv_[*it].start != s) return OverlapWeight{};
            return weight(iv_[*it].cid);
        }();
        if (w.kind == OverlapKind::forbidden) continue;
        for (std::uint32_t k : by_start_[s]) {
            if (iv_[k].end <= J.end) continue;
            if (same_score(plus(plus(fwd_[j], w), bwd_[k]), best_)) out.push_back(k);
        }
    }
    return out;
}

std::vector<std::uint32_t> Lattice::optimal_starts() const {
    std::vector<std::uint32_t> out;
    if (length_ == 0) return out;
    for (std::uint32_t k : by_start_[0])
        if (is_optimal(k)) out.push_back(k);
    return out;
}

std::vector<std::uint32_t> Lattice::min_parts() const {
    constexpr auto inf = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> parts(iv_.size(), inf);
    for (std::size_t k = iv_.size(); k-- > 0;) {
        if (!is_optimal(k)) continue;
        if (iv_[k].end == length_) {
            parts[k] = 1;
            continue;
        }
        for (std::uint32_t t : tight_successors(static_cast<std::uint32_t>(k)))
            if (parts[t] != inf) parts[k] = std::min(parts[k], parts[t] + 1);
    }
    return parts;
}

std::vector<std::uint32_t> Lattice::canonical_path() const {
    std::vector<std::uint32_t> path;
    if (!decomposable()) return path;
    const auto parts = min_parts();
    auto pick = [&](const std::vector<std::uint32_t>& options) {
        if (options.empty()) throw std::logic_error("optimal chain broke off");
        return *std::min_element(options.begin(), options.end(), [&](std::uint32_t a, std::uint32_t b) {
            return std::tuple(iv_[a].start, parts[a], iv_[a].end) < std::tuple(iv_[b].start, parts[b], iv_[b].end);
        });
    };
    std::uint32_t cur = pick(optimal_starts());
    path.push_back(cur);
    while (iv_[cur].end != length_) {
        cur = pick(tight_successors(cur));
        path.push_back(cur);
    }
    return path;
}

std::uint64_t Lattice::optimal_path_count(std::uint64_t cap) const {
    if (!decomposable()) return 0;
    std::vector<std::uint64_t> count(iv_.size(), 0);
    for (std::size_t k = iv_.size(); k-- > 0;) {
        if (!is_optimal(k)) continue;
        if (iv_[k].end == length_) {
            count[k] = 1;
            continue;
        }
        std::uint64_t c = 0;
        for (std::uint32_t t : tight_successors(static_cast<std::uint32_t>(k))) c = saturating_add(c, count[t], cap);
        count[k] = c;
    }
    std::uint64_t total = 0;
    for (std::uint32_t k : optimal_starts()) total = saturating_add(total, count[k], cap);
    return total;
}

}  // namespace phrasemine
