// Brute-force reference implementations. They work directly on strings and never
// touch the index, the lattice or the model code under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "phrasemine/text.hpp"

namespace oracle {

using phrasemine::Symbol;
using phrasemine::Text;
using phrasemine::TextView;

struct Facts {
    std::uint64_t occ = 0;
    bool left_branching = false;
    bool right_branching = false;
    bool unit_prefix = false;
    bool unit_suffix = false;

    bool candidate() const { return (left_branching || unit_prefix) && (right_branching || unit_suffix); }
};

// Context facts for one string by scanning every position of every unit.
inline Facts scan_facts(const std::vector<Text>& units, TextView s) {
    Facts f;
    std::set<Symbol> left, right;
    for (const auto& u : units) {
        if (s.size() > u.size()) continue;
        for (std::size_t i = 0; i + s.size() <= u.size(); ++i) {
            if (TextView(u).substr(i, s.size()) != s) continue;
            ++f.occ;
            if (i == 0) f.unit_prefix = true; else left.insert(u[i - 1]);
            if (i + s.size() == u.size()) f.unit_suffix = true; else right.insert(u[i + s.size()]);
        }
    }
    f.left_branching = left.size() >= 2;
    f.right_branching = right.size() >= 2;
    return f;
}

// All non-empty substrings that occur at least twice, plus every unit, with facts.
// A string occurring once is a candidate only if it is a whole unit, so this covers G(C).
inline std::map<Text, Facts> repeated_substrings(const std::vector<Text>& units) {
    std::map<Text, Facts> out;
    struct Acc {
        std::uint64_t occ = 0;
        std::set<Symbol> left, right;
        bool prefix = false, suffix = false;
    };
    for (std::size_t len = 1;; ++len) {
        std::unordered_map<TextView, Acc> level;
        for (const auto& u : units) {
            for (std::size_t i = 0; i + len <= u.size(); ++i) {
                auto& a = level[TextView(u).substr(i, len)];
                ++a.occ;
                if (i == 0) a.prefix = true; else a.left.insert(u[i - 1]);
                if (i + len == u.size()) a.suffix = true; else a.right.insert(u[i + len]);
            }
        }
        bool any_repeat = false;
        for (auto& [s, a] : level) {
            if (a.occ < 2) continue;
            any_repeat = true;
            Facts f{a.occ, a.left.size() >= 2, a.right.size() >= 2, a.prefix, a.suffix};
            out.emplace(Text(s), f);
        }
        if (!any_repeat) break;
    }
    for (const auto& u : units) {
        if (!out.count(u)) out.emplace(u, scan_facts(units, u));
    }
    return out;
}

inline std::map<Text, std::uint64_t> candidates(const std::vector<Text>& units) {
    std::map<Text, std::uint64_t> out;
    for (const auto& [s, f] : repeated_substrings(units)) {
        if (f.candidate()) out.emplace(s, f.occ);
    }
    out.emplace(Text(), 0);
    return out;
}

// ---------------------------------------------------------------------------------
// Decompositions by exhaustive enumeration.

struct Interval {
    std::uint32_t start, end;
    auto operator<=>(const Interval&) const = default;
};

struct DpResult {
    bool decomposable = false;
    int zero_overlaps = 0;   // overlaps with probability zero on the best path
    double log_score = 0;    // sum of logs over non-zero overlaps
    std::set<Interval> optimal_intervals;
    std::set<Interval> optimal_overlaps;
    std::uint64_t decompositions = 0;
};

// weight(text) returns nullopt for forbidden overlaps, otherwise the probability.
// Scores compare by number of zero-probability overlaps first, then by log sum.
inline DpResult enumerate_decompositions(TextView s, const std::function<bool(TextView)>& is_part,
                                         const std::function<std::optional<double>(TextView)>& weight,
                                         std::uint64_t cap = 20'000'000) {
    const auto n = static_cast<std::uint32_t>(s.size());
    std::vector<Interval> parts;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j <= n; ++j)
            if (!(i == 0 && j == n) && is_part(s.substr(i, j - i))) parts.push_back({i, j});

    // weights of every possible overlap [a, b), looked up once
    std::vector<std::optional<double>> overlap_weight((n + 1) * (n + 1));
    for (std::uint32_t a = 1; a < n; ++a)
        for (std::uint32_t b = a; b < n; ++b) overlap_weight[a * (n + 1) + b] = weight(s.substr(a, b - a));
    std::vector<std::vector<Interval>> by_start(n + 1);
    for (const auto& p : parts) by_start[p.start].push_back(p);
    DpResult best;
    std::vector<std::pair<std::vector<Interval>, std::pair<int, double>>> optimal_paths;
    std::vector<Interval> path;
    constexpr double tol = 1e-9;

    std::function<void(int, double)> extend = [&](int zeros, double logp) {
        const Interval last = path.back();
        if (last.end == n) {
            ++best.decompositions;
            if (best.decompositions > cap) throw std::runtime_error("enumeration cap exceeded");
            if (!best.decomposable || zeros < best.zero_overlaps ||
                (zeros == best.zero_overlaps && logp > best.log_score + tol * std::max(1.0, std::abs(logp)))) {
                best.decomposable = true;
                best.zero_overlaps = zeros;
                best.log_score = logp;
                optimal_paths.clear();
            }
            if (zeros == best.zero_overlaps &&
                std::abs(logp - best.log_score) <= tol * std::max(1.0, std::abs(best.log_score))) {
                optimal_paths.push_back({path, {zeros, logp}});
            }
            return;
        }
        for (std::uint32_t st = last.start + 1; st <= last.end && st < n; ++st)
        for (const Interval& next : by_start[st]) {
            if (next.end <= last.end) continue;
            const auto& w = overlap_weight[next.start * (n + 1) + last.end];
            if (!w) continue;
            path.push_back(next);
            if (*w <= 0) extend(zeros + 1, logp);
            else extend(zeros, logp + std::log(*w));
            path.pop_back();
        }
    };
    for (const Interval& first : parts) {
        if (first.start != 0) continue;
        path.assign(1, first);
        extend(0, 0.0);
    }
    for (const auto& [p, score] : optimal_paths) {
        if (score.first != best.zero_overlaps ||
            std::abs(score.second - best.log_score) > tol * std::max(1.0, std::abs(best.log_score)))
            continue;
        for (std::size_t k = 0; k < p.size(); ++k) {
            best.optimal_intervals.insert(p[k]);
            if (k + 1 < p.size()) best.optimal_overlaps.insert({p[k + 1].start, p[k].end});
        }
    }
    return best;
}

// The same result by a plain quadratic recursion over pairs of parts. Used where a
// sentence has too many chains to list; it is itself checked against the listing.
inline DpResult reference_decompositions(TextView s, const std::function<bool(TextView)>& is_part,
                                         const std::function<std::optional<double>(TextView)>& weight) {
    const auto n = static_cast<std::uint32_t>(s.size());
    std::vector<Interval> parts;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j <= n; ++j)
            if (!(i == 0 && j == n) && is_part(s.substr(i, j - i))) parts.push_back({i, j});
    using Sc = std::optional<std::pair<int, double>>;
    auto better = [](const Sc& a, const Sc& b) {
        if (!a) return false;
        if (!b) return true;
        return a->first < b->first || (a->first == b->first && a->second > b->second);
    };
    auto same = [](const Sc& a, const Sc& b) {
        return a && b && a->first == b->first &&
               std::abs(a->second - b->second) <= 1e-9 * std::max(1.0, std::abs(b->second));
    };
    auto arc = [&](const Interval& J, const Interval& K) -> std::optional<double> {
        if (!(J.start < K.start && K.start <= J.end && J.end < K.end)) return std::nullopt;
        return weight(s.substr(K.start, J.end - K.start));
    };
    auto add = [](const Sc& a, std::optional<double> w, const Sc& b) -> Sc {
        if (!a || !w || !b) return std::nullopt;
        return std::pair{a->first + b->first + (*w <= 0 ? 1 : 0),
                         a->second + b->second + (*w <= 0 ? 0.0 : std::log(*w))};
    };
    const std::size_t m = parts.size();
    std::vector<Sc> head(m), tail(m);
    const Sc zero = std::pair{0, 0.0};
    for (std::size_t k = 0; k < m; ++k) {  // parts sorted by start: predecessors come first
        if (parts[k].start == 0) { head[k] = zero; continue; }
        for (std::size_t j = 0; j < m; ++j) {
            auto c = add(head[j], arc(parts[j], parts[k]), zero);
            if (better(c, head[k])) head[k] = c;
        }
    }
    for (std::size_t k = m; k-- > 0;) {
        if (parts[k].end == n) { tail[k] = zero; continue; }
        for (std::size_t j = 0; j < m; ++j) {
            auto c = add(zero, arc(parts[k], parts[j]), tail[j]);
            if (better(c, tail[k])) tail[k] = c;
        }
    }
    Sc best;
    for (std::size_t k = 0; k < m; ++k)
        if (parts[k].start == 0 && better(tail[k], best)) best = tail[k];
    DpResult out;
    if (!best) return out;
    out.decomposable = true;
    out.zero_overlaps = best->first;
    out.log_score = best->second;
    for (std::size_t k = 0; k < m; ++k) {
        if (head[k] && tail[k] && same(std::pair{head[k]->first + tail[k]->first, head[k]->second + tail[k]->second}, best))
            out.optimal_intervals.insert(parts[k]);
        for (std::size_t j = 0; j < m; ++j)
            if (same(add(head[k], arc(parts[k], parts[j]), tail[j]), best))
                out.optimal_overlaps.insert({parts[j].start, parts[k].end});
    }
    return out;
}

// ---------------------------------------------------------------------------------
// Function-word statistics straight from the definitions.

using Multiset = std::map<Text, std::uint64_t>;

struct Stats {
    std::uint64_t pref = 0, suff = 0, inf = 0, ov = 0;
};

inline bool starts_with(TextView s, TextView p) { return s.size() >= p.size() && s.substr(0, p.size()) == p; }
inline bool ends_with(TextView s, TextView p) {
    return s.size() >= p.size() && s.substr(s.size() - p.size()) == p;
}

inline Stats affix_counts(const Multiset& phrases, TextView f) {
    Stats st;
    for (const auto& [p, m] : phrases) {
        if (m == 0 || p.empty()) continue;
        if (TextView(p) == f) continue;
        if (p.size() > f.size() && starts_with(p, f)) st.pref += m;
        if (p.size() > f.size() && ends_with(p, f)) st.suff += m;
        if (f.size() <= p.size()) {
            std::uint64_t positions = 0;
            for (std::size_t i = 0; i + f.size() <= p.size(); ++i)
                if (TextView(p).substr(i, f.size()) == f) ++positions;
            st.inf += m * positions;
        }
    }
    return st;
}

// Stable proper prefixes (by length) of p: in phrases and every longer proper candidate prefix is too.
inline std::set<std::size_t> stable_prefix_lengths(TextView p, const Multiset& phrases,
                                                   const std::function<bool(TextView)>& is_candidate) {
    auto in = [&](TextView s) { auto it = phrases.find(Text(s)); return it != phrases.end() && it->second > 0; };
    std::set<std::size_t> out;
    for (std::size_t a = 1; a < p.size(); ++a) {
        if (!in(p.substr(0, a))) continue;
        bool ok = true;
        for (std::size_t b = a + 1; b < p.size(); ++b)
            if (is_candidate(p.substr(0, b)) && !in(p.substr(0, b))) ok = false;
        if (ok) out.insert(a);
    }
    return out;
}

inline std::set<std::size_t> stable_suffix_lengths(TextView p, const Multiset& phrases,
                                                   const std::function<bool(TextView)>& is_candidate) {
    auto in = [&](TextView s) { auto it = phrases.find(Text(s)); return it != phrases.end() && it->second > 0; };
    std::set<std::size_t> out;
    for (std::size_t a = 1; a < p.size(); ++a) {
        if (!in(p.substr(p.size() - a))) continue;
        bool ok = true;
        for (std::size_t b = a + 1; b < p.size(); ++b)
            if (is_candidate(p.substr(p.size() - b)) && !in(p.substr(p.size() - b))) ok = false;
        if (ok) out.insert(a);
    }
    return out;
}

inline std::uint64_t overlap_value(const Multiset& phrases, TextView f,
                                   const std::function<bool(TextView)>& is_candidate) {
    auto in = [&](TextView s) { auto it = phrases.find(Text(s)); return it != phrases.end() && it->second > 0; };
    std::uint64_t total = 0;
    for (const auto& [p, m] : phrases) {
        if (m == 0) continue;
        const auto sp = stable_prefix_lengths(p, phrases, is_candidate);
        const auto ss = stable_suffix_lengths(p, phrases, is_candidate);
        bool found = false;
        // P1 = p[0..a), P2 = p[b..n), F = p[b..a)
        for (std::size_t a = 1; a < p.size() && !found; ++a) {
            for (std::size_t b = 1; b <= a && !found; ++b) {
                if (a - b != f.size() || TextView(p).substr(b, a - b) != f) continue;
                if (!in(TextView(p).substr(0, a)) || !in(TextView(p).substr(b))) continue;
                if (sp.count(a) || ss.count(p.size() - b)) found = true;
            }
        }
        if (found) total += m;
    }
    return total;
}

// ---------------------------------------------------------------------------------
// Random corpora.

inline Text random_text(std::mt19937_64& rng, std::size_t len, std::u32string_view alphabet) {
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    Text t;
    for (std::size_t i = 0; i < len; ++i) t.push_back(alphabet[pick(rng)]);
    return t;
}

// Units drawn from a small vocabulary of words joined by spaces, so that repeats and
// branching are frequent; occasionally a unit is duplicated.
inline std::vector<Text> random_corpus(std::mt19937_64& rng, std::size_t target_symbols, std::size_t max_unit = 40,
                                       std::u32string_view alphabet = U"abcde") {
    std::uniform_int_distribution<std::size_t> word_count(3, 12);
    std::vector<Text> vocab;
    for (int i = 0; i < 12; ++i) vocab.push_back(random_text(rng, 1 + rng() % 4, alphabet));
    std::vector<Text> units;
    std::size_t total = 0;
    while (total < target_symbols) {
        Text u;
        if (!units.empty() && rng() % 10 == 0) {
            u = units[rng() % units.size()];
        } else {
            const std::size_t words = word_count(rng);
            for (std::size_t w = 0; w < words; ++w) {
                if (w) u.push_back(U' ');
                u += vocab[rng() % vocab.size()];
            }
            if (u.size() > max_unit) u.resize(max_unit);
            while (!u.empty() && u.back() == U' ') u.pop_back();
        }
        if (u.empty()) continue;
        total += u.size();
        units.push_back(std::move(u));
    }
    return units;
}

}  // namespace oracle
