#include "phrasemine/subphrase.hpp"

#include <algorithm>
#include <set>

#include "phrasemine/decompose.hpp"

namespace phrasemine {

std::vector<std::size_t> DecompositionTree::leaves() const {
    std::vector<std::size_t> out;
    if (nodes.empty()) return out;
    std::vector<std::size_t> stack{0};
    while (!stack.empty()) {
        const auto k = stack.back();
        stack.pop_back();
        if (nodes[k].children.empty()) {
            out.push_back(k);
            continue;
        }
        for (auto it = nodes[k].children.rbegin(); it != nodes[k].children.rend(); ++it) stack.push_back(*it);
    }
    return out;
}

std::string FunctionalScheme::render() const {
    std::string out;
    bool first = true;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        if (k == 0 && !leading_slot) continue;
        if (k + 1 == slots.size() && !trailing_slot) continue;
        if (!first) out += '|';
        out += encode_utf8(slots[k]);
        first = false;
    }
    return out;
}

Text FunctionalScheme::reconstruct() const {
    Text out;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        out += slots[k];
        if (k < kernels.size()) out += kernels[k];
    }
    return out;
}

SubphraseModel::SubphraseModel(const SymmetricIndex& index, const FittedModel& model,
                               const std::vector<FunctionWord>& fws)
    : index_(index) {
    const std::size_t universe = index.candidate_count();
    fw_mask_ = function_word_mask(fws, universe);
    p_fw_.assign(universe, 0.0);
    for (std::size_t i = 0; i < universe && i < model.stats.by_candidate.size(); ++i)
        p_fw_[i] = model.stats.by_candidate[i].p_fw();
    weights_.assign(universe, OverlapWeight{});
    for (std::size_t i = 0; i < universe; ++i)
        if (fw_mask_[i]) weights_[i] = OverlapWeight::from_probability(p_fw_[i]);
}

Lattice SubphraseModel::lattice(CandidateId phrase) const {
    const TextView p = index_.candidate_text(phrase);
    return Lattice(static_cast<std::uint32_t>(p.size()), candidate_intervals(index_, p), weights_);
}

const PhraseSplit& SubphraseModel::split(CandidateId phrase) {
    if (auto it = splits_.find(phrase); it != splits_.end()) return it->second;
    PhraseSplit s;
    const Lattice lat = lattice(phrase);
    if (lat.decomposable()) {
        s.atomic = false;
        const TextView p = index_.candidate_text(phrase);
        for (auto k : lat.canonical_path()) s.parts.push_back(lat.intervals()[k]);
        for (std::size_t m = 0; m + 1 < s.parts.size(); ++m) {
            const auto a = s.parts[m + 1].start, b = s.parts[m].end;
            const CandidateId id = a == b ? kEmptyCandidate : *index_.candidate_id(p.substr(a, b - a));
            s.overlaps.push_back({a, b, id});
        }
    }
    return splits_.emplace(phrase, std::move(s)).first->second;
}

DecompositionTree SubphraseModel::tree(CandidateId phrase, std::uint32_t max_depth) {
    DecompositionTree t;
    t.root = Text(index_.candidate_text(phrase));
    auto grow = [&](auto&& self, CandidateId id, std::uint32_t start, std::uint32_t depth) -> std::size_t {
        const std::size_t k = t.nodes.size();
        const TextView text = index_.candidate_text(id);
        t.nodes.push_back({id, start, start + static_cast<std::uint32_t>(text.size()), kernel(text), {}});
        if (depth >= max_depth) return k;
        const PhraseSplit s = split(id);
        if (s.atomic) return k;
        for (const auto& part : s.parts) {
            const auto child = self(self, part.cid, start + part.start, depth + 1);
            t.nodes[k].children.push_back(child);
        }
        return k;
    };
    grow(grow, phrase, 0, 0);
    return t;
}

std::uint32_t SubphraseModel::kernel_prefix_length(TextView p, bool proper) const {
    std::uint32_t best_len = 0;
    double best_p = -1;
    index_.scan_candidate_suffixes(p, [&](std::uint32_t end, CandidateId id, std::uint32_t len) {
        if (end != len || !is_function_word(id) || (proper && len == p.size())) return;
        if (p_fw_[id] > best_p || (p_fw_[id] == best_p && len > best_len)) {
            best_p = p_fw_[id];
            best_len = len;
        }
    });
    return best_len;
}

std::uint32_t SubphraseModel::kernel_suffix_length(TextView p, bool proper) const {
    std::uint32_t best_len = 0;
    double best_p = -1;
    index_.scan_candidate_suffixes(p, [&](std::uint32_t end, CandidateId id, std::uint32_t len) {
        if (end != p.size() || !is_function_word(id) || (proper && len == p.size())) return;
        if (p_fw_[id] > best_p || (p_fw_[id] == best_p && len > best_len)) {
            best_p = p_fw_[id];
            best_len = len;
        }
    });
    return best_len;
}

Text SubphraseModel::kernel(TextView p) const {
    const auto pre = kernel_prefix_length(p);
    const auto suf = kernel_suffix_length(p);
    if (pre + suf >= p.size()) return Text();
    return Text(p.substr(pre, p.size() - pre - suf));
}

SubphraseModel::RegionSet SubphraseModel::border_regions(CandidateId id, std::uint32_t offset) const {
    const TextView p = index_.candidate_text(id);
    const auto n = static_cast<std::uint32_t>(p.size());
    const auto pre = kernel_prefix_length(p, true);
    const auto suf = kernel_suffix_length(p, true);
    if (pre + suf < n) return {{offset, offset + pre, false}, {offset + n - suf, offset + n, false}};
    // the borders swallow the leaf: keep the more probable one
    const double pp = fw_probability(p.substr(0, pre)), ps = fw_probability(p.substr(n - suf));
    if (pp > ps || (pp == ps && pre >= suf)) return {{offset, offset + pre, false}};
    return {{offset + n - suf, offset + n, false}};
}

double SubphraseModel::fw_probability(TextView f) const {
    if (f.empty()) return 0.0;
    const auto id = index_.candidate_id(f);
    return id && is_function_word(*id) ? p_fw_[*id] : 0.0;
}

FunctionalScheme SubphraseModel::scheme_from_regions(TextView p, CandidateId id, RegionSet regions) const {
    const auto n = static_cast<std::uint32_t>(p.size());
    for (const auto& r : regions)
        if (r.start > r.end || r.end > n) throw MalformedTreeError("function-word region outside the phrase");
    std::sort(regions.begin(), regions.end());
    auto is_fw = [&](std::uint32_t a, std::uint32_t b) {
        if (a == b) return true;
        const auto c = index_.candidate_id(p.substr(a, b - a));
        return c && is_function_word(*c);
    };
    // Every slot stays a single function word: contained regions are absorbed, a
    // partial overlap fuses only into a function word and otherwise the stronger
    // region wins (split overlaps before leaf borders, then probability, then length).
    auto stronger = [&](const Region& x, const Region& y) {
        if (x.overlap != y.overlap) return x.overlap;
        const double px = fw_probability(p.substr(x.start, x.end - x.start));
        const double py = fw_probability(p.substr(y.start, y.end - y.start));
        if (px != py) return px > py;
        return x.end - x.start >= y.end - y.start;
    };
    RegionSet merged;
    for (const auto& r : regions) {
        if (!merged.empty()) {
            auto& back = merged.back();
            const bool touches = r.start == back.end && (r.start == r.end || back.start == back.end);
            if (r.start < back.end || touches) {
                if (r.end <= back.end) {
                    back.overlap = back.overlap || (r.start == back.start && r.end == back.end && r.overlap);
                } else if (r.start == back.start || is_fw(back.start, r.end)) {
                    back = {back.start, r.end, back.overlap || r.overlap};
                } else if (stronger(r, back)) {
                    back = r;
                }
                continue;
            }
        }
        merged.push_back(r);
    }
    if (merged.empty() || merged.front().start != 0) merged.insert(merged.begin(), {0, 0, false});
    if (merged.back().end != n) merged.push_back({n, n, false});

    FunctionalScheme s;
    for (std::size_t k = 0; k < merged.size(); ++k) {
        s.slots.emplace_back(p.substr(merged[k].start, merged[k].end - merged[k].start));
        if (k + 1 < merged.size())
            s.kernels.emplace_back(p.substr(merged[k].end, merged[k + 1].start - merged[k].end));
    }
    s.leading_slot = !(s.slots.front().empty() && index_.candidate_unit_prefix(id));
    s.trailing_slot = !(s.slots.back().empty() && index_.candidate_unit_suffix(id));
    return s;
}

FunctionalScheme SubphraseModel::scheme(const DecompositionTree& t) const {
    if (t.nodes.empty()) throw MalformedTreeError("empty tree");
    RegionSet regions;
    for (const auto& node : t.nodes) {
        if (node.children.empty()) {
            for (const auto& r : border_regions(node.id, node.start)) regions.push_back(r);
            continue;
        }
        for (std::size_t k = 0; k + 1 < node.children.size(); ++k) {
            const auto& a = t.nodes[node.children[k]];
            const auto& b = t.nodes[node.children[k + 1]];
            if (!(a.start < b.start && b.start <= a.end && a.end < b.end))
                throw MalformedTreeError("children are not a chain of overlapping parts");
            regions.push_back({b.start, a.end, true});
        }
        if (t.nodes[node.children.front()].start != node.start || t.nodes[node.children.back()].end != node.end)
            throw MalformedTreeError("children do not cover their parent");
    }
    return scheme_from_regions(t.root, t.nodes.front().id, std::move(regions));
}

const std::vector<SubphraseModel::RegionSet>& SubphraseModel::region_sets(CandidateId phrase) {
    if (auto it = region_sets_.find(phrase); it != region_sets_.end()) return it->second;
    const auto n = static_cast<std::uint32_t>(index_.candidate_text(phrase).size());
    std::vector<RegionSet> result;
    auto add = [](std::vector<RegionSet>& into, RegionSet set) {
        if (into.size() >= kRegionSetCap) return;
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        if (std::find(into.begin(), into.end(), set) == into.end()) into.push_back(std::move(set));
    };
    const Lattice lat = lattice(phrase);
    if (!lat.decomposable()) {
        add(result, border_regions(phrase, 0));
    } else {
        const auto& iv = lat.intervals();
        // tails[k]: region sets of the optimal chains from interval k to the end
        std::vector<std::vector<RegionSet>> tails(iv.size());
        for (std::size_t k = iv.size(); k-- > 0;) {
            if (!lat.is_optimal(k)) continue;
            const auto own = region_sets(iv[k].cid);  // copy: the map may grow
            std::vector<RegionSet> rests;
            if (iv[k].end == n) rests.push_back({});
            for (auto t : lat.tight_successors(static_cast<std::uint32_t>(k)))
                for (const auto& r : tails[t]) {
                    RegionSet with_overlap = r;
                    with_overlap.push_back({iv[t].start, iv[k].end, true});
                    add(rests, std::move(with_overlap));
                }
            for (const auto& mine : own) {
                for (const auto& rest : rests) {
                    RegionSet set = rest;
                    for (const auto& r : mine) set.push_back({r.start + iv[k].start, r.end + iv[k].start, r.overlap});
                    add(tails[k], std::move(set));
                }
            }
        }
        for (auto k : lat.optimal_starts())
            for (const auto& l : tails[k]) add(result, l);
    }
    return region_sets_.emplace(phrase, std::move(result)).first->second;
}

bool SubphraseModel::unique_leaf_representation(CandidateId phrase) {
    const auto& sets = region_sets(phrase);
    if (sets.size() <= 1) return true;
    const TextView p = index_.candidate_text(phrase);
    std::set<std::pair<std::vector<Text>, std::vector<Text>>> seen;
    for (const auto& r : sets) {
        const auto s = scheme_from_regions(p, phrase, r);
        seen.insert({s.slots, s.kernels});
        if (seen.size() > 1) return false;
    }
    return true;
}

std::vector<SchemeCount> SubphraseModel::all_schemes(const PhraseMultiset& phrases, std::size_t max_instances,
                                                     std::size_t* malformed) {
    std::map<std::string, SchemeCount> by_frame;
    std::size_t bad = 0;
    for (const auto& [id, m] : phrases.entries()) {
        if (id == kEmptyCandidate) continue;
        FunctionalScheme s;
        try {
            s = scheme(tree(id));
        } catch (const MalformedTreeError&) {
            ++bad;
            continue;
        }
        auto& entry = by_frame[s.render()];
        entry.frame = s.render();
        entry.count += m;
        if (entry.instances.size() < max_instances) entry.instances.emplace_back(index_.candidate_text(id));
    }
    if (malformed) *malformed = bad;
    std::vector<SchemeCount> out;
    for (auto& [frame, c] : by_frame) out.push_back(std::move(c));
    std::stable_sort(out.begin(), out.end(), [](const SchemeCount& a, const SchemeCount& b) { return a.count > b.count; });
    return out;
}

}  // namespace phrasemine
