#include "phrasemine/fwmodel.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

namespace phrasemine {

namespace {

struct Occurrence {
    std::uint32_t end, len;
    CandidateId id;
};

// Non-empty candidate substrings of p, ordered by end then longest first.
void candidate_substrings(const SymmetricIndex& index, TextView p, std::vector<Occurrence>& out) {
    out.clear();
    index.scan_candidate_suffixes(p, [&](std::uint32_t end, CandidateId id, std::uint32_t len) {
        out.push_back({end, len, id});
    });
}

struct Boundary {
    std::uint32_t length;
    bool phrase;
    bool stable;
};

// Candidate proper prefixes and suffixes of p, longest first, with the stability flag.
void boundaries(const std::vector<Occurrence>& occs, std::uint32_t n, const PhraseMultiset& phrases,
                std::vector<Boundary>& prefixes, std::vector<Boundary>& suffixes) {
    prefixes.clear();
    suffixes.clear();
    for (const auto& o : occs) {
        if (o.len >= n) continue;
        if (o.end == o.len) prefixes.push_back({o.len, phrases.contains(o.id), false});
        if (o.end == n) suffixes.push_back({o.len, phrases.contains(o.id), false});
    }
    auto mark = [](std::vector<Boundary>& v) {
        std::sort(v.begin(), v.end(), [](const Boundary& a, const Boundary& b) { return a.length > b.length; });
        for (auto& b : v) {
            if (!b.phrase) break;
            b.stable = true;
        }
    };
    mark(prefixes);
    mark(suffixes);
}

class PhraseScanner {
public:
    PhraseScanner(const SymmetricIndex& index, const PhraseMultiset& phrases) : index_(index), phrases_(phrases) {}

    const std::vector<Occurrence>& scan(TextView p) {
        n_ = static_cast<std::uint32_t>(p.size());
        candidate_substrings(index_, p, occs_);
        end_begin_.assign(n_ + 2, 0);
        for (const auto& o : occs_) ++end_begin_[o.end + 1];
        for (std::uint32_t j = 1; j < end_begin_.size(); ++j) end_begin_[j] += end_begin_[j - 1];
        return occs_;
    }

    // Distinct ids F with p = P1 o F^-1 o P2, both parts phrases, one of them stable.
    const std::vector<CandidateId>& overlaps() {
        boundaries(occs_, n_, phrases_, prefixes_, suffixes_);
        ids_.clear();
        for (const auto& pre : prefixes_) {
            if (!pre.phrase) continue;
            const std::uint32_t a = pre.length;
            for (const auto& suf : suffixes_) {
                if (!suf.phrase) continue;
                const std::uint32_t b = n_ - suf.length;
                if (b > a || !(pre.stable || suf.stable)) continue;
                const CandidateId f = a == b ? kEmptyCandidate : lookup(a, a - b);
                if (f != kNoCandidate) ids_.push_back(f);
            }
        }
        std::sort(ids_.begin(), ids_.end());
        ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
        return ids_;
    }

    const std::vector<Boundary>& prefixes() const { return prefixes_; }
    const std::vector<Boundary>& suffixes() const { return suffixes_; }

private:
    CandidateId lookup(std::uint32_t end, std::uint32_t len) const {
        auto first = occs_.begin() + end_begin_[end], last = occs_.begin() + end_begin_[end + 1];
        auto it = std::lower_bound(first, last, len, [](const Occurrence& o, std::uint32_t v) { return o.len > v; });
        return it != last && it->len == len ? it->id : kNoCandidate;
    }

    const SymmetricIndex& index_;
    const PhraseMultiset& phrases_;
    std::uint32_t n_ = 0;
    std::vector<Occurrence> occs_;
    std::vector<std::uint32_t> end_begin_;
    std::vector<Boundary> prefixes_, suffixes_;
    std::vector<CandidateId> ids_;
};

struct Counts {
    std::vector<std::uint64_t> pref, suff, inf, ov;
    explicit Counts(std::size_t n) : pref(n, 0), suff(n, 0), inf(n, 0), ov(n, 0) {}
};

}  // namespace

void ModelConfig::validate() const {
    if (!(theta > 0)) throw std::invalid_argument("theta must be positive");
    if (!(fw_divisor > 0)) throw std::invalid_argument("function-word divisor must be positive");
    if (!(fw_ratio > 1)) throw std::invalid_argument("function-word ratio must exceed 1");
    if (max_iterations < 3) throw std::invalid_argument("at least three iterations are needed to halt");
}

void apply_boost(FunctionWordStats& s) {
    s.p_pref = s.inf ? static_cast<double>(s.pref) / static_cast<double>(s.inf) : 0.0;
    s.p_suf = s.inf ? static_cast<double>(s.suff) / static_cast<double>(s.inf) : 0.0;
    s.p_pref_boosted = s.p_pref;
    s.p_suf_boosted = s.p_suf;
    const double sum = s.p_pref + s.p_suf;
    if (sum > 0 && s.inf > 0) {
        const double extra = static_cast<double>(s.ov) / static_cast<double>(s.inf);
        s.p_pref_boosted += s.p_pref / sum * extra;
        s.p_suf_boosted += s.p_suf / sum * extra;
    }
}

std::vector<double> StatsTable::p_fw() const {
    std::vector<double> out(by_candidate.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = by_candidate[i].p_fw();
    return out;
}

StatsTable compute_stats(const PhraseMultiset& phrases, const SymmetricIndex& index, unsigned threads) {
    const std::size_t universe = index.candidate_count();
    const auto entries = phrases.entries();
    threads = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(1, entries.size())));

    std::vector<Counts> partial(threads, Counts(0));
    auto work = [&](unsigned t) {
        Counts c(universe);
        PhraseScanner scanner(index, phrases);
        for (std::size_t k = t; k < entries.size(); k += threads) {
            const auto [pid, m] = entries[k];
            if (pid == kEmptyCandidate || pid >= universe) continue;
            const TextView p = index.candidate_text(pid);
            const auto n = static_cast<std::uint32_t>(p.size());
            for (const auto& o : scanner.scan(p)) {
                if (o.len == n) continue;  // the phrase itself
                c.inf[o.id] += m;
                if (o.end == o.len) c.pref[o.id] += m;
                if (o.end == n) c.suff[o.id] += m;
            }
            c.pref[kEmptyCandidate] += m;
            c.suff[kEmptyCandidate] += m;
            c.inf[kEmptyCandidate] += static_cast<std::uint64_t>(m) * (n + 1);
            for (CandidateId f : scanner.overlaps()) c.ov[f] += m;
        }
        partial[t] = std::move(c);
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }

    StatsTable table;
    table.by_candidate.resize(universe);
    for (std::size_t i = 0; i < universe; ++i) {
        auto& s = table.by_candidate[i];
        for (const auto& c : partial) {
            s.pref += c.pref[i];
            s.suff += c.suff[i];
            s.inf += c.inf[i];
            s.ov += c.ov[i];
        }
        apply_boost(s);
        if (s.p_pref_boosted + s.p_suf_boosted > 1.0 + 1e-12) ++table.boost_violations;
    }
    return table;
}

StableBoundaries stable_boundaries(TextView phrase, const PhraseMultiset& phrases, const SymmetricIndex& index) {
    PhraseScanner scanner(index, phrases);
    scanner.scan(phrase);
    scanner.overlaps();
    StableBoundaries out;
    for (const auto& b : scanner.prefixes())
        if (b.stable) out.prefix_lengths.push_back(b.length);
    for (const auto& b : scanner.suffixes())
        if (b.stable) out.suffix_lengths.push_back(b.length);
    std::sort(out.prefix_lengths.begin(), out.prefix_lengths.end());
    std::sort(out.suffix_lengths.begin(), out.suffix_lengths.end());
    return out;
}

std::uint64_t overlap_value(TextView f, const PhraseMultiset& phrases, const SymmetricIndex& index) {
    const auto fid = index.candidate_id(f);
    if (!fid) return 0;
    PhraseScanner scanner(index, phrases);
    std::uint64_t total = 0;
    for (const auto& [pid, m] : phrases.entries()) {
        if (pid == kEmptyCandidate) continue;
        scanner.scan(index.candidate_text(pid));
        const auto& ids = scanner.overlaps();
        if (std::binary_search(ids.begin(), ids.end(), *fid)) total += m;
    }
    return total;
}

PhraseMultiset initial_phrases(const SymmetricIndex& index) {
    PhraseMultiset p(index.candidate_count());
    for (CandidateId id = 1; id < index.candidate_count(); ++id)
        p.set(id, static_cast<std::uint32_t>(index.candidate_occ(id)));
    return p;
}

FittedModel fit(const SymmetricIndex& index, const ModelConfig& config, const FitProgress& progress) {
    config.validate();
    using clock = std::chrono::steady_clock;

    struct Pass {
        PhraseMultiset phrases, overlaps;
        StatsTable stats;
    };
    Pass previous;
    PhraseMultiset current = initial_phrases(index);
    std::vector<IterationRecord> trace;
    std::size_t violations = 0;

    for (std::uint32_t i = 0;; ++i) {
        if (i >= config.max_iterations)
            throw FitError("no halt after " + std::to_string(config.max_iterations) + " iterations", trace);
        const auto started = clock::now();
        StatsTable stats = compute_stats(current, index, config.threads);
        const auto weights = weights_from_probabilities(stats.p_fw());
        CollectedMultisets next = collect_multisets(index, weights, config.threads);

        const auto d = compare_multisets(current, next.phrases);
        IterationRecord rec;
        rec.iteration = i;
        rec.rho = d.rho;
        rec.delta = d.delta;
        rec.unit_share = d.unit_share;
        rec.boost_violations = stats.boost_violations;
        rec.undecomposable = next.undecomposable;
        rec.seconds = std::chrono::duration<double>(clock::now() - started).count();
        violations += stats.boost_violations;
        trace.push_back(rec);
        if (progress) progress(rec);

        if (i >= 2 && rec.rho >= trace[i - 1].rho - config.theta) {
            FittedModel model;
            model.phrases = std::move(previous.phrases);
            model.overlaps = std::move(previous.overlaps);
            model.stats = std::move(previous.stats);
            model.final_iteration = i - 1;
            model.trace = std::move(trace);
            model.boost_violations = violations;
            return model;
        }
        previous = Pass{std::move(current), std::move(next.overlaps), std::move(stats)};
        current = std::move(next.phrases);
    }
}

std::vector<FunctionWord> select_function_words(const FittedModel& model, const ModelConfig& config,
                                                const SymmetricIndex& index) {
    const double needed = std::max(1.0, static_cast<double>(index.unit_count()) / config.fw_divisor);
    std::vector<FunctionWord> out;
    for (const auto& [id, m] : model.overlaps.entries()) {
        if (static_cast<double>(m) < needed || id >= model.stats.by_candidate.size()) continue;
        const auto& s = model.stats.by_candidate[id];
        if (!(s.p_pref_boosted + s.p_suf_boosted > config.fw_sum)) continue;
        if (!(s.p_suf_boosted > 0)) continue;
        const double ratio = s.p_pref_boosted / s.p_suf_boosted;
        if (!(ratio > 1.0 / config.fw_ratio && ratio < config.fw_ratio)) continue;
        out.push_back({id, Text(index.candidate_text(id)), s, m});
    }
    std::sort(out.begin(), out.end(), [](const FunctionWord& a, const FunctionWord& b) {
        if (a.overlap_multiplicity != b.overlap_multiplicity) return a.overlap_multiplicity > b.overlap_multiplicity;
        return a.text < b.text;
    });
    return out;
}

std::vector<bool> function_word_mask(const std::vector<FunctionWord>& function_words, std::size_t universe) {
    std::vector<bool> mask(universe, false);
    for (const auto& f : function_words)
        if (f.id < universe) mask[f.id] = true;
    return mask;
}

bool starts_with_function_word(TextView p, const std::vector<bool>& mask, const SymmetricIndex& index) {
    bool found = false;
    index.scan_candidate_suffixes(p, [&](std::uint32_t end, CandidateId id, std::uint32_t len) {
        if (end == len && id < mask.size() && mask[id]) found = true;
    });
    return found;
}

bool ends_with_function_word(TextView p, const std::vector<bool>& mask, const SymmetricIndex& index) {
    bool found = false;
    index.scan_candidate_suffixes(p, [&](std::uint32_t end, CandidateId id, std::uint32_t) {
        if (end == p.size() && id < mask.size() && mask[id]) found = true;
    });
    return found;
}

PhraseMultiset select_phrases(const FittedModel& model, const std::vector<FunctionWord>& function_words,
                              const SymmetricIndex& index) {
    auto mask = function_word_mask(function_words, index.candidate_count());
    mask[kEmptyCandidate] = false;
    PhraseMultiset out(index.candidate_count());
    for (const auto& [id, m] : model.phrases.entries()) {
        if (id == kEmptyCandidate) continue;
        const TextView p = index.candidate_text(id);
        const bool left = index.candidate_unit_prefix(id) || starts_with_function_word(p, mask, index);
        const bool right = index.candidate_unit_suffix(id) || ends_with_function_word(p, mask, index);
        if (left && right) out.set(id, m);
    }
    return out;
}

}  // namespace phrasemine
