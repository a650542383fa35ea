#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "phrasemine/symindex.hpp"

namespace phrasemine {

// Half-open span [start, end) of a string together with the candidate id of its text.
struct LatticeInterval {
    std::uint32_t start = 0;
    std::uint32_t end = 0;
    CandidateId cid = kNoCandidate;

    std::uint32_t length() const { return end - start; }
    auto operator<=>(const LatticeInterval&) const = default;
};

enum class OverlapKind : std::uint8_t { forbidden, zero, positive };

struct OverlapWeight {
    OverlapKind kind = OverlapKind::forbidden;
    double log_p = 0;

    static OverlapWeight from_probability(double p);
};

// Path score. Fewer zero-probability overlaps always wins, then the larger log sum.
// This orders paths exactly as a finite log floor for zero would, without the floor
// swallowing the real log mass.
struct Score {
    std::int32_t zeros = std::numeric_limits<std::int32_t>::max();
    double log_p = 0;

    static Score origin() { return {0, 0.0}; }
    bool valid() const { return zeros != std::numeric_limits<std::int32_t>::max(); }
    double floored(double zero_log) const { return log_p + zeros * zero_log; }
};

bool better(const Score& a, const Score& b);
bool same_score(const Score& a, const Score& b);

// All likelihood-optimal chains of overlapping intervals covering [0, length).
//
// Consecutive parts J, K satisfy J.start < K.start <= J.end < K.end; their overlap
// [K.start, J.end) is weighted by weights[cid of the overlap], with cid 0 for the
// empty overlap. A nonempty overlap has to be one of the intervals itself. The
// interval covering the whole span is dropped, so every chain has at least two parts.
class Lattice {
public:
    Lattice(std::uint32_t length, std::vector<LatticeInterval> intervals, std::span<const OverlapWeight> weights);

    std::uint32_t length() const { return length_; }
    bool decomposable() const { return best_.valid(); }
    Score best() const { return best_; }
    // Sorted by (start, end).
    const std::vector<LatticeInterval>& intervals() const { return iv_; }

    // Intervals and overlaps that lie on at least one optimal chain, sorted.
    std::vector<LatticeInterval> optimal_intervals() const;
    std::vector<LatticeInterval> optimal_overlaps() const;
    bool is_optimal(std::size_t interval) const;

    // Arcs J -> K that continue an optimal chain. Indices into intervals().
    std::vector<std::uint32_t> tight_successors(std::uint32_t interval) const;
    std::vector<std::uint32_t> optimal_starts() const;
    // One optimal chain: fewest parts first, then shortest first part; afterwards the
    // earliest next start, fewest remaining parts, shortest part.
    std::vector<std::uint32_t> canonical_path() const;
    // Number of optimal chains, saturating at cap.
    std::uint64_t optimal_path_count(std::uint64_t cap = std::numeric_limits<std::uint64_t>::max()) const;

private:
    OverlapWeight weight(CandidateId cid) const {
        return cid < weights_.size() ? weights_[cid] : OverlapWeight{};
    }
    Score best_end_before(std::uint32_t end, std::uint32_t start_below) const;
    Score best_start_after(std::uint32_t start, std::uint32_t end_above) const;
    std::vector<std::uint32_t> min_parts() const;

    std::uint32_t length_;
    std::vector<LatticeInterval> iv_;
    std::span<const OverlapWeight> weights_;
    std::vector<std::vector<std::uint32_t>> by_start_;  // sorted by end
    std::vector<std::vector<std::uint32_t>> by_end_;    // sorted by start
    std::vector<std::vector<Score>> prefix_best_;       // along by_end_, max fwd
    std::vector<std::vector<Score>> suffix_best_;       // along by_start_, max bwd
    std::vector<Score> fwd_, bwd_;
    Score best_;
};

}  // namespace phrasemine
