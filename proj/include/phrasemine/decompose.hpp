#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "phrasemine/lattice.hpp"
#include "phrasemine/multiset.hpp"
#include "phrasemine/symindex.hpp"

namespace phrasemine {

// Log weight standing in for probability zero when a single number is reported.
inline constexpr double kZeroLogFloor = -1e9;

// Every [i, j) of s whose text is a non-empty candidate, sorted by (start, end).
std::vector<LatticeInterval> candidate_intervals(const SymmetricIndex& index, TextView s);

struct SentenceDecomposition {
    std::uint32_t unit = 0;
    std::uint32_t length = 0;
    bool decomposable = false;
    Score score;
    std::vector<LatticeInterval> optimal_intervals;
    std::vector<LatticeInterval> optimal_overlaps;
    // One representative optimal chain and its overlaps; empty unless requested.
    std::vector<LatticeInterval> path;
    std::vector<LatticeInterval> path_overlaps;

    double log_score() const { return score.floored(kZeroLogFloor); }
};

// Per-candidate overlap weights from probabilities; zero or negative maps to "zero".
std::vector<OverlapWeight> weights_from_probabilities(std::span<const double> p);

SentenceDecomposition decompose_sentence(const SymmetricIndex& index, std::uint32_t unit,
                                         std::span<const OverlapWeight> weights, bool with_path = false);

struct CollectedMultisets {
    PhraseMultiset phrases;
    PhraseMultiset overlaps;
    std::size_t undecomposable = 0;  // units counted whole
};

// Multiplicities summed over all units. A unit without a decomposition adds its
// whole text once. threads == 0 means one per hardware core.
CollectedMultisets collect_multisets(const SymmetricIndex& index, std::span<const OverlapWeight> weights,
                                     unsigned threads = 0);

// Tab-separated: unit, score, parts as start-end pairs, overlaps as start-end pairs.
void write_decomposition(std::ostream& out, const SentenceDecomposition& d);
// Parts alternate between raised and lowered parentheses; an overlap sits between
// the opening of the next part and the closing of the previous one.
std::string bracket_notation(TextView sentence, const std::vector<LatticeInterval>& path);

unsigned resolve_threads(unsigned requested);

}  // namespace phrasemine
