#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "phrasemine/fwmodel.hpp"
#include "phrasemine/lattice.hpp"

namespace phrasemine {

class MalformedTreeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One selected optimal decomposition of a (sub)phrase into shorter candidates whose
// overlaps are all function words.
struct PhraseSplit {
    bool atomic = true;
    std::vector<LatticeInterval> parts;     // relative to the phrase
    std::vector<LatticeInterval> overlaps;  // between consecutive parts
};

struct TreeNode {
    CandidateId id = kNoCandidate;
    std::uint32_t start = 0, end = 0;  // span within the root phrase
    Text kernel;
    std::vector<std::size_t> children;
};

struct DecompositionTree {
    Text root;
    std::vector<TreeNode> nodes;  // nodes[0] is the root; children follow their parent

    std::vector<std::size_t> leaves() const;
};

struct FunctionalScheme {
    // Function-word slots in order. A leading (trailing) slot is dropped when it is
    // empty and the phrase starts (ends) a unit.
    std::vector<Text> slots;
    bool leading_slot = true;
    bool trailing_slot = true;
    std::vector<Text> kernels;  // A_1 .. A_n

    std::size_t arity() const { return kernels.size(); }
    // Slots joined by '|'.
    std::string render() const;
    // Re-interleaves slots and kernels. Only meaningful when no slot was dropped
    // or the dropped slot was empty, which is always the case.
    Text reconstruct() const;
};

struct SchemeCount {
    std::string frame;
    std::uint64_t count = 0;
    std::vector<Text> instances;
};

class SubphraseModel {
public:
    SubphraseModel(const SymmetricIndex& index, const FittedModel& model, const std::vector<FunctionWord>& fws);

    const SymmetricIndex& index() const { return index_; }
    bool is_function_word(CandidateId id) const { return id < fw_mask_.size() && fw_mask_[id]; }

    // Optimal decompositions of the phrase restricted to function-word overlaps.
    Lattice lattice(CandidateId phrase) const;
    const PhraseSplit& split(CandidateId phrase);
    bool is_atomic(CandidateId phrase) { return split(phrase).atomic; }

    // Recursive decomposition; nodes deeper than max_depth are left unsplit.
    DecompositionTree tree(CandidateId phrase, std::uint32_t max_depth = std::numeric_limits<std::uint32_t>::max());

    // Drops the most probable function-word prefix and suffix (ties: the longer one).
    Text kernel(TextView p) const;
    // proper: ignore a function word spanning all of p
    std::uint32_t kernel_prefix_length(TextView p, bool proper = false) const;
    std::uint32_t kernel_suffix_length(TextView p, bool proper = false) const;

    // Slots are the merged function-word regions of the tree, kernels the gaps between
    // them. Throws MalformedTreeError when children do not chain over their parent.
    FunctionalScheme scheme(const DecompositionTree& tree) const;
    // Whether all optimal decomposition trees share one leaf representation.
    bool unique_leaf_representation(CandidateId phrase);

    std::vector<SchemeCount> all_schemes(const PhraseMultiset& phrases, std::size_t max_instances = 3,
                                         std::size_t* malformed = nullptr);

private:
    // Function-word spans [a, b) within a phrase: split overlaps at every level and
    // the stripped borders of every leaf.
    struct Region {
        std::uint32_t start = 0, end = 0;
        bool overlap = false;  // from a split rather than a leaf border
        auto operator<=>(const Region&) const = default;
    };
    using RegionSet = std::vector<Region>;
    RegionSet border_regions(CandidateId id, std::uint32_t offset) const;
    double fw_probability(TextView f) const;
    FunctionalScheme scheme_from_regions(TextView phrase, CandidateId id, RegionSet regions) const;
    const std::vector<RegionSet>& region_sets(CandidateId phrase);

    const SymmetricIndex& index_;
    std::vector<bool> fw_mask_;
    std::vector<double> p_fw_;
    std::vector<OverlapWeight> weights_;
    std::unordered_map<CandidateId, PhraseSplit> splits_;
    std::unordered_map<CandidateId, std::vector<RegionSet>> region_sets_;
};

// Cap on distinct region sets kept per phrase when testing uniqueness.
inline constexpr std::size_t kRegionSetCap = 8;

}  // namespace phrasemine
