#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "phrasemine/subphrase.hpp"

namespace phrasemine {

class NoChildError : public Error {
public:
    using Error::Error;
};

// The child with the fewest corpus occurrences, leftmost on ties.
CandidateId most_specific_child(const SymmetricIndex& index, const PhraseSplit& split);

// Forest of most specific subphrases over every node of the phrases' decomposition trees.
struct MssForest {
    std::vector<CandidateId> nodes;                    // ascending
    std::vector<CandidateId> roots;                    // atomic nodes, ascending
    std::unordered_map<CandidateId, CandidateId> msc;  // non-atomic node -> most specific child
    std::unordered_map<CandidateId, std::uint64_t> rho;  // root -> distinct phrases below it

    CandidateId root_of(CandidateId node) const;
    std::size_t chain_length(CandidateId node) const;
};

MssForest build_mss_forest(SubphraseModel& model, const PhraseMultiset& phrases);

struct RankedKernel {
    Text kernel;
    std::uint64_t score = 0;
    std::uint32_t rank = 0;  // 1-based
    std::vector<std::optional<std::uint32_t>> comparison_ranks;  // absent: not ranked there
};

struct KernelRanking {
    std::vector<RankedKernel> entries;  // score non-increasing, ties by text

    std::optional<std::uint32_t> rank_of(TextView kernel) const;
};

// Roots grouped by kernel; a kernel scores the phrases below all its roots. Empty
// kernels are left out.
KernelRanking characteristic_kernels(const MssForest& forest, const SubphraseModel& model);

// Keeps kernels whose rank in every comparison is absent or at least rank_cut, and
// records the comparison ranks.
KernelRanking terminological_kernels(const KernelRanking& ranking, const std::vector<KernelRanking>& comparisons,
                                     std::uint32_t rank_cut);

struct Expansion {
    Text text;
    std::uint64_t occ = 0;
};

// Strips function-word borders while the kernel stays inside, longest border first.
// nullopt when a border remains that cannot go without cutting into the kernel.
std::optional<Text> trim_borders(TextView text, TextView kernel, const std::vector<bool>& fw_mask,
                                 const SymmetricIndex& index);

// Phrases containing the kernel, trimmed, merged with summed corpus occurrences,
// by occurrences then text.
std::vector<Expansion> kernel_expansion(TextView kernel, const PhraseMultiset& phrases,
                                        const std::vector<bool>& fw_mask, const SymmetricIndex& index,
                                        std::size_t limit = std::numeric_limits<std::size_t>::max());

struct NetworkEdge {
    CandidateId first = kNoCandidate;
    CandidateId phrase = kNoCandidate;
    CandidateId second = kNoCandidate;
    std::uint64_t weight = 0;  // phrase multiplicity
};

struct PhraseNetwork {
    std::vector<CandidateId> vertices;  // atoms on some edge, ascending
    std::vector<NetworkEdge> edges;
};

// Atoms reached through msc chains from every node of a phrase's tree are linked in
// pairs through that phrase. With seeds, only edges touching an atom whose text or
// kernel is a seed are kept.
PhraseNetwork phrase_network(SubphraseModel& model, const MssForest& forest, const PhraseMultiset& phrases,
                             const std::vector<Text>& seeds = {});

void write_network_tsv(std::ostream& out, const PhraseNetwork& net, const SymmetricIndex& index);
void write_network_dot(std::ostream& out, const PhraseNetwork& net, const SymmetricIndex& index);

// White-space count minus one, plus one for each unit border the phrase touches.
int word_count(TextView phrase, bool unit_prefix, bool unit_suffix);

struct LengthRow {
    int words = 0;
    std::uint64_t phrases = 0;     // distinct phrases with this word count
    std::uint64_t uses = 0;        // summed multiplicities, M(w)
    std::uint64_t occurrences = 0; // summed corpus occurrences, O(w)

    double ratio() const { return occurrences ? static_cast<double>(uses) / static_cast<double>(occurrences) : 0.0; }
};

// Rows for word counts -1 .. max_words.
std::vector<LengthRow> length_stats(const PhraseMultiset& phrases, const SymmetricIndex& index, int max_words = 30);

}  // namespace phrasemine
