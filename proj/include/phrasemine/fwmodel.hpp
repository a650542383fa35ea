#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "phrasemine/decompose.hpp"
#include "phrasemine/multiset.hpp"
#include "phrasemine/symindex.hpp"

namespace phrasemine {

struct ModelConfig {
    double theta = 1e-6;            // halting slack
    double fw_divisor = 1000;       // function words need multiplicity >= units / divisor
    double fw_sum = 0.4;            // boosted prefix + suffix probability must exceed this
    double fw_ratio = 4;            // prefix / suffix ratio must lie in (1/ratio, ratio)
    unsigned max_iterations = 100;
    unsigned threads = 0;           // 0: one per core

    void validate() const;
};

struct FunctionWordStats {
    std::uint64_t pref = 0, suff = 0, inf = 0, ov = 0;
    double p_pref = 0, p_suf = 0;
    double p_pref_boosted = 0, p_suf_boosted = 0;

    double p_fw() const { return p_pref_boosted * p_suf_boosted; }
};

// Fills p_pref/p_suf and the boosted pair from the four counts. The overlap value
// is split between prefix and suffix in proportion to the raw probabilities.
void apply_boost(FunctionWordStats& s);

struct StatsTable {
    std::vector<FunctionWordStats> by_candidate;  // indexed by candidate id, 0 = empty string
    std::size_t boost_violations = 0;             // entries with boosted sum above 1

    std::vector<double> p_fw() const;
};

// Per candidate: multiplicity-weighted counts as proper prefix, proper suffix and
// infix (every position) of the phrases, plus the overlap value and boosted
// probabilities. The empty string is a prefix and a suffix of every phrase and
// occurs at |P| + 1 positions.
StatsTable compute_stats(const PhraseMultiset& phrases, const SymmetricIndex& index, unsigned threads = 0);

struct StableBoundaries {
    std::vector<std::uint32_t> prefix_lengths;  // increasing
    std::vector<std::uint32_t> suffix_lengths;  // increasing
};

// Proper prefixes (suffixes) of the phrase that are phrases and such that every
// longer proper prefix (suffix) that is a candidate is a phrase too.
StableBoundaries stable_boundaries(TextView phrase, const PhraseMultiset& phrases, const SymmetricIndex& index);
std::uint64_t overlap_value(TextView f, const PhraseMultiset& phrases, const SymmetricIndex& index);

// P_0: every non-empty candidate with its occurrence count.
PhraseMultiset initial_phrases(const SymmetricIndex& index);

struct IterationRecord {
    std::uint32_t iteration = 0;
    double rho = 0;
    double delta = 0;
    double unit_share = 0;          // share of rho from +-1 multiplicity changes
    std::size_t boost_violations = 0;
    std::size_t undecomposable = 0;
    double seconds = 0;
};

struct FittedModel {
    PhraseMultiset phrases;    // P_n
    PhraseMultiset overlaps;   // optimal overlaps of the pass driven by P_n
    StatsTable stats;          // statistics of P_n
    std::uint32_t final_iteration = 0;  // n
    std::vector<IterationRecord> trace;  // one entry per pass, rho_i = rho(P_i, P_i+1)
    std::size_t boost_violations = 0;   // summed over all passes

    double p_fw(CandidateId id) const { return id < stats.by_candidate.size() ? stats.by_candidate[id].p_fw() : 0.0; }
};

class FitError : public std::runtime_error {
public:
    FitError(const std::string& what, std::vector<IterationRecord> trace)
        : std::runtime_error(what), trace(std::move(trace)) {}
    std::vector<IterationRecord> trace;
};

using FitProgress = std::function<void(const IterationRecord&)>;

// Iterates statistics -> boosted probabilities -> optimal decompositions until the
// first pass k >= 2 with rho_k >= rho_{k-1} - theta, and returns the state of pass
// k - 1.
FittedModel fit(const SymmetricIndex& index, const ModelConfig& config, const FitProgress& progress = {});

struct FunctionWord {
    CandidateId id = kNoCandidate;
    Text text;
    FunctionWordStats stats;
    std::uint32_t overlap_multiplicity = 0;
};

// Ranked by overlap multiplicity, ties by text.
std::vector<FunctionWord> select_function_words(const FittedModel& model, const ModelConfig& config,
                                                const SymmetricIndex& index);

// Phrases of P_n that start with a non-empty function word or begin a unit, and end
// with a non-empty function word or end a unit.
PhraseMultiset select_phrases(const FittedModel& model, const std::vector<FunctionWord>& function_words,
                              const SymmetricIndex& index);

// Candidate-id membership table for a function-word list.
std::vector<bool> function_word_mask(const std::vector<FunctionWord>& function_words, std::size_t universe);

bool starts_with_function_word(TextView p, const std::vector<bool>& mask, const SymmetricIndex& index);
bool ends_with_function_word(TextView p, const std::vector<bool>& mask, const SymmetricIndex& index);

}  // namespace phrasemine
