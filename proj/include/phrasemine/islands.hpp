#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "phrasemine/corpus.hpp"
#include "phrasemine/fwmodel.hpp"
#include "phrasemine/symindex.hpp"

namespace phrasemine {

// Stands for one island in an abstracted unit. Private-use code point, so corpus
// text containing it is rejected.
inline constexpr Symbol kUnknownSymbol = U'\uE000';

class ReservedSymbolError : public Error {
public:
    using Error::Error;
};

using Span = std::pair<std::uint32_t, std::uint32_t>;  // [first, second) within one unit

struct IslandPhrase {
    SubstringRef ref;   // extended island
    Text text;
    SubstringRef core;  // maximal uncovered infix
};

// Shortest function word starting (ending) at each position of a unit; 0 = none.
struct FunctionWordBorders {
    std::vector<std::uint32_t> shortest_from;
    std::vector<std::uint32_t> shortest_to;

    std::uint32_t length() const { return static_cast<std::uint32_t>(shortest_from.size()) - 1; }
    // [i, j) starts at the unit start or with a non-empty function word, ends at the
    // unit end or with one, and the two borders leave something in between.
    bool bounds(std::uint32_t i, std::uint32_t j) const;
};

// unit must occur in `full`, whose candidate ids the mask refers to.
FunctionWordBorders function_word_borders(const SymmetricIndex& full, const std::vector<bool>& fw_mask,
                                          TextView unit);

// Per end position, the longest function-word-bounded candidate of `prefix` ending
// there (shorter ones add no coverage). `prefix` may have stale tables.
std::vector<Span> covered_spans(const SymmetricIndex& prefix, TextView unit, const FunctionWordBorders& borders);
std::vector<Span> uncovered_runs(std::uint32_t length, const std::vector<Span>& covered);
// Grows a core to the nearest delimiting function word on each side, or the unit border.
Span extend_island(Span core, const FunctionWordBorders& borders);

// Islands of one unit against an index of the units before it.
std::vector<IslandPhrase> unit_islands(const SymmetricIndex& prefix, const SymmetricIndex& full,
                                       const std::vector<bool>& fw_mask, std::uint32_t unit);

// Dynamic pass over the units of `full` in corpus order.
std::vector<IslandPhrase> extended_islands(const SymmetricIndex& full, const std::vector<FunctionWord>& fws);

struct IslandSpan {
    std::uint32_t position = 0;  // of the UNK symbol in the abstract unit
    SubstringRef original;
    Text text;  // the island it replaces
};

struct AbstractCorpus {
    Corpus corpus;
    std::vector<std::vector<IslandSpan>> islands;  // per unit, increasing position

    // Maps a span of an abstract unit back to the original corpus.
    SubstringRef pull_back(std::uint32_t unit, std::uint32_t start, std::uint32_t end) const;
    // The abstract span with each UNK replaced by its island.
    Text instantiate(std::uint32_t unit, std::uint32_t start, std::uint32_t end) const;
};

// Replaces every island core by one UNK symbol.
AbstractCorpus abstract_corpus(const Corpus& corpus, const std::vector<IslandPhrase>& islands);

struct IslandInstance {
    SubstringRef ref;
    Text text;
};

struct IslandScheme {
    Text abstract_text;
    std::uint64_t count = 0;  // multiplicity among the phrases of the abstract corpus
    std::vector<IslandInstance> instances;
};

// Fits a fresh model on the abstract corpus; its phrases containing UNK become schemes,
// ordered by count and then text.
std::vector<IslandScheme> island_schemes(const AbstractCorpus& abstract, const ModelConfig& config,
                                         std::size_t max_instances = 5);

// UNK written as the three letters, for reports.
std::string render_abstract(TextView text);

}  // namespace phrasemine
