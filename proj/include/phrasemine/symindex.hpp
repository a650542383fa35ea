#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "phrasemine/corpus.hpp"

namespace phrasemine {

using StateId = std::uint32_t;
using CandidateId = std::uint32_t;

inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();
inline constexpr CandidateId kNoCandidate = std::numeric_limits<CandidateId>::max();
// The empty string is always candidate 0.
inline constexpr CandidateId kEmptyCandidate = 0;

struct Branching {
    bool left_branching = false;
    bool right_branching = false;
    bool unit_prefix = false;
    bool unit_suffix = false;
};

struct CandidateRecord {
    Text text;
    std::uint64_t occ = 0;
    bool unit_prefix = false;
    bool unit_suffix = false;
};

// Substring index over a growing list of units.
//
// Internally a generalized suffix automaton (the uncompacted DAWG). A string is a
// general phrase candidate iff it is the longest member of its state (left branching
// or unit prefix) and its state has two outgoing symbols or ends a unit (right
// branching or unit suffix). Candidates are therefore identified with states.
//
// find/contains/is_candidate are always valid. Everything else reads derived tables
// that refresh() rebuilds; insert_unit(..., false) leaves them stale.
class SymmetricIndex {
public:
    SymmetricIndex();
    static SymmetricIndex build(const Corpus& corpus);

    void insert_unit(TextView unit, bool refresh_tables = true);
    void refresh();
    bool is_fresh() const { return fresh_; }

    std::size_t unit_count() const { return unit_offsets_.size() - 1; }
    std::size_t total_positions() const { return text_.size(); }
    std::size_t state_count() const { return states_.size(); }
    std::size_t transition_count() const { return edges_.size() + root_edges_.size(); }
    TextView unit_text(std::size_t unit) const;

    // Online queries.
    StateId root() const { return 0; }
    StateId step(StateId state, Symbol c) const;
    std::uint32_t state_length(StateId s) const { return states_[s].len; }
    // Candidate test for the string of length `len` that belongs to `state`.
    bool is_candidate_state(StateId state, std::uint32_t len) const;
    std::optional<StateId> find(TextView s) const;
    bool contains(TextView s) const { return find(s).has_value(); }
    bool is_candidate(TextView s) const;

    // Queries on derived tables.
    std::uint64_t occ(TextView s) const;
    Branching branching(TextView s) const;  // throws NotFoundError when s is absent
    std::vector<SubstringRef> occurrences(TextView s, std::size_t limit = std::numeric_limits<std::size_t>::max(),
                                          std::size_t offset = 0) const;
    std::vector<CandidateRecord> enumerate_candidates() const;

    // Dense candidate ids, 0 is the empty string; ids follow state creation order.
    std::size_t candidate_count() const { return candidate_state_.size(); }
    std::optional<CandidateId> candidate_id(TextView s) const;
    TextView candidate_text(CandidateId id) const;
    std::uint32_t candidate_length(CandidateId id) const { return states_[candidate_state_[id]].len; }
    std::uint64_t candidate_occ(CandidateId id) const { return state_occ(candidate_state_[id]); }
    bool candidate_unit_prefix(CandidateId id) const;
    bool candidate_unit_suffix(CandidateId id) const;

    // Calls fn(end, candidate, length) for every non-empty candidate that ends at
    // position `end` of s, for end = 1..|s|, longest first within one end. s must occur
    // in the index. This is the failure-link scan used to build sentence lattices.
    template <class Fn>
    void scan_candidate_suffixes(TextView s, Fn&& fn) const;

    // Online variant for text that need not occur in the index: calls fn(end, length)
    // for every non-empty candidate that is a suffix of s[0, end), longest first.
    // Valid on stale tables. If fn returns bool, false skips the shorter ones.
    template <class Fn>
    void scan_matching_candidates(TextView s, Fn&& fn) const;

    void save(const std::filesystem::path& path, const std::string& corpus_digest) const;
    static SymmetricIndex load(const std::filesystem::path& path, const std::string& expected_digest);

private:
    struct State {
        std::uint32_t len = 0;
        StateId link = kNoState;
        std::uint32_t first_edge = kNil;
        std::uint32_t end_pos = 0;   // end of some occurrence of the longest member (global)
        std::uint32_t own = 0;       // number of text positions whose prefix state this is
        std::uint32_t outdeg = 0;
        std::uint32_t flags = 0;     // full word so snapshots carry no padding bytes
    };
    struct Edge {
        Symbol symbol;
        StateId target;
        std::uint32_t next;
    };
    static constexpr std::uint32_t kNil = std::numeric_limits<std::uint32_t>::max();
    static constexpr std::uint8_t kUnitPrefix = 1;  // longest member starts a unit
    static constexpr std::uint8_t kUnitSuffix = 2;  // some occurrence ends a unit

    StateId new_state(std::uint32_t len, std::uint32_t end_pos);
    StateId clone_state(StateId q, std::uint32_t len);
    void set_transition(StateId s, Symbol c, StateId target);
    void redirect(StateId s, Symbol c, StateId target);
    std::uint64_t state_occ(StateId s) const;
    void require_fresh() const;
    SubstringRef global_to_ref(std::uint32_t global_start, std::uint32_t len) const;

    std::vector<State> states_;
    std::vector<Edge> edges_;
    std::unordered_map<Symbol, StateId> root_edges_;
    Text text_;                               // all units concatenated
    std::vector<std::uint32_t> unit_offsets_; // size unit_count + 1
    std::vector<StateId> prefix_state_;       // state of text_[unit start .. g], per position g

    bool fresh_ = true;
    // Derived tables.
    std::vector<CandidateId> candidate_of_;   // per state
    std::vector<StateId> candidate_state_;    // per candidate
    std::vector<StateId> candidate_anc_;      // nearest candidate on the suffix-link path, inclusive
    std::vector<std::uint32_t> link_children_;
    std::vector<std::uint32_t> tin_, tout_;   // Euler interval of the suffix-link tree
    std::vector<std::uint32_t> tin_count_;    // prefix counts of positions by tin
    std::vector<std::uint32_t> positions_by_tin_;
};

template <class Fn>
void SymmetricIndex::scan_candidate_suffixes(TextView s, Fn&& fn) const {
    require_fresh();
    StateId state = 0;
    for (std::uint32_t j = 1; j <= s.size(); ++j) {
        state = step(state, s[j - 1]);
        if (state == kNoState) throw std::invalid_argument("scanned text does not occur in the index");
        StateId t = states_[state].len == j ? state : states_[state].link;
        t = candidate_anc_[t];
        while (t != 0) {
            fn(j, candidate_of_[t], states_[t].len);
            t = candidate_anc_[states_[t].link];
        }
    }
}

template <class Fn>
void SymmetricIndex::scan_matching_candidates(TextView s, Fn&& fn) const {
    StateId state = 0;
    std::uint32_t matched = 0;
    for (std::uint32_t j = 1; j <= s.size(); ++j) {
        const Symbol c = s[j - 1];
        while (state != 0 && step(state, c) == kNoState) {
            state = states_[state].link;
            matched = states_[state].len;
        }
        const StateId next = step(state, c);
        if (next == kNoState) {
            matched = 0;
            continue;
        }
        state = next;
        ++matched;
        // only the longest member of a state can be a candidate
        StateId t = states_[state].len == matched ? state : states_[state].link;
        for (; t != 0; t = states_[t].link) {
            if (!is_candidate_state(t, states_[t].len)) continue;
            if constexpr (std::is_same_v<std::invoke_result_t<Fn&, std::uint32_t, std::uint32_t>, bool>) {
                if (!fn(j, states_[t].len)) break;
            } else {
                fn(j, states_[t].len);
            }
        }
    }
}

}  // namespace phrasemine
