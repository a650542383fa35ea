#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "phrasemine/symindex.hpp"

namespace phrasemine {

// Multiset over candidate ids of one index. Absent ids have multiplicity 0.
class PhraseMultiset {
public:
    PhraseMultiset() = default;
    explicit PhraseMultiset(std::size_t universe) : counts_(universe, 0) {}
    PhraseMultiset(std::size_t universe, std::initializer_list<std::pair<CandidateId, std::uint32_t>> entries);

    std::size_t universe() const { return counts_.size(); }
    std::uint32_t count(CandidateId id) const { return id < counts_.size() ? counts_[id] : 0; }
    bool contains(CandidateId id) const { return count(id) > 0; }
    void add(CandidateId id, std::uint32_t n = 1);
    void set(CandidateId id, std::uint32_t n);
    PhraseMultiset& operator+=(const PhraseMultiset& other);

    std::uint64_t total() const;
    std::size_t support() const;
    // Non-zero entries in id order.
    std::vector<std::pair<CandidateId, std::uint32_t>> entries() const;
    const std::vector<std::uint32_t>& counts() const { return counts_; }

    bool operator==(const PhraseMultiset& other) const;

private:
    std::vector<std::uint32_t> counts_;
};

struct MultisetDistance {
    double rho = 0;        // sum |a-b| / sum max(a,b)
    double delta = 0;      // sum (a-b) / sum max(a,b)
    double unit_share = 0; // part of sum |a-b| contributed by entries with |a-b| == 1
};

MultisetDistance compare_multisets(const PhraseMultiset& a, const PhraseMultiset& b);
inline double rho(const PhraseMultiset& a, const PhraseMultiset& b) { return compare_multisets(a, b).rho; }
inline double delta_signed(const PhraseMultiset& a, const PhraseMultiset& b) { return compare_multisets(a, b).delta; }

}  // namespace phrasemine
