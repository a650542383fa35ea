#include "phrasemine/multiset.hpp"

#include <algorithm>
#include <cstdlib>

namespace phrasemine {

PhraseMultiset::PhraseMultiset(std::size_t universe,
                               std::initializer_list<std::pair<CandidateId, std::uint32_t>> entries)
    : counts_(universe, 0) {
    for (const auto& [id, n] : entries) add(id, n);
}

void PhraseMultiset::add(CandidateId id, std::uint32_t n) {
    if (id >= counts_.size()) counts_.resize(id + 1, 0);
    counts_[id] += n;
}

void PhraseMultiset::set(CandidateId id, std::uint32_t n) {
    if (id >= counts_.size()) counts_.resize(id + 1, 0);
    counts_[id] = n;
}

PhraseMultiset& PhraseMultiset::operator+=(const PhraseMultiset& other) {
    if (other.counts_.size() > counts_.size()) counts_.resize(other.counts_.size(), 0);
    for (std::size_t i = 0; i < other.counts_.size(); ++i) counts_[i] += other.counts_[i];
    return *this;
}

std::uint64_t PhraseMultiset::total() const {
    std::uint64_t t = 0;
    for (auto c : counts_) t += c;
    return t;
}

std::size_t PhraseMultiset::support() const {
    return static_cast<std::size_t>(std::count_if(counts_.begin(), counts_.end(), [](auto c) { return c > 0; }));
}

std::vector<std::pair<CandidateId, std::uint32_t>> PhraseMultiset::entries() const {
    std::vector<std::pair<CandidateId, std::uint32_t>> out;
    for (std::size_t i = 0; i < counts_.size(); ++i)
        if (counts_[i]) out.emplace_back(static_cast<CandidateId>(i), counts_[i]);
    return out;
}

bool PhraseMultiset::operator==(const PhraseMultiset& other) const {
    const std::size_t n = std::max(counts_.size(), other.counts_.size());
    for (std::size_t i = 0; i < n; ++i)
        if (count(static_cast<CandidateId>(i)) != other.count(static_cast<CandidateId>(i))) return false;
    return true;
}

MultisetDistance compare_multisets(const PhraseMultiset& a, const PhraseMultiset& b) {
    const std::size_t n = std::max(a.universe(), b.universe());
    std::uint64_t diff = 0, unit_diff = 0, uni = 0;
    std::int64_t signed_diff = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = static_cast<std::int64_t>(a.count(static_cast<CandidateId>(i)));
        const auto y = static_cast<std::int64_t>(b.count(static_cast<CandidateId>(i)));
        const auto d = static_cast<std::uint64_t>(std::llabs(x - y));
        diff += d;
        if (d == 1) ++unit_diff;
        signed_diff += x - y;
        uni += static_cast<std::uint64_t>(std::max(x, y));
    }
    MultisetDistance out;
    if (uni == 0) return out;
    out.rho = static_cast<double>(diff) / static_cast<double>(uni);
    out.delta = static_cast<double>(signed_diff) / static_cast<double>(uni);
    out.unit_share = diff ? static_cast<double>(unit_diff) / static_cast<double>(diff) : 0.0;
    return out;
}

}  // namespace phrasemine
