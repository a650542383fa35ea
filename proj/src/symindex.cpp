#include "phrasemine/symindex.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <type_traits>

namespace phrasemine {

SymmetricIndex::SymmetricIndex() {
    states_.push_back(State{});
    unit_offsets_.push_back(0);
    refresh();
}

SymmetricIndex SymmetricIndex::build(const Corpus& corpus) {
    SymmetricIndex index;
    index.states_.reserve(corpus.symbol_count() * 2 + 1);
    index.edges_.reserve(corpus.symbol_count() * 2);
    index.text_.reserve(corpus.symbol_count());
    index.prefix_state_.reserve(corpus.symbol_count());
    for (const auto& unit : corpus.units()) index.insert_unit(unit, false);
    index.refresh();
    return index;
}

TextView SymmetricIndex::unit_text(std::size_t unit) const {
    if (unit + 1 >= unit_offsets_.size()) throw std::out_of_range("unit id out of range");
    return TextView(text_).substr(unit_offsets_[unit], unit_offsets_[unit + 1] - unit_offsets_[unit]);
}

StateId SymmetricIndex::step(StateId state, Symbol c) const {
    if (state == 0) {
        auto it = root_edges_.find(c);
        return it == root_edges_.end() ? kNoState : it->second;
    }
    for (std::uint32_t e = states_[state].first_edge; e != kNil; e = edges_[e].next) {
        if (edges_[e].symbol == c) return edges_[e].target;
    }
    return kNoState;
}

StateId SymmetricIndex::new_state(std::uint32_t len, std::uint32_t end_pos) {
    State s;
    s.len = len;
    s.end_pos = end_pos;
    states_.push_back(s);
    return static_cast<StateId>(states_.size() - 1);
}

void SymmetricIndex::set_transition(StateId s, Symbol c, StateId target) {
    if (s == 0) {
        root_edges_[c] = target;
        return;
    }
    edges_.push_back(Edge{c, target, states_[s].first_edge});
    states_[s].first_edge = static_cast<std::uint32_t>(edges_.size() - 1);
    ++states_[s].outdeg;
}

void SymmetricIndex::redirect(StateId s, Symbol c, StateId target) {
    if (s == 0) {
        root_edges_[c] = target;
        return;
    }
    for (std::uint32_t e = states_[s].first_edge; e != kNil; e = edges_[e].next) {
        if (edges_[e].symbol == c) {
            edges_[e].target = target;
            return;
        }
    }
}

StateId SymmetricIndex::clone_state(StateId q, std::uint32_t len) {
    const StateId clone = new_state(len, states_[q].end_pos);
    states_[clone].link = states_[q].link;
    states_[clone].flags = states_[q].flags & kUnitSuffix;
    // Collect first: set_transition prepends, so walk q's list in reverse to keep order.
    std::vector<std::pair<Symbol, StateId>> out;
    for (std::uint32_t e = states_[q].first_edge; e != kNil; e = edges_[e].next) {
        out.emplace_back(edges_[e].symbol, edges_[e].target);
    }
    for (auto it = out.rbegin(); it != out.rend(); ++it) set_transition(clone, it->first, it->second);
    states_[q].link = clone;
    return clone;
}

void SymmetricIndex::insert_unit(TextView unit, bool refresh_tables) {
    if (unit.empty()) throw std::invalid_argument("cannot insert an empty unit");
    fresh_ = false;
    StateId last = 0;
    for (Symbol c : unit) {
        text_.push_back(c);
        const auto end_pos = static_cast<std::uint32_t>(text_.size());
        StateId q = step(last, c);
        if (q != kNoState) {
            if (states_[last].len + 1 == states_[q].len) {
                last = q;
            } else {
                const StateId clone = clone_state(q, states_[last].len + 1);
                for (StateId p = last; p != kNoState && step(p, c) == q; p = states_[p].link) redirect(p, c, clone);
                last = clone;
            }
        } else {
            const StateId cur = new_state(states_[last].len + 1, end_pos);
            StateId p = last;
            while (p != kNoState && step(p, c) == kNoState) {
                set_transition(p, c, cur);
                p = states_[p].link;
            }
            if (p == kNoState) {
                states_[cur].link = 0;
            } else {
                q = step(p, c);
                if (states_[p].len + 1 == states_[q].len) {
                    states_[cur].link = q;
                } else {
                    const StateId clone = clone_state(q, states_[p].len + 1);
                    for (; p != kNoState && step(p, c) == q; p = states_[p].link) redirect(p, c, clone);
                    states_[cur].link = clone;
                }
            }
            last = cur;
        }
        ++states_[last].own;
        states_[last].flags |= kUnitPrefix;
        prefix_state_.push_back(last);
    }
    unit_offsets_.push_back(static_cast<std::uint32_t>(text_.size()));
    // Every suffix of the unit ends a unit. Ancestors of a flagged state are flagged.
    for (StateId p = last; p != 0 && !(states_[p].flags & kUnitSuffix); p = states_[p].link) {
        states_[p].flags |= kUnitSuffix;
    }
    if (refresh_tables) refresh();
}

bool SymmetricIndex::is_candidate_state(StateId state, std::uint32_t len) const {
    if (state == 0) return len == 0;
    const State& s = states_[state];
    return s.len == len && (s.outdeg >= 2 || (s.flags & kUnitSuffix));
}

void SymmetricIndex::refresh() {
    const std::size_t n = states_.size();

    link_children_.assign(n, 0);
    for (std::size_t s = 1; s < n; ++s) ++link_children_[states_[s].link];

    candidate_of_.assign(n, kNoCandidate);
    candidate_state_.clear();
    candidate_of_[0] = kEmptyCandidate;
    candidate_state_.push_back(0);
    for (std::size_t s = 1; s < n; ++s) {
        if (is_candidate_state(static_cast<StateId>(s), states_[s].len)) {
            candidate_of_[s] = static_cast<CandidateId>(candidate_state_.size());
            candidate_state_.push_back(static_cast<StateId>(s));
        }
    }

    // Suffix-link tree in CSR form; children in state order.
    std::vector<std::uint32_t> child_begin(n + 1, 0);
    for (std::size_t s = 1; s < n; ++s) ++child_begin[states_[s].link + 1];
    for (std::size_t i = 0; i < n; ++i) child_begin[i + 1] += child_begin[i];
    std::vector<StateId> children(n > 0 ? n - 1 : 0);
    {
        std::vector<std::uint32_t> fill(child_begin.begin(), child_begin.end() - 1);
        for (std::size_t s = 1; s < n; ++s) children[fill[states_[s].link]++] = static_cast<StateId>(s);
    }

    // Preorder walk: assigns Euler intervals and propagates nearest candidate ancestors.
    candidate_anc_.assign(n, 0);
    tin_.assign(n, 0);
    tout_.assign(n, 0);
    std::vector<std::pair<StateId, std::uint32_t>> stack;
    stack.reserve(64);
    std::uint32_t clock = 0;
    stack.emplace_back(0, child_begin[0]);
    tin_[0] = clock++;
    while (!stack.empty()) {
        auto& [s, next] = stack.back();
        if (next == child_begin[s + 1]) {
            tout_[s] = clock - 1;
            stack.pop_back();
            continue;
        }
        const StateId c = children[next++];
        tin_[c] = clock++;
        candidate_anc_[c] = candidate_of_[c] != kNoCandidate ? c : candidate_anc_[states_[c].link];
        stack.emplace_back(c, child_begin[c]);
    }

    tin_count_.assign(n + 1, 0);
    for (StateId st : prefix_state_) ++tin_count_[tin_[st] + 1];
    for (std::size_t i = 0; i < n; ++i) tin_count_[i + 1] += tin_count_[i];
    positions_by_tin_.assign(prefix_state_.size(), 0);
    {
        std::vector<std::uint32_t> fill(tin_count_.begin(), tin_count_.end() - 1);
        for (std::size_t g = 0; g < prefix_state_.size(); ++g) {
            positions_by_tin_[fill[tin_[prefix_state_[g]]]++] = static_cast<std::uint32_t>(g);
        }
    }
    fresh_ = true;
}

void SymmetricIndex::require_fresh() const {
    if (!fresh_) throw std::logic_error("index tables are stale; call refresh() after insert_unit");
}

std::optional<StateId> SymmetricIndex::find(TextView s) const {
    StateId st = 0;
    for (Symbol c : s) {
        st = step(st, c);
        if (st == kNoState) return std::nullopt;
    }
    return st;
}

bool SymmetricIndex::is_candidate(TextView s) const {
    if (s.empty()) return true;
    auto st = find(s);
    return st && is_candidate_state(*st, static_cast<std::uint32_t>(s.size()));
}

std::uint64_t SymmetricIndex::state_occ(StateId s) const {
    require_fresh();
    if (s == 0) return text_.size() + unit_count();
    return tin_count_[tout_[s] + 1] - tin_count_[tin_[s]];
}

std::uint64_t SymmetricIndex::occ(TextView s) const {
    require_fresh();
    auto st = find(s);
    return st ? state_occ(*st) : 0;
}

Branching SymmetricIndex::branching(TextView s) const {
    require_fresh();
    if (s.empty()) return Branching{true, true, true, true};
    auto st = find(s);
    if (!st) throw NotFoundError("string does not occur in the corpus");
    const State& state = states_[*st];
    const bool longest = state.len == s.size();
    Branching b;
    b.left_branching = longest && link_children_[*st] >= 2;
    b.unit_prefix = longest && (state.flags & kUnitPrefix);
    b.right_branching = state.outdeg >= 2;
    b.unit_suffix = (state.flags & kUnitSuffix) != 0;
    return b;
}

SubstringRef SymmetricIndex::global_to_ref(std::uint32_t global_start, std::uint32_t len) const {
    auto it = std::upper_bound(unit_offsets_.begin(), unit_offsets_.end(), global_start);
    const auto unit = static_cast<std::uint32_t>(it - unit_offsets_.begin() - 1);
    const std::uint32_t start = global_start - unit_offsets_[unit];
    return SubstringRef{unit, start, start + len};
}

std::vector<SubstringRef> SymmetricIndex::occurrences(TextView s, std::size_t limit, std::size_t offset) const {
    require_fresh();
    std::vector<SubstringRef> out;
    if (s.empty()) return out;
    auto st = find(s);
    if (!st) return out;
    const std::uint32_t lo = tin_count_[tin_[*st]];
    const std::uint32_t hi = tin_count_[tout_[*st] + 1];
    std::vector<std::uint32_t> ends(positions_by_tin_.begin() + lo, positions_by_tin_.begin() + hi);
    std::sort(ends.begin(), ends.end());
    const auto len = static_cast<std::uint32_t>(s.size());
    for (std::size_t i = offset; i < ends.size() && out.size() < limit; ++i) {
        out.push_back(global_to_ref(ends[i] + 1 - len, len));
    }
    return out;
}

std::vector<CandidateRecord> SymmetricIndex::enumerate_candidates() const {
    require_fresh();
    std::vector<CandidateRecord> out;
    out.reserve(candidate_state_.size());
    for (CandidateId id = 0; id < candidate_state_.size(); ++id) {
        out.push_back(CandidateRecord{Text(candidate_text(id)), candidate_occ(id), candidate_unit_prefix(id),
                                      candidate_unit_suffix(id)});
    }
    return out;
}

std::optional<CandidateId> SymmetricIndex::candidate_id(TextView s) const {
    require_fresh();
    if (s.empty()) return kEmptyCandidate;
    auto st = find(s);
    if (!st || states_[*st].len != s.size()) return std::nullopt;
    const CandidateId id = candidate_of_[*st];
    if (id == kNoCandidate) return std::nullopt;
    return id;
}

TextView SymmetricIndex::candidate_text(CandidateId id) const {
    if (id == kEmptyCandidate) return {};
    const State& s = states_[candidate_state_[id]];
    return TextView(text_).substr(s.end_pos - s.len, s.len);
}

bool SymmetricIndex::candidate_unit_prefix(CandidateId id) const {
    return id == kEmptyCandidate || (states_[candidate_state_[id]].flags & kUnitPrefix);
}

bool SymmetricIndex::candidate_unit_suffix(CandidateId id) const {
    return id == kEmptyCandidate || (states_[candidate_state_[id]].flags & kUnitSuffix);
}

namespace {

constexpr char kMagic[8] = {'P', 'H', 'R', 'M', 'I', 'D', 'X', '\0'};
constexpr std::uint32_t kFormatVersion = 2;

template <class T>
void write_pod(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
void write_vector(std::ofstream& out, const std::vector<T>& v) {
    write_pod(out, static_cast<std::uint64_t>(v.size()));
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <class T>
T read_pod(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw IoError("truncated index snapshot");
    return v;
}

template <class T>
void read_vector(std::ifstream& in, std::vector<T>& v) {
    const auto n = read_pod<std::uint64_t>(in);
    v.resize(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
    if (!in) throw IoError("truncated index snapshot");
}

}  // namespace

void SymmetricIndex::save(const std::filesystem::path& path, const std::string& corpus_digest) const {
    static_assert(std::has_unique_object_representations_v<State> && std::has_unique_object_representations_v<Edge>,
                  "raw snapshot records must not contain padding");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write index snapshot: " + path.string());
    out.write(kMagic, sizeof kMagic);
    write_pod(out, kFormatVersion);
    write_vector(out, std::vector<char>(corpus_digest.begin(), corpus_digest.end()));
    write_vector(out, unit_offsets_);
    write_vector(out, std::vector<Symbol>(text_.begin(), text_.end()));
    write_vector(out, states_);
    write_vector(out, edges_);
    std::vector<std::pair<Symbol, StateId>> root(root_edges_.begin(), root_edges_.end());
    std::sort(root.begin(), root.end());
    write_vector(out, root);
    write_vector(out, prefix_state_);
    if (!out) throw IoError("write failure: " + path.string());
}

SymmetricIndex SymmetricIndex::load(const std::filesystem::path& path, const std::string& expected_digest) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open index snapshot: " + path.string());
    char magic[sizeof kMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw IoError("not an index snapshot: " + path.string());
    if (read_pod<std::uint32_t>(in) != kFormatVersion) throw IoError("unsupported index snapshot version");
    std::vector<char> digest;
    read_vector(in, digest);
    if (!expected_digest.empty() && std::string(digest.begin(), digest.end()) != expected_digest) {
        throw IoError("index snapshot was built from a different corpus");
    }
    SymmetricIndex index;
    read_vector(in, index.unit_offsets_);
    std::vector<Symbol> text;
    read_vector(in, text);
    index.text_.assign(text.begin(), text.end());
    read_vector(in, index.states_);
    read_vector(in, index.edges_);
    std::vector<std::pair<Symbol, StateId>> root;
    read_vector(in, root);
    index.root_edges_ = std::unordered_map<Symbol, StateId>(root.begin(), root.end());
    read_vector(in, index.prefix_state_);
    index.refresh();
    return index;
}

}  // namespace phrasemine
