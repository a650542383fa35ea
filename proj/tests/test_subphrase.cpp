#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "phrasemine/subphrase.hpp"
#include "synthetic.hpp"

using namespace phrasemine;

namespace {

struct Fitted {
    SymmetricIndex index;
    FittedModel model;
    std::vector<FunctionWord> fws;
    PhraseMultiset phrases;
};

Fitted fit_synthetic(std::uint64_t seed, std::size_t units) {
    std::mt19937_64 rng(seed);
    auto lang = synthetic::make_language(rng);
    Fitted f{SymmetricIndex::build(Corpus(synthetic::corpus(rng, lang, units))), {}, {}, {}};
    ModelConfig cfg;
    f.model = fit(f.index, cfg);
    f.fws = select_function_words(f.model, cfg, f.index);
    f.phrases = select_phrases(f.model, f.fws, f.index);
    return f;
}

const Fitted& shared() {
    static const Fitted f = fit_synthetic(17, 1500);
    return f;
}

// A hand-made model: the listed strings are function words with the given p_fw.
FittedModel fixed_model(const SymmetricIndex& idx, const std::vector<std::pair<Text, double>>& fws,
                        std::vector<FunctionWord>& out) {
    FittedModel m;
    m.stats.by_candidate.resize(idx.candidate_count());
    for (const auto& [t, p] : fws) {
        auto id = *idx.candidate_id(t);
        m.stats.by_candidate[id].p_pref_boosted = std::sqrt(p);
        m.stats.by_candidate[id].p_suf_boosted = std::sqrt(p);
        out.push_back({id, t, m.stats.by_candidate[id], 1});
    }
    return m;
}

}  // namespace

TEST_CASE("kernels drop the most probable function-word borders") {
    auto idx = SymmetricIndex::build(Corpus(std::vector<Text>{
        U"x _des_ y", U"z _des_ w", U"_des_", U"a _d b", U"c _d e", U"f s_ g", U"h s_ i", U"_des_Rates_", U"k _des_Rates_ l"}));
    std::vector<FunctionWord> fws;
    auto model = fixed_model(idx, {{U"_des_", 0.2}, {U"_d", 0.1}, {U"_", 0.2}, {U"s_", 0.05}}, fws);
    SubphraseModel sp(idx, model, fws);
    CHECK(sp.kernel(U"_des_") == U"");
    CHECK(sp.kernel(U"x _des_ y") == U"x _des_ y");
    // "_des_" and "_" tie on p_fw at the front: the longer one goes
    CHECK(sp.kernel(U"_des_Rates_") == U"Rates");
}

TEST_CASE("a phrase without function words inside is atomic") {
    auto idx = SymmetricIndex::build(Corpus(std::vector<Text>{U"ab", U"cb", U"abd", U"abe"}));
    std::vector<FunctionWord> fws;
    auto model = fixed_model(idx, {{U"b", 0.2}}, fws);
    SubphraseModel sp(idx, model, fws);
    const auto id = *idx.candidate_id(U"ab");
    CHECK(sp.is_atomic(id));
    const auto t = sp.tree(id);
    CHECK(t.nodes.size() == 1);
    const auto s = sp.scheme(t);
    CHECK(s.arity() == 1);
    CHECK(s.reconstruct() == U"ab");
}

TEST_CASE("restricted decomposition equals exhaustive enumeration") {
    const auto& f = shared();
    SubphraseModel sp(f.index, f.model, f.fws);
    std::vector<bool> mask = function_word_mask(f.fws, f.index.candidate_count());
    int checked = 0;
    for (const auto& [id, m] : f.phrases.entries()) {
        const TextView p = f.index.candidate_text(id);
        if (p.size() > 25) continue;
        oracle::DpResult want;
        try {
            want = oracle::enumerate_decompositions(
                p, [&](TextView t) { return f.index.is_candidate(t); },
                [&](TextView t) -> std::optional<double> {
                    auto c = f.index.candidate_id(t);
                    if (!c || !mask[*c]) return std::nullopt;
                    return f.model.p_fw(*c);
                },
                200'000);
        } catch (const std::runtime_error&) {
            continue;
        }
        const auto lat = sp.lattice(id);
        REQUIRE(lat.decomposable() == want.decomposable);
        ++checked;
        if (!want.decomposable) continue;
        std::set<oracle::Interval> got;
        for (const auto& v : lat.optimal_intervals()) got.insert({v.start, v.end});
        CHECK(got == want.optimal_intervals);
    }
    CHECK(checked > 200);
}

TEST_CASE("trees reconstruct every node and shrink downwards") {
    const auto& f = shared();
    SubphraseModel sp(f.index, f.model, f.fws);
    std::size_t schemes = 0, malformed = 0;
    for (const auto& [id, m] : f.phrases.entries()) {
        const auto t = sp.tree(id);
        for (const auto& node : t.nodes) {
            CHECK(f.index.candidate_text(node.id) == TextView(t.root).substr(node.start, node.end - node.start));
            if (node.children.empty()) continue;
            Text rebuilt;
            std::uint32_t covered = node.start;
            for (auto c : node.children) {
                const auto& ch = t.nodes[c];
                CHECK(ch.end - ch.start < node.end - node.start);
                CHECK(ch.start <= covered);
                if (c != node.children.front()) {
                    const auto overlap = f.index.candidate_id(TextView(t.root).substr(ch.start, covered - ch.start));
                    REQUIRE(overlap);
                    CHECK(sp.is_function_word(*overlap));
                }
                rebuilt += TextView(t.root).substr(covered, ch.end - covered);
                covered = ch.end;
            }
            CHECK(rebuilt == TextView(t.root).substr(node.start, node.end - node.start));
        }
        for (auto leaf : t.leaves()) CHECK(sp.is_atomic(t.nodes[leaf].id));
        try {
            const auto s = sp.scheme(t);
            ++schemes;
            CHECK(s.reconstruct() == t.root);
            CHECK(s.slots.size() == s.arity() + 1);
        } catch (const MalformedTreeError&) {
            ++malformed;
        }
    }
    CHECK(schemes > 0);
    CHECK(malformed == 0);
}

TEST_CASE("scheme slots are function words or empty") {
    const auto& f = shared();
    SubphraseModel sp(f.index, f.model, f.fws);
    std::size_t slots = 0, outside = 0;
    for (const auto& [id, m] : f.phrases.entries()) {
        FunctionalScheme s;
        try {
            s = sp.scheme(sp.tree(id));
        } catch (const MalformedTreeError&) {
            continue;
        }
        for (const auto& slot : s.slots) {
            ++slots;
            if (slot.empty()) continue;
            auto c = f.index.candidate_id(slot);
            if (!c || !sp.is_function_word(*c)) ++outside;
        }
    }
    CHECK(slots > 0);
    CHECK(outside == 0);
}

TEST_CASE("schemes are counted by phrase multiplicity") {
    const auto& f = shared();
    SubphraseModel sp(f.index, f.model, f.fws);
    std::size_t malformed = 0;
    auto schemes = sp.all_schemes(f.phrases, 3, &malformed);
    REQUIRE_FALSE(schemes.empty());
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < schemes.size(); ++k) {
        total += schemes[k].count;
        CHECK(schemes[k].instances.size() <= 3);
        if (k) CHECK(schemes[k - 1].count >= schemes[k].count);
    }
    CHECK(total <= f.phrases.total());

    // a single phrase gives one scheme with its multiplicity
    PhraseMultiset one(f.index.candidate_count());
    one.set(f.phrases.entries().front().first, 7);
    auto single = sp.all_schemes(one);
    REQUIRE(single.size() == 1);
    CHECK(single[0].count == 7);
}

TEST_CASE("leaf representations are mostly unique and atoms are content words") {
    const auto& f = shared();
    SubphraseModel sp(f.index, f.model, f.fws);
    std::size_t unique = 0, total = 0;
    for (const auto& [id, m] : f.phrases.entries()) {
        ++total;
        if (sp.unique_leaf_representation(id)) ++unique;
    }
    MESSAGE("unique " << unique << " of " << total);
    CHECK(unique * 10 >= total * 9);
}

TEST_CASE("depth limit keeps deeper nodes whole") {
    const auto& f = shared();
    SubphraseModel sp(f.index, f.model, f.fws);
    for (const auto& [id, m] : f.phrases.entries()) {
        const auto t = sp.tree(id, 1);
        for (std::size_t k = 1; k < t.nodes.size(); ++k) CHECK(t.nodes[k].children.empty());
    }
}

TEST_CASE("scheme of a hand-built phrase") {
    auto idx = SymmetricIndex::build(Corpus(std::vector<Text>{
        U"x_the_cat_of_the_dog_y", U"p_the_cat_of_the_dog_o", U"z_the_cat_of_the_w", U"v_of_the_dog_u", U"q_the_cat_r", U"s_the_dog_t",
        U"m_of_the_n", U"k_of_l", U"i_the_j"}));
    std::vector<FunctionWord> fws;
    auto model = fixed_model(idx, {{U"_of_the_", 0.3}, {U"_the_", 0.6}, {U"_of_", 0.55}, {U"_", 0.5}}, fws);
    SubphraseModel sp(idx, model, fws);
    const auto id = idx.candidate_id(U"_the_cat_of_the_dog_");
    REQUIRE(id);
    // "_the_" binds the top split; the leaf "_the_" disappears inside that overlap
    const auto t = sp.tree(*id);
    std::vector<Text> leaves;
    for (auto k : t.leaves()) leaves.emplace_back(idx.candidate_text(t.nodes[k].id));
    CHECK(leaves == std::vector<Text>{U"_the_cat_", U"_of_", U"_the_", U"_the_dog_"});
    const auto s = sp.scheme(t);
    CHECK(s.slots == std::vector<Text>{U"_the_", U"_", U"_the_", U"_"});
    CHECK(s.kernels == std::vector<Text>{U"cat", U"of", U"dog"});
    CHECK(s.render() == "_the_|_|_the_|_");
    CHECK(s.reconstruct() == t.root);
}
