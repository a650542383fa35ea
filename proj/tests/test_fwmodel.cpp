#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "phrasemine/fwmodel.hpp"

using namespace phrasemine;

namespace {

SymmetricIndex index_of(std::vector<Text> units) { return SymmetricIndex::build(Corpus(std::move(units))); }

PhraseMultiset multiset_of(const SymmetricIndex& idx, std::initializer_list<std::pair<Text, std::uint32_t>> items) {
    PhraseMultiset m(idx.candidate_count());
    for (const auto& [t, n] : items) m.add(*idx.candidate_id(t), n);
    return m;
}

oracle::Multiset to_oracle(const SymmetricIndex& idx, const PhraseMultiset& m) {
    oracle::Multiset out;
    for (const auto& [id, n] : m.entries()) out[Text(idx.candidate_text(id))] = n;
    return out;
}

// Random phrases: a random share of the candidates with small multiplicities.
PhraseMultiset random_phrases(const SymmetricIndex& idx, std::mt19937_64& rng) {
    PhraseMultiset m(idx.candidate_count());
    for (CandidateId id = 1; id < idx.candidate_count(); ++id)
        if (rng() % 3 != 0) m.set(id, 1 + static_cast<std::uint32_t>(rng() % 4));
    return m;
}

}  // namespace

TEST_CASE("prefix, suffix and infix counts on the worked examples") {
    auto aaa = index_of({U"aaa"});
    auto st = compute_stats(multiset_of(aaa, {{U"aaa", 1}}), aaa, 1);
    const auto& a = st.by_candidate[*aaa.candidate_id(U"a")];
    CHECK(a.pref == 1);
    CHECK(a.suff == 1);
    CHECK(a.inf == 3);
    // the phrase itself contributes nothing to its own counts
    const auto& whole = st.by_candidate[*aaa.candidate_id(U"aaa")];
    CHECK(whole.pref + whole.suff + whole.inf == 0);

    auto idx = index_of({U"_the_connection_", U"x_the_y", U"z_the_w", U"_the_connection_q", U"_the_connection_r"});
    REQUIRE(idx.is_candidate(U"_the_"));
    REQUIRE(idx.is_candidate(U"_the_connection_"));
    auto st2 = compute_stats(multiset_of(idx, {{U"_the_connection_", 12}}), idx, 1);
    CHECK(st2.by_candidate[*idx.candidate_id(U"_the_")].pref == 12);
    CHECK(st2.by_candidate[*idx.candidate_id(U"_the_")].suff == 0);
}

TEST_CASE("the empty string counts as prefix, suffix and at every position") {
    auto idx = index_of({U"ab", U"cb"});
    auto st = compute_stats(multiset_of(idx, {{U"ab", 2}, {U"b", 1}}), idx, 1);
    const auto& e = st.by_candidate[kEmptyCandidate];
    CHECK(e.pref == 3);
    CHECK(e.suff == 3);
    CHECK(e.inf == 2 * 3 + 1 * 2);
}

TEST_CASE("boosting splits the overlap value by the raw ratio") {
    FunctionWordStats s;
    s.pref = 3;
    s.suff = 1;
    s.inf = 10;
    s.ov = 2;
    apply_boost(s);
    CHECK(s.p_pref == doctest::Approx(0.3));
    CHECK(s.p_suf == doctest::Approx(0.1));
    CHECK(s.p_pref_boosted == doctest::Approx(0.45));
    CHECK(s.p_suf_boosted == doctest::Approx(0.15));

    FunctionWordStats even{2, 2, 8, 2};
    apply_boost(even);
    CHECK(even.p_pref_boosted == doctest::Approx(even.p_suf_boosted));

    FunctionWordStats none{3, 1, 10, 0};
    apply_boost(none);
    CHECK(none.p_pref_boosted == none.p_pref);

    FunctionWordStats empty{0, 0, 5, 3};
    apply_boost(empty);
    CHECK(empty.p_fw() == 0.0);
    FunctionWordStats absent{};
    apply_boost(absent);
    CHECK(absent.p_fw() == 0.0);

    FunctionWordStats peak{5, 5, 10, 0};
    apply_boost(peak);
    CHECK(peak.p_fw() == doctest::Approx(0.25));
}

TEST_CASE("overlap value on the binding example") {
    std::vector<Text> units{U"We_are_not_making_the_connections_", U"You_are_not_making_the_connections.",
                            U"_are_not_making_the_case", U"_are_not_making_the_rules", U"a_the_connections",
                            U"b_the_connections", U"x_the_y", U"z_the_w"};
    auto idx = index_of(units);
    REQUIRE(idx.is_candidate(U"_are_not_making_the_"));
    REQUIRE(idx.is_candidate(U"_the_connections"));
    REQUIRE(idx.is_candidate(U"_are_not_making_the_connections"));
    auto phrases = multiset_of(idx, {{U"_are_not_making_the_", 1},
                                     {U"_the_connections", 1},
                                     {U"_are_not_making_the_connections", 3}});
    CHECK(overlap_value(U"_the_", phrases, idx) == 3);
    CHECK(overlap_value(U"_are_", phrases, idx) == 0);
    auto st = compute_stats(phrases, idx, 1);
    CHECK(st.by_candidate[*idx.candidate_id(U"_the_")].ov == 3);
}

TEST_CASE("stable boundaries need every longer candidate boundary to be a phrase") {
    auto idx = index_of({U"abc", U"abd", U"ab", U"ax", U"ya", U"yab"});
    REQUIRE(idx.is_candidate(U"a"));
    REQUIRE(idx.is_candidate(U"ab"));
    auto both = multiset_of(idx, {{U"abc", 1}, {U"ab", 1}, {U"a", 1}});
    CHECK(stable_boundaries(U"abc", both, idx).prefix_lengths == std::vector<std::uint32_t>{1, 2});
    auto gap = multiset_of(idx, {{U"abc", 1}, {U"a", 1}});
    CHECK(stable_boundaries(U"abc", gap, idx).prefix_lengths.empty());
    auto lone = multiset_of(idx, {{U"abc", 1}});
    CHECK(stable_boundaries(U"abc", lone, idx).prefix_lengths.empty());
}

TEST_CASE("statistics match the definitions on random phrase sets") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 25; ++round) {
        auto units = oracle::random_corpus(rng, 300 + rng() % 300, 20, U"abc ");
        auto idx = index_of(units);
        auto phrases = random_phrases(idx, rng);
        auto om = to_oracle(idx, phrases);
        auto st = compute_stats(phrases, idx, 1 + round % 3);
        auto is_cand = [&](TextView t) { return idx.is_candidate(t); };
        CHECK(st.boost_violations == 0);
        for (CandidateId id = 0; id < idx.candidate_count(); ++id) {
            const TextView f = idx.candidate_text(id);
            const auto want = oracle::affix_counts(om, f);
            const auto& got = st.by_candidate[id];
            CHECK(got.pref == want.pref);
            CHECK(got.suff == want.suff);
            CHECK(got.inf == want.inf);
            CHECK(got.pref + got.suff + got.ov <= got.inf);
            CHECK(got.p_pref_boosted + got.p_suf_boosted <= 1.0 + 1e-12);
            if (id % 4 == 0) CHECK(got.ov == oracle::overlap_value(om, f, is_cand));
        }
        for (int k = 0; k < 20; ++k) {
            const auto entries = phrases.entries();
            const TextView p = idx.candidate_text(entries[rng() % entries.size()].first);
            const auto sb = stable_boundaries(p, phrases, idx);
            const auto wp = oracle::stable_prefix_lengths(p, om, is_cand);
            const auto ws = oracle::stable_suffix_lengths(p, om, is_cand);
            CHECK(std::set<std::size_t>(sb.prefix_lengths.begin(), sb.prefix_lengths.end()) == wp);
            CHECK(std::set<std::size_t>(sb.suffix_lengths.begin(), sb.suffix_lengths.end()) == ws);
        }
    }
}

TEST_CASE("fit halts at the first non-improving pass and returns the one before") {
    std::mt19937_64 rng(8);
    for (int round = 0; round < 6; ++round) {
        auto units = oracle::random_corpus(rng, 1500, 40, U"abcde");
        auto idx = index_of(units);
        ModelConfig cfg;
        cfg.threads = 1 + round % 2;
        auto model = fit(idx, cfg);
        const auto& tr = model.trace;
        REQUIRE(tr.size() >= 3);
        const auto last = tr.size() - 1;
        CHECK(model.final_iteration == last - 1);
        CHECK(tr[last].rho >= tr[last - 1].rho - cfg.theta);
        for (std::size_t k = 2; k < last; ++k) CHECK(tr[k].rho < tr[k - 1].rho - cfg.theta);
        for (const auto& r : tr) {
            CHECK(r.rho >= 0.0);
            CHECK(r.rho <= 1.0);
            CHECK(std::abs(r.delta) <= r.rho + 1e-12);
            CHECK(r.boost_violations == 0);
        }

        // replay the passes with the public steps and compare the snapshot
        PhraseMultiset p = initial_phrases(idx);
        for (std::uint32_t i = 0; i < model.final_iteration; ++i) {
            auto st = compute_stats(p, idx, 1);
            auto w = weights_from_probabilities(st.p_fw());
            p = collect_multisets(idx, w, 1).phrases;
        }
        CHECK(p == model.phrases);
        auto st = compute_stats(p, idx, 1);
        auto w = weights_from_probabilities(st.p_fw());
        CHECK(collect_multisets(idx, w, 1).overlaps == model.overlaps);

        auto again = fit(idx, cfg);
        CHECK(again.phrases == model.phrases);
        CHECK(again.overlaps == model.overlaps);
        CHECK(again.trace.size() == model.trace.size());
    }
}

TEST_CASE("a pass that reproduces its input halts with trailing zeros") {
    // Two identical units: the only decomposition is fixed from the start.
    auto idx = index_of({U"ab", U"ab", U"cb", U"ad"});
    auto model = fit(idx, ModelConfig{});
    REQUIRE(model.trace.size() == 3);
    CHECK(model.trace[1].rho == 0.0);
    CHECK(model.trace[2].rho == 0.0);
    CHECK(model.final_iteration == 1);
}

TEST_CASE("model configuration is validated") {
    auto idx = index_of({U"ab", U"cb"});
    ModelConfig cfg;
    cfg.max_iterations = 3;
    CHECK_NOTHROW(fit(idx, cfg));
    cfg.max_iterations = 2;
    CHECK_THROWS_AS(fit(idx, cfg), std::invalid_argument);
    cfg = ModelConfig{};
    cfg.theta = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ModelConfig{};
    cfg.fw_ratio = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("function-word filters and ranking") {
    auto idx = index_of({U"x the y", U"z the w", U"x a y", U"z a w", U"the", U"y"});
    FittedModel model;
    model.stats.by_candidate.resize(idx.candidate_count());
    model.overlaps = PhraseMultiset(idx.candidate_count());
    auto set = [&](const Text& t, double pp, double ps, std::uint32_t mult) {
        auto id = *idx.candidate_id(t);
        model.stats.by_candidate[id].p_pref_boosted = pp;
        model.stats.by_candidate[id].p_suf_boosted = ps;
        model.overlaps.set(id, mult);
    };
    set(U" the ", 0.3, 0.3, 5);
    set(U" a ", 0.25, 0.2, 5);
    set(U" ", 0.39, 0.0, 50);   // sum and ratio both fail
    set(U"the", 0.1, 0.2, 9);   // sum fails
    set(U"y", 0.05, 0.5, 9);    // ratio fails
    ModelConfig cfg;
    auto fws = select_function_words(model, cfg, idx);
    REQUIRE(fws.size() == 2);
    CHECK(fws[0].text == U" a ");  // tie on multiplicity, then text order
    CHECK(fws[1].text == U" the ");

    cfg.fw_divisor = 1.2;  // 6 units: multiplicity must reach 5
    model.overlaps.set(*idx.candidate_id(U" a "), 4);
    fws = select_function_words(model, cfg, idx);
    REQUIRE(fws.size() == 1);
    CHECK(fws[0].text == U" the ");
}

TEST_CASE("selected words and phrases satisfy the rules literally") {
    std::mt19937_64 rng(12);
    auto units = oracle::random_corpus(rng, 4000, 40, U"abcde");
    auto idx = index_of(units);
    ModelConfig cfg;
    cfg.fw_divisor = 100;
    auto model = fit(idx, cfg);
    auto fws = select_function_words(model, cfg, idx);
    const double needed = std::max(1.0, units.size() / cfg.fw_divisor);
    std::set<Text> fw_texts;
    for (std::size_t k = 0; k < fws.size(); ++k) {
        const auto& f = fws[k];
        fw_texts.insert(f.text);
        CHECK(f.overlap_multiplicity >= needed);
        CHECK(f.stats.p_pref_boosted + f.stats.p_suf_boosted > cfg.fw_sum);
        CHECK(f.stats.p_pref_boosted / f.stats.p_suf_boosted > 1.0 / cfg.fw_ratio);
        CHECK(f.stats.p_pref_boosted / f.stats.p_suf_boosted < cfg.fw_ratio);
        if (k) CHECK(fws[k - 1].overlap_multiplicity >= f.overlap_multiplicity);
    }
    auto kept = select_phrases(model, fws, idx);
    for (const auto& [id, m] : model.phrases.entries()) {
        const Text p(idx.candidate_text(id));
        bool left = false, right = false;
        for (const auto& r : idx.occurrences(p)) {
            if (r.start == 0) left = true;
            if (r.end == units[r.unit].size()) right = true;
        }
        for (const auto& f : fw_texts) {
            if (f.empty()) continue;
            if (oracle::starts_with(p, f)) left = true;
            if (oracle::ends_with(p, f)) right = true;
        }
        CHECK(kept.contains(id) == (left && right));
        if (kept.contains(id)) CHECK(kept.count(id) == m);
    }
}
