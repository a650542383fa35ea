#include <random>

#include "doctest.h"
#include "phrasemine/multiset.hpp"

using namespace phrasemine;

TEST_CASE("rho and delta on small multisets") {
    // ids: a=1, b=2, c=3
    PhraseMultiset x(4, {{1, 2}, {2, 1}});
    PhraseMultiset y(4, {{1, 1}, {3, 1}});
    CHECK(rho(x, y) == doctest::Approx(0.75));
    CHECK(rho(x, x) == 0.0);
    CHECK(rho(PhraseMultiset(4, {{1, 1}}), PhraseMultiset(4, {{2, 3}})) == 1.0);
    CHECK(delta_signed(PhraseMultiset(2, {{1, 2}}), PhraseMultiset(2, {{1, 1}})) == doctest::Approx(0.5));
    CHECK(delta_signed(x, x) == 0.0);
    CHECK(rho(PhraseMultiset(3), PhraseMultiset(5)) == 0.0);
}

TEST_CASE("unit share counts differences of exactly one") {
    PhraseMultiset x(3, {{0, 5}, {1, 1}});
    PhraseMultiset y(3, {{0, 2}, {1, 2}});
    // |5-2| + |1-2| = 4, one of which comes from a +-1 change
    CHECK(compare_multisets(x, y).unit_share == doctest::Approx(0.25));
}

TEST_CASE("rho and delta stay in range on random multisets") {
    std::mt19937_64 rng(1);
    for (int round = 0; round < 500; ++round) {
        PhraseMultiset a(20), b(25);
        for (int k = 0; k < 15; ++k) {
            a.add(static_cast<CandidateId>(rng() % 20), static_cast<std::uint32_t>(rng() % 4));
            b.add(static_cast<CandidateId>(rng() % 25), static_cast<std::uint32_t>(rng() % 4));
        }
        const auto d = compare_multisets(a, b);
        CHECK(d.rho >= 0.0);
        CHECK(d.rho <= 1.0);
        CHECK(std::abs(d.delta) <= d.rho + 1e-12);
        CHECK(compare_multisets(b, a).rho == doctest::Approx(d.rho));
        CHECK(compare_multisets(b, a).delta == doctest::Approx(-d.delta));
    }
}

TEST_CASE("multiset bookkeeping") {
    PhraseMultiset m;
    m.add(7, 2);
    m.add(3);
    CHECK(m.count(7) == 2);
    CHECK(m.count(100) == 0);
    CHECK(m.total() == 3);
    CHECK(m.support() == 2);
    CHECK(m.entries() == std::vector<std::pair<CandidateId, std::uint32_t>>{{3, 1}, {7, 2}});
    PhraseMultiset n(3);
    n += m;
    CHECK(n == m);
}
