#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "phrasemine/corpus.hpp"

using namespace phrasemine;

TEST_CASE("line mode keeps file order and skips empty lines") {
    Corpus c = Corpus::parse("ab\ncb\n", UnitMode::line);
    REQUIRE(c.unit_count() == 2);
    CHECK(c.unit(0) == U"ab");
    CHECK(c.unit(1) == U"cb");
    CHECK(c.symbol_count() == 4);

    Corpus d = Corpus::parse("x\n\n\ny\r\n", UnitMode::line);
    REQUIRE(d.unit_count() == 2);
    CHECK(d.unit(1) == U"y");
}

TEST_CASE("paragraph mode joins single newlines with a space") {
    Corpus c = Corpus::parse("A\nB\n\nC\n", UnitMode::paragraph);
    REQUIRE(c.unit_count() == 2);
    CHECK(c.unit(0) == U"A B");
    CHECK(c.unit(1) == U"C");
}

TEST_CASE("empty input is rejected") {
    CHECK_THROWS_AS(Corpus::parse("", UnitMode::line), EmptyCorpusError);
    CHECK_THROWS_AS(Corpus::parse("\n\n", UnitMode::paragraph), EmptyCorpusError);
}

TEST_CASE("invalid UTF-8 is rejected, not substituted") {
    CHECK_THROWS_AS(Corpus::parse("ab\xff\n", UnitMode::line), EncodingError);
    CHECK_THROWS_AS(Corpus::parse("\xc0\xaf", UnitMode::line), EncodingError);    // overlong
    CHECK_THROWS_AS(Corpus::parse("\xed\xa0\x80", UnitMode::line), EncodingError);  // surrogate
    CHECK_THROWS_AS(Corpus::parse("\xe2\x82", UnitMode::line), EncodingError);      // truncated
}

TEST_CASE("symbols are code points") {
    Corpus c = Corpus::parse("über 中文\n", UnitMode::line);
    CHECK(c.unit(0).size() == 7);
    CHECK(c.slice({0, 5, 7}) == U"中文");
}

TEST_CASE("slice addresses half-open spans") {
    Corpus c(std::vector<Text>{U"abc"});
    CHECK(c.slice({0, 0, 2}) == U"ab");
    CHECK(c.slice({0, 1, 3}) == U"bc");
    CHECK_THROWS_AS(c.slice({0, 1, 4}), std::out_of_range);
    CHECK_THROWS_AS(c.slice({0, 2, 2}), std::out_of_range);
    CHECK_THROWS_AS(c.slice({1, 0, 1}), std::out_of_range);
}

TEST_CASE("line-mode round trip reproduces the corpus") {
    Corpus c = Corpus::parse("one two\nthree\n\tfour\xc3\xa9\n", UnitMode::line);
    Corpus back = Corpus::parse(serialize_lines(c), UnitMode::line);
    CHECK(back.units() == c.units());
    CHECK(back.digest() == c.digest());

    const auto path = std::filesystem::temp_directory_path() / "phrasemine_roundtrip.txt";
    { std::ofstream(path, std::ios::binary) << serialize_lines(c); }
    CHECK(Corpus::load(path).units() == c.units());
    std::filesystem::remove(path);
    CHECK_THROWS_AS(Corpus::load(path), IoError);
}

TEST_CASE("field escaping round trips") {
    const std::string raw = "a\tb\\c\nd\re";
    CHECK(escape_field(raw).find('\t') == std::string::npos);
    CHECK(unescape_field(escape_field(raw)) == raw);
}
