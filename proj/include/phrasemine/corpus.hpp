#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "phrasemine/text.hpp"

namespace phrasemine {

enum class UnitMode { line, paragraph };

UnitMode parse_unit_mode(std::string_view name);

class EmptyCorpusError : public Error {
public:
    EmptyCorpusError() : Error("corpus contains no units") {}
};

class IoError : public Error {
public:
    using Error::Error;
};

// Half-open span [start, end) inside one unit.
struct SubstringRef {
    std::uint32_t unit = 0;
    std::uint32_t start = 0;
    std::uint32_t end = 0;

    std::uint32_t length() const { return end - start; }
    auto operator<=>(const SubstringRef&) const = default;
};

class Corpus {
public:
    Corpus() = default;
    // Every unit must be non-empty; an empty vector is allowed here but not by the loaders.
    explicit Corpus(std::vector<Text> units);

    static Corpus load(const std::filesystem::path& path, UnitMode mode = UnitMode::line);
    static Corpus parse(std::string_view utf8, UnitMode mode = UnitMode::line);

    std::size_t unit_count() const { return units_.size(); }
    std::size_t symbol_count() const { return symbols_; }
    const Text& unit(std::size_t id) const { return units_.at(id); }
    const std::vector<Text>& units() const { return units_; }

    // Throws std::out_of_range for an invalid reference.
    TextView slice(const SubstringRef& ref) const;

    // Digest of the units as re-serialized in line mode.
    std::string digest() const;

private:
    std::vector<Text> units_;
    std::size_t symbols_ = 0;
};

// One unit per line, UTF-8.
std::string serialize_lines(const Corpus& corpus);

}  // namespace phrasemine
