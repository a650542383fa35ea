#include "phrasemine/corpus.hpp"

#include <fstream>
#include <sstream>

namespace phrasemine {

UnitMode parse_unit_mode(std::string_view name) {
    if (name == "line") return UnitMode::line;
    if (name == "paragraph") return UnitMode::paragraph;
    throw std::invalid_argument("unknown unit mode: " + std::string(name));
}

Corpus::Corpus(std::vector<Text> units) : units_(std::move(units)) {
    for (const auto& u : units_) {
        if (u.empty()) throw std::invalid_argument("corpus units must be non-empty");
        symbols_ += u.size();
    }
}

namespace {

std::vector<Text> split_lines(const Text& text) {
    std::vector<Text> units;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find(U'\n', pos);
        if (nl == Text::npos) nl = text.size();
        Text line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == U'\r') line.pop_back();
        if (!line.empty()) units.push_back(std::move(line));
        pos = nl + 1;
    }
    return units;
}

std::vector<Text> split_paragraphs(const Text& text) {
    std::vector<Text> units;
    Text current;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto flush = [&] {
        if (!current.empty()) units.push_back(std::move(current));
        current.clear();
    };
    while (i < n) {
        if (text[i] == U'\n' || (text[i] == U'\r' && i + 1 < n && text[i + 1] == U'\n')) {
            std::size_t j = i;
            int newlines = 0;
            while (j < n && (text[j] == U'\n' || text[j] == U'\r')) {
                if (text[j] == U'\n') ++newlines;
                ++j;
            }
            if (newlines >= 2) {
                flush();
            } else if (!current.empty() && j < n) {
                current.push_back(U' ');
            }
            i = j;
            continue;
        }
        current.push_back(text[i]);
        ++i;
    }
    flush();
    return units;
}

}  // namespace

Corpus Corpus::parse(std::string_view utf8, UnitMode mode) {
    const Text text = decode_utf8(utf8);
    auto units = mode == UnitMode::line ? split_lines(text) : split_paragraphs(text);
    if (units.empty()) throw EmptyCorpusError();
    return Corpus(std::move(units));
}

Corpus Corpus::load(const std::filesystem::path& path, UnitMode mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure: " + path.string());
    return parse(buf.str(), mode);
}

TextView Corpus::slice(const SubstringRef& ref) const {
    if (ref.unit >= units_.size()) throw std::out_of_range("unit id out of range");
    const Text& u = units_[ref.unit];
    if (ref.start >= ref.end || ref.end > u.size()) throw std::out_of_range("substring reference out of range");
    return TextView(u).substr(ref.start, ref.end - ref.start);
}

std::string serialize_lines(const Corpus& corpus) {
    std::string out;
    for (const auto& u : corpus.units()) {
        out += encode_utf8(u);
        out.push_back('\n');
    }
    return out;
}

std::string Corpus::digest() const { return fnv1a_hex(serialize_lines(*this)); }

}  // namespace phrasemine
