#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "phrasemine/analytics.hpp"
#include "phrasemine/islands.hpp"

namespace phrasemine {

class ArtifactError : public Error {
public:
    using Error::Error;
};

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);
std::string tsv_text(TextView t);
Text parse_tsv_text(std::string_view field);

// Per-stage wall-clock seconds, kept only in the manifest.
using StageTimings = std::map<std::string, double>;

// Everything `mine` leaves in an output directory, read back against the corpus.
struct MinedModel {
    std::filesystem::path corpus_path;
    UnitMode unit_mode = UnitMode::line;
    Corpus corpus;
    SymmetricIndex index;
    ModelConfig config;
    FittedModel model;             // P_n; statistics restored for function words only
    std::vector<FunctionWord> fws;
    PhraseMultiset phrases;        // P(C)
};

void write_function_words(std::ostream& out, const std::vector<FunctionWord>& fws);
void write_phrases(std::ostream& out, const PhraseMultiset& phrases, const SymmetricIndex& index);
void write_trace(std::ostream& out, const std::vector<IterationRecord>& trace);

struct MineOutputs {
    std::filesystem::path dir;
    std::filesystem::path corpus_path;
    UnitMode unit_mode = UnitMode::line;
    const Corpus* corpus = nullptr;
    const SymmetricIndex* index = nullptr;
    const ModelConfig* config = nullptr;
    const FittedModel* model = nullptr;
    const std::vector<FunctionWord>* fws = nullptr;
    const PhraseMultiset* phrases = nullptr;
    StageTimings timings;
};

// function-words.tsv, phrases.tsv, model-phrases.tsv, rho-trace.csv, index.bin and
// manifest.json.
void write_mine_outputs(const MineOutputs& out);

// Reads a model directory. The corpus comes from the manifest unless given; a stale or
// missing index snapshot is rebuilt.
MinedModel load_mined_model(const std::filesystem::path& dir, const std::filesystem::path& corpus_override = {});

void write_ranking(std::ostream& out, const KernelRanking& ranking, const std::vector<std::string>& comparison_labels = {});
KernelRanking read_ranking(std::istream& in);
KernelRanking load_ranking(const std::filesystem::path& path);

void write_expansions(std::ostream& out, const std::vector<Expansion>& ex);
void write_schemes(std::ostream& out, const std::vector<SchemeCount>& schemes);
void write_islands(std::ostream& out, const std::vector<IslandPhrase>& islands);
void write_island_schemes(std::ostream& out, const std::vector<IslandScheme>& schemes);
void write_length_stats(std::ostream& out, const std::vector<LengthRow>& rows);
void write_tree(std::ostream& out, const DecompositionTree& tree, const SymmetricIndex& index);

}  // namespace phrasemine
