#pragma once

// Audit configuration: a key = value file, '#' comments. Relative paths
// resolve against the directory of the config file.
//
//   registry = registry.tsv              (or race_table + ssa_file)
//   race_table = names.csv
//   race_table.percent = true
//   ssa_file = yob2019.txt
//   min_group_size = 8
//   corpus.<id> = a.txt, b.jsonl          (.jsonl/.ndjson read as JSON lines)
//   corpus.<id>.text_field = body
//   model.<m>.tokenizer = wordpiece:vocab.txt | bpe:vocab.json,merges.txt | unigram:pieces.tsv
//   model.<m>.manifest = embeddings/manifest.json
//   model.<m>.frequency = reddit+wiki     (default: all corpora)
//   model.<m>.space_policy = bare | leading-space
//   model.<m>.semantic_layer = 9
//   tests = PU25, PU8, CF, MA, SA
//   weat_dir = data/weat
//   lexicon = valence.tsv
//   contexts = contexts.jsonl
//   contexts.corpus = reddit
//   contexts.pivot = Taylor
//   contexts.k = 1000
//   contexts.blocklist = public_figures.txt
//   out = results
//   seed = 1
//   jobs = 4

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "namefreq/corpus.hpp"
#include "namefreq/names.hpp"
#include "namefreq/tokenizers.hpp"

namespace namefreq {

inline constexpr const char* kConfigEnvVar = "NAMEFREQ_CONFIG";

struct ModelConfig {
    std::string id;
    Scheme scheme = Scheme::WordPiece;
    std::vector<std::filesystem::path> tokenizer_files;
    std::optional<std::filesystem::path> manifest;
    std::vector<std::string> frequency_corpora;
    std::optional<SpacePolicy> space_policy;
    std::optional<int> semantic_layer;
};

struct AuditConfig {
    std::filesystem::path base;  // directory relative paths resolve against

    std::optional<std::filesystem::path> registry;
    std::optional<std::filesystem::path> race_table;
    std::optional<std::filesystem::path> ssa_file;
    RaceTableFormat race_format;
    std::size_t min_group_size = kDefaultMinGroupSize;

    std::vector<CorpusSpec> corpora;
    std::vector<ModelConfig> models;

    std::vector<std::string> tests;
    std::filesystem::path weat_dir;
    std::optional<std::filesystem::path> lexicon;

    std::optional<std::filesystem::path> contexts;
    std::string contexts_corpus;
    std::string contexts_pivot = "Taylor";
    std::size_t contexts_k = 1000;
    std::optional<std::filesystem::path> contexts_blocklist;

    std::filesystem::path out;
    std::uint64_t seed = 0;
    unsigned jobs = 1;

    // Every key as given, after overrides; hashed into the run manifest.
    std::map<std::string, std::string> entries;

    static AuditConfig load(const std::filesystem::path& path);
    static AuditConfig parse(std::string_view text, const std::filesystem::path& base);

    // Applies one key; throws std::invalid_argument for unknown keys or
    // bad values.
    void set(const std::string& key, const std::string& value);

    const CorpusSpec& corpus(std::string_view id) const;
    const ModelConfig& model(std::string_view id) const;
    std::vector<std::string> model_ids() const;

    // Throws with every missing input path listed.
    void check_paths() const;

    // Canonical "key = value" lines, sorted.
    std::string canonical() const;

private:
    std::filesystem::path resolve(std::string_view p) const;
    ModelConfig& model_entry(const std::string& id);
    CorpusSpec& corpus_entry(const std::string& id);
};

}  // namespace namefreq
