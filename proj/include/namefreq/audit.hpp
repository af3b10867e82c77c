#pragma once

// Pipeline stages behind the command-line subcommands. Each cmd_* writes
// its files into the configured output directory; results shared between
// stages (registry, frequency tables, vocabularies, semantic layers) are
// computed once per Audit object.
//
// Output files:
//   registry.tsv
//   frequency_<corpus>.tsv
//   table1_median_frequency.tsv        (+ .txt)
//   table2_single_tokenization.tsv     (+ .txt)
//   valnorm_scores.tsv
//   table3_bias_frequency.tsv          (+ .txt)
//   table4_self_similarity_frequency.tsv ... table7_cka_tokenization.tsv (+ .txt)
//   scatter_self_similarity_<model>.csv, scatter_cka_<model>.csv
//   contexts.jsonl, sentences.jsonl
//   run_manifest.json

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "namefreq/association.hpp"
#include "namefreq/config.hpp"
#include "namefreq/contextualization.hpp"
#include "namefreq/corpus.hpp"
#include "namefreq/embeddings.hpp"
#include "namefreq/names.hpp"
#include "namefreq/tables.hpp"
#include "namefreq/tokenizers.hpp"

namespace namefreq {

inline constexpr const char* kToolVersion = "1.0.0";

class Audit {
public:
    // `models` restricts model-level stages; empty selects every model.
    Audit(AuditConfig config, std::ostream& log, std::vector<std::string> models = {});

    const AuditConfig& config() const { return config_; }

    void cmd_registry();
    void cmd_frequency();
    void cmd_tokenize();
    void cmd_contexts();
    void cmd_bias();
    void cmd_contextualize();
    // Every stage above, then run_manifest.json.
    void cmd_report();

    const Registry& registry();
    const FrequencyTable& corpus_frequency(const std::string& corpus_id);
    const FrequencyTable& model_frequency(const ModelConfig& model);
    const SubwordVocab& vocab(const ModelConfig& model);
    SpacePolicy space_policy(const ModelConfig& model);
    const Manifest& manifest(const ModelConfig& model);
    const std::map<int, double>& valnorm_scores(const ModelConfig& model);
    int semantic_layer(const ModelConfig& model);
    ReportingLayers reporting_layers(const ModelConfig& model);

    // Files written so far, relative to the output directory.
    const std::vector<std::string>& outputs() const { return outputs_; }

private:
    std::vector<const ModelConfig*> selected_models() const;
    std::string digest(const std::string& label);
    InputDigests digests(const std::vector<std::string>& labels);
    std::vector<std::string> registry_labels() const;
    std::vector<std::string> model_labels(const ModelConfig& m, bool embeddings);
    std::filesystem::path output(const std::string& name);
    void emit(const Table& table, bool text_mirror = true);
    std::map<std::string, Vector> bleached_vectors(const ModelConfig& model, int layer);
    std::vector<std::string> attribute_words(bool all_tests);

    AuditConfig config_;
    std::ostream& log_;
    std::vector<std::string> model_filter_;
    std::optional<Registry> registry_;
    std::map<std::string, FrequencyTable> corpus_freq_;
    std::map<std::string, FrequencyTable> model_freq_;
    std::map<std::string, SubwordVocab> vocab_;
    std::map<std::string, Manifest> manifest_;
    std::map<std::string, std::map<int, double>> valnorm_;
    std::map<std::string, std::string> digest_;
    std::map<std::string, std::string> file_digest_;
    std::vector<std::string> outputs_;
};

// Checks a manifest and prints each violation; returns the violation count.
std::size_t cmd_validate(const std::filesystem::path& manifest, std::ostream& out);

}  // namespace namefreq
