#pragma once

// Seeded synthetic fixture covering every pipeline input: race table, SSA
// file, corpus, two tokenizers, an embedding manifest, a valence lexicon
// and the WEAT word lists. Embeddings are built so that, with increasing
// log frequency, self-similarity falls, CKA to layer 0 rises, and
// pleasantness of bleached name vectors rises; valence information is
// sharpest at one designed layer.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace namefreq {

struct SyntheticOptions {
    std::uint64_t seed = 7;
    std::size_t names_per_group = 25;
    std::size_t contexts = 24;
    int layers = 6;  // layers 1..layers plus layer 0
    int dim = 16;
    int semantic_layer = 4;
    std::uint64_t min_frequency = 1;
    std::uint64_t max_frequency = 1000;
    std::size_t lexicon_words = 40;
    // Share of the most frequent names kept whole in the WordPiece vocabulary.
    double whole_name_share = 0.4;
};

struct SyntheticFixture {
    std::filesystem::path dir;
    std::filesystem::path config;
    std::map<std::string, std::uint64_t> frequency;  // exact corpus counts
    std::vector<std::string> names;
    int semantic_layer = 0;
};

SyntheticFixture write_synthetic_fixture(const std::filesystem::path& dir, const SyntheticOptions& options = {});

}  // namespace namefreq
