#pragma once

// Interchange format for per-layer contextual embeddings.
//
// Matrix file (all integers and floats little-endian):
//   "CWE1" | u32 version = 1 | u32 rows | u32 cols | u32 layer | rows*cols f32, row-major
//
// The manifest is a JSON document listing, for every word and sentence set,
// the subtoken count of each sentence and one matrix file per layer. Each
// file holds the raw subtoken vectors of all sentences stacked in order.

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace namefreq {

class EmbeddingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using FloatMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr std::uint32_t kMatrixFormatVersion = 1;

struct MatrixFile {
    std::uint32_t layer = 0;
    FloatMatrix values;
};

void write_matrix(const MatrixFile& m, const std::filesystem::path& path);
MatrixFile read_matrix(const std::filesystem::path& path);

enum class Pooling { Mean, Concat };

std::string to_string(Pooling p);

// Subtoken vectors of one word across its sentences. Rows of `vectors`
// are grouped by sentence: the first subtokens[0] rows belong to sentence
// 0, and so on.
struct RawEmbedding {
    std::vector<std::uint32_t> subtokens;
    Eigen::MatrixXd vectors;

    std::size_t contexts() const { return subtokens.size(); }
    RawEmbedding select(const std::vector<std::size_t>& rows) const;
};

// Mean: one row per sentence, the average of its subtoken vectors.
// Concat: one row per sentence, its subtoken vectors joined in order;
// throws EmbeddingError naming the first sentence whose count differs.
Eigen::MatrixXd pooled_view(const RawEmbedding& raw, Pooling mode);

inline constexpr std::string_view kManifestFormat = "namefreq-embeddings";
inline constexpr int kManifestVersion = 1;

struct ManifestEntry {
    std::string set;  // "contexts" or "bleached"
    std::string word;
    std::vector<std::uint32_t> subtokens;
    std::map<int, std::filesystem::path> files;  // relative to the manifest
};

struct Manifest {
    std::string model;
    std::vector<int> layers;
    std::size_t dim = 0;
    std::vector<ManifestEntry> entries;
    std::filesystem::path base;  // directory of the manifest file

    static Manifest read(const std::filesystem::path& path);
    void write(const std::filesystem::path& path) const;

    const ManifestEntry* find(std::string_view set, std::string_view word) const;
    std::vector<std::string> words(std::string_view set) const;
    int max_layer() const;

    RawEmbedding load(const ManifestEntry& entry, int layer) const;
    // Pooled matrices for the requested layers.
    std::map<int, Eigen::MatrixXd> load_pooled(const ManifestEntry& entry, const std::vector<int>& layers,
                                               Pooling mode) const;
};

// Every violation found; empty when the manifest and its files are
// consistent.
std::vector<std::string> validate(const Manifest& manifest);

}  // namespace namefreq
