#include "namefreq/embeddings.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>

#include <json.hpp>

namespace namefreq {

namespace {

static_assert(std::endian::native == std::endian::little, "matrix I/O assumes a little-endian host");

constexpr char kMagic[4] = {'C', 'W', 'E', '1'};
constexpr std::size_t kHeaderBytes = 20;

void put_u32(std::string& out, std::uint32_t v) {
    char b[4];
    std::memcpy(b, &v, 4);
    out.append(b, 4);
}

std::uint32_t get_u32(const char* p) {
    std::uint32_t v;
    std::memcpy(&v, p, 4);
    return v;
}

}  // namespace

void write_matrix(const MatrixFile& m, const std::filesystem::path& path) {
    const auto rows = static_cast<std::size_t>(m.values.rows());
    const auto cols = static_cast<std::size_t>(m.values.cols());
    if (rows == 0 || cols == 0) throw EmbeddingError("write_matrix: empty matrix for " + path.string());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (!std::isfinite(m.values(r, c))) {
                throw EmbeddingError("write_matrix: non-finite value at row " + std::to_string(r) + ", col " +
                                     std::to_string(c));
            }
        }
    }
    std::string buf(kMagic, 4);
    put_u32(buf, kMatrixFormatVersion);
    put_u32(buf, static_cast<std::uint32_t>(rows));
    put_u32(buf, static_cast<std::uint32_t>(cols));
    put_u32(buf, m.layer);
    buf.append(reinterpret_cast<const char*>(m.values.data()), rows * cols * sizeof(float));
    std::ofstream out(path, std::ios::binary);
    if (!out || !out.write(buf.data(), static_cast<std::streamsize>(buf.size()))) {
        throw EmbeddingError("cannot write " + path.string());
    }
}

MatrixFile read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EmbeddingError("cannot open " + path.string());
    const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto name = path.string();
    if (buf.size() < kHeaderBytes) {
        throw EmbeddingError(name + ": truncated header (" + std::to_string(buf.size()) + " bytes)");
    }
    if (std::memcmp(buf.data(), kMagic, 4) != 0) throw EmbeddingError(name + ": bad magic, expected CWE1");
    const auto version = get_u32(buf.data() + 4);
    if (version != kMatrixFormatVersion) {
        throw EmbeddingError(name + ": unsupported format version " + std::to_string(version));
    }
    const std::size_t rows = get_u32(buf.data() + 8);
    const std::size_t cols = get_u32(buf.data() + 12);
    MatrixFile m;
    m.layer = get_u32(buf.data() + 16);
    const std::size_t need = kHeaderBytes + rows * cols * sizeof(float);
    if (buf.size() < need) {
        const std::size_t have = (buf.size() - kHeaderBytes) / sizeof(float);
        throw EmbeddingError(name + ": truncated payload at byte offset " + std::to_string(buf.size()) +
                             " (row " + std::to_string(cols ? have / cols : 0) + " of " + std::to_string(rows) +
                             ", expected " + std::to_string(need) + " bytes)");
    }
    if (buf.size() > need) {
        throw EmbeddingError(name + ": " + std::to_string(buf.size() - need) + " trailing bytes after payload");
    }
    m.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::memcpy(m.values.data(), buf.data() + kHeaderBytes, rows * cols * sizeof(float));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (!std::isfinite(m.values(r, c))) {
                throw EmbeddingError(name + ": non-finite value at row " + std::to_string(r) + ", col " +
                                     std::to_string(c));
            }
        }
    }
    return m;
}

std::string to_string(Pooling p) { return p == Pooling::Mean ? "mean" : "concat"; }

RawEmbedding RawEmbedding::select(const std::vector<std::size_t>& rows) const {
    std::vector<std::size_t> offset(subtokens.size() + 1, 0);
    std::partial_sum(subtokens.begin(), subtokens.end(), offset.begin() + 1);
    RawEmbedding out;
    std::size_t total = 0;
    for (auto r : rows) total += subtokens.at(r);
    out.vectors.resize(static_cast<Eigen::Index>(total), vectors.cols());
    Eigen::Index at = 0;
    for (auto r : rows) {
        out.subtokens.push_back(subtokens[r]);
        out.vectors.middleRows(at, subtokens[r]) =
            vectors.middleRows(static_cast<Eigen::Index>(offset[r]), subtokens[r]);
        at += subtokens[r];
    }
    return out;
}

Eigen::MatrixXd pooled_view(const RawEmbedding& raw, Pooling mode) {
    const auto n = static_cast<Eigen::Index>(raw.subtokens.size());
    const auto d = raw.vectors.cols();
    const auto total = std::accumulate(raw.subtokens.begin(), raw.subtokens.end(), std::size_t{0});
    if (total != static_cast<std::size_t>(raw.vectors.rows())) {
        throw EmbeddingError("pooled_view: subtoken counts sum to " + std::to_string(total) + " but " +
                             std::to_string(raw.vectors.rows()) + " vectors given");
    }
    for (std::size_t i = 0; i < raw.subtokens.size(); ++i) {
        if (raw.subtokens[i] == 0) throw EmbeddingError("pooled_view: context " + std::to_string(i) + " has no subtokens");
    }
    Eigen::MatrixXd out;
    Eigen::Index at = 0;
    if (mode == Pooling::Mean) {
        out.resize(n, d);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto s = static_cast<Eigen::Index>(raw.subtokens[i]);
            out.row(i) = raw.vectors.middleRows(at, s).colwise().sum() / static_cast<double>(s);
            at += s;
        }
        return out;
    }
    const auto s = static_cast<Eigen::Index>(raw.subtokens.empty() ? 0 : raw.subtokens[0]);
    for (std::size_t i = 1; i < raw.subtokens.size(); ++i) {
        if (raw.subtokens[i] != raw.subtokens[0]) {
            throw EmbeddingError("pooled_view: concat needs a constant subtoken count; context " + std::to_string(i) +
                                 " has " + std::to_string(raw.subtokens[i]) + ", context 0 has " +
                                 std::to_string(raw.subtokens[0]));
        }
    }
    out.resize(n, s * d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < s; ++j) out.block(i, j * d, 1, d) = raw.vectors.row(at + j);
        at += s;
    }
    return out;
}

Manifest Manifest::read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EmbeddingError("cannot open manifest " + path.string());
    Manifest m;
    m.base = path.parent_path();
    try {
        const auto doc = nlohmann::json::parse(in);
        if (doc.at("format").get<std::string>() != kManifestFormat) {
            throw EmbeddingError("unknown manifest format '" + doc.at("format").get<std::string>() + "'");
        }
        if (doc.at("version").get<int>() != kManifestVersion) {
            throw EmbeddingError("unsupported manifest version " + std::to_string(doc.at("version").get<int>()));
        }
        m.model = doc.at("model").get<std::string>();
        m.layers = doc.at("layers").get<std::vector<int>>();
        m.dim = doc.at("dim").get<std::size_t>();
        for (const auto& e : doc.at("entries")) {
            ManifestEntry entry;
            entry.set = e.at("set").get<std::string>();
            entry.word = e.at("word").get<std::string>();
            entry.subtokens = e.at("subtokens").get<std::vector<std::uint32_t>>();
            for (auto it = e.at("files").begin(); it != e.at("files").end(); ++it) {
                const auto layer = std::stoi(it.key());
                entry.files[layer] = it.value().get<std::string>();
            }
            m.entries.push_back(std::move(entry));
        }
    } catch (const EmbeddingError& e) {
        throw EmbeddingError(path.string() + ": " + e.what());
    } catch (const std::exception& e) {
        throw EmbeddingError(path.string() + ": malformed manifest: " + e.what());
    }
    return m;
}

void Manifest::write(const std::filesystem::path& path) const {
    nlohmann::ordered_json doc;
    doc["format"] = kManifestFormat;
    doc["version"] = kManifestVersion;
    doc["model"] = model;
    doc["layers"] = layers;
    doc["dim"] = dim;
    doc["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json rec;
        rec["set"] = e.set;
        rec["word"] = e.word;
        rec["subtokens"] = e.subtokens;
        nlohmann::ordered_json files = nlohmann::ordered_json::object();
        for (const auto& [layer, p] : e.files) files[std::to_string(layer)] = p.generic_string();
        rec["files"] = std::move(files);
        doc["entries"].push_back(std::move(rec));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw EmbeddingError("cannot write " + path.string());
    out << doc.dump(1) << '\n';
}

const ManifestEntry* Manifest::find(std::string_view set, std::string_view word) const {
    for (const auto& e : entries) {
        if (e.set == set && e.word == word) return &e;
    }
    return nullptr;
}

std::vector<std::string> Manifest::words(std::string_view set) const {
    std::vector<std::string> out;
    for (const auto& e : entries) {
        if (e.set == set) out.push_back(e.word);
    }
    return out;
}

int Manifest::max_layer() const {
    if (layers.empty()) throw EmbeddingError("manifest for '" + model + "' lists no layers");
    return *std::max_element(layers.begin(), layers.end());
}

RawEmbedding Manifest::load(const ManifestEntry& entry, int layer) const {
    const auto it = entry.files.find(layer);
    if (it == entry.files.end()) {
        throw EmbeddingError("model '" + model + "': no layer " + std::to_string(layer) + " for " + entry.set + "/" +
                             entry.word);
    }
    const auto file = read_matrix(base / it->second);
    if (static_cast<int>(file.layer) != layer) {
        throw EmbeddingError((base / it->second).string() + ": holds layer " + std::to_string(file.layer) +
                             ", expected " + std::to_string(layer));
    }
    RawEmbedding raw;
    raw.subtokens = entry.subtokens;
    raw.vectors = file.values.cast<double>();
    const auto total = std::accumulate(raw.subtokens.begin(), raw.subtokens.end(), std::size_t{0});
    if (total != static_cast<std::size_t>(raw.vectors.rows())) {
        throw EmbeddingError((base / it->second).string() + ": " + std::to_string(raw.vectors.rows()) +
                             " rows, manifest subtoken counts sum to " + std::to_string(total));
    }
    return raw;
}

std::map<int, Eigen::MatrixXd> Manifest::load_pooled(const ManifestEntry& entry, const std::vector<int>& want,
                                                     Pooling mode) const {
    std::map<int, Eigen::MatrixXd> out;
    for (int l : want) out.emplace(l, pooled_view(load(entry, l), mode));
    return out;
}

std::vector<std::string> validate(const Manifest& m) {
    std::vector<std::string> v;
    if (m.model.empty()) v.push_back("model id is empty");
    if (m.dim == 0) v.push_back("dim must be positive");
    const std::set<int> layers(m.layers.begin(), m.layers.end());
    if (layers.size() != m.layers.size()) v.push_back("layer list has duplicates");
    if (!layers.count(0)) v.push_back("layer list lacks layer 0");
    for (int l : layers) {
        if (l < 0) v.push_back("negative layer " + std::to_string(l));
    }
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& e : m.entries) {
        const auto who = e.set + "/" + e.word;
        if (e.set != "contexts" && e.set != "bleached") v.push_back(who + ": unknown set '" + e.set + "'");
        if (!seen.emplace(e.set, e.word).second) v.push_back(who + ": duplicate entry");
        if (e.subtokens.empty()) v.push_back(who + ": no sentences");
        for (std::size_t i = 0; i < e.subtokens.size(); ++i) {
            if (e.subtokens[i] == 0) v.push_back(who + ": sentence " + std::to_string(i) + " has zero subtokens");
        }
        if (e.set == "contexts" && !e.subtokens.empty() &&
            std::any_of(e.subtokens.begin(), e.subtokens.end(), [&](auto s) { return s != e.subtokens[0]; })) {
            v.push_back(who + ": subtoken count varies across identical-template contexts");
        }
        const auto total = std::accumulate(e.subtokens.begin(), e.subtokens.end(), std::size_t{0});
        std::optional<std::size_t> rows;
        for (int l : layers) {
            const auto it = e.files.find(l);
            if (it == e.files.end()) {
                v.push_back(who + ": missing layer " + std::to_string(l));
                continue;
            }
            const auto path = m.base / it->second;
            MatrixFile f;
            try {
                f = read_matrix(path);
            } catch (const EmbeddingError& err) {
                v.push_back(who + ": layer " + std::to_string(l) + ": " + err.what());
                continue;
            }
            const auto r = static_cast<std::size_t>(f.values.rows());
            if (static_cast<int>(f.layer) != l) {
                v.push_back(who + ": file for layer " + std::to_string(l) + " records layer " + std::to_string(f.layer));
            }
            if (static_cast<std::size_t>(f.values.cols()) != m.dim) {
                v.push_back(who + ": layer " + std::to_string(l) + " has " + std::to_string(f.values.cols()) +
                            " columns, manifest dim is " + std::to_string(m.dim));
            }
            if (r != total) {
                v.push_back(who + ": layer " + std::to_string(l) + " has " + std::to_string(r) +
                            " rows, subtoken counts sum to " + std::to_string(total));
            }
            if (rows && *rows != r) {
                v.push_back(who + ": row count differs across layers (" + std::to_string(*rows) + " vs " +
                            std::to_string(r) + " at layer " + std::to_string(l) + ")");
            }
            rows = r;
        }
        for (const auto& [l, p] : e.files) {
            if (!layers.count(l)) v.push_back(who + ": file for unlisted layer " + std::to_string(l));
        }
    }
    return v;
}

}  // namespace namefreq
