#include "namefreq/tables.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "detail/text.hpp"
#include "namefreq/names.hpp"

namespace namefreq {

namespace {

struct DigestContext {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    DigestContext() {
        if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
    }
    ~DigestContext() { EVP_MD_CTX_free(ctx); }
    void update(const char* p, std::size_t n) {
        if (EVP_DigestUpdate(ctx, p, n) != 1) throw std::runtime_error("sha256 update failed");
    }
    std::string hex() {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx, md, &len) != 1) throw std::runtime_error("sha256 final failed");
        static const char* digits = "0123456789abcdef";
        std::string out;
        for (unsigned i = 0; i < len; ++i) {
            out.push_back(digits[md[i] >> 4]);
            out.push_back(digits[md[i] & 15]);
        }
        return out;
    }
};

std::vector<std::string> group_columns() {
    std::vector<std::string> out;
    for (auto g : kReportGroups) out.push_back(to_string(g));
    return out;
}

std::vector<std::string> join(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
    DigestContext d;
    d.update(data.data(), data.size());
    return d.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    DigestContext d;
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return d.hex();
}

const std::vector<TableSchema>& report_schemas() {
    static const std::vector<TableSchema> schemas = [] {
        const std::vector<std::string> corr = {"rho", "log10_p", "n"};
        const std::vector<std::string> layer = {"model", "layer_role", "layer"};
        return std::vector<TableSchema>{
            {"table1_median_frequency.tsv", "median_frequency", 1, join({"corpus"}, group_columns())},
            {"table2_single_tokenization.tsv", "single_tokenization", 1,
             join(join({"model"}, group_columns()), corr)},
            {"table3_bias_frequency.tsv", "bias_frequency", 1, join({"test", "model", "layer"}, corr)},
            {"table4_self_similarity_frequency.tsv", "self_similarity_frequency", 1, join(layer, corr)},
            {"table5_self_similarity_tokenization.tsv", "self_similarity_tokenization", 1,
             join(layer, {"single_mean", "multi_mean", "single_n", "multi_n"})},
            {"table6_cka_frequency.tsv", "cka_frequency", 1, join(layer, corr)},
            {"table7_cka_tokenization.tsv", "cka_tokenization", 1,
             join(layer, {"single_mean", "multi_mean", "single_n", "multi_n"})},
        };
    }();
    return schemas;
}

const TableSchema& report_schema(std::string_view name) {
    for (const auto& s : report_schemas()) {
        if (s.name == name) return s;
    }
    throw std::out_of_range("unknown table schema " + std::string(name));
}

void Table::add(std::vector<std::string> row) {
    if (row.size() != schema->columns.size()) {
        throw std::logic_error("table " + schema->name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                               std::to_string(schema->columns.size()));
    }
    rows.push_back(std::move(row));
}

void Table::write_tsv(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "# schema: " << schema->name << " v" << schema->version << '\n';
    out << "# inputs:";
    for (const auto& [label, digest] : inputs) out << ' ' << label << '=' << digest;
    out << '\n';
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "\t" : "") << cells[i];
        out << '\n';
    };
    line(schema->columns);
    for (const auto& r : rows) line(r);
}

void Table::write_text(const std::filesystem::path& path) const {
    std::vector<std::size_t> width(schema->columns.size());
    auto shorten = [](const std::string& c) {
        const auto v = detail::parse_double(c);
        if (!v || c.find_first_of(".eE") == std::string::npos) return c;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", *v);
        return std::string(buf);
    };
    std::vector<std::vector<std::string>> shown;
    shown.push_back(schema->columns);
    for (const auto& r : rows) {
        std::vector<std::string> s;
        for (const auto& c : r) s.push_back(shorten(c));
        shown.push_back(std::move(s));
    }
    for (const auto& r : shown) {
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << schema->name << " (v" << schema->version << ")\n";
    for (std::size_t k = 0; k < shown.size(); ++k) {
        std::string line;
        for (std::size_t i = 0; i < shown[k].size(); ++i) {
            if (i) line += "  ";
            line += shown[k][i] + std::string(width[i] - shown[k][i].size(), ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
        if (k == 0) {
            std::size_t total = 0;
            for (auto w : width) total += w;
            out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
        }
    }
}

TsvFile TsvFile::read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    TsvFile f;
    std::string line;
    std::size_t row = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++row;
        if (detail::starts_with(line, "# schema: ")) {
            const auto rest = std::string_view(line).substr(10);
            const auto sp = rest.rfind(" v");
            if (sp == std::string_view::npos) throw ParseError(path.string(), row, "malformed schema line");
            f.schema_name = std::string(rest.substr(0, sp));
            const auto v = detail::parse_int(rest.substr(sp + 2));
            if (!v) throw ParseError(path.string(), row, "malformed schema version");
            f.schema_version = static_cast<int>(*v);
            continue;
        }
        if (detail::starts_with(line, "# inputs:")) {
            for (auto tok : detail::split(detail::trim(std::string_view(line).substr(9)), ' ')) {
                if (tok.empty()) continue;
                const auto eq = tok.find('=');
                if (eq == std::string_view::npos) throw ParseError(path.string(), row, "malformed input digest");
                f.inputs[std::string(tok.substr(0, eq))] = std::string(tok.substr(eq + 1));
            }
            continue;
        }
        if (detail::starts_with(line, "#")) continue;
        std::vector<std::string> cells;
        for (auto c : detail::split(line, '\t')) cells.emplace_back(c);
        if (!header) {
            f.columns = std::move(cells);
            header = true;
        } else {
            f.rows.push_back(std::move(cells));
        }
    }
    return f;
}

std::vector<std::string> check_schema(const std::filesystem::path& path, const TableSchema& schema) {
    std::vector<std::string> problems;
    if (!std::filesystem::exists(path)) return {path.string() + ": missing"};
    TsvFile f;
    try {
        f = TsvFile::read(path);
    } catch (const std::exception& e) {
        return {e.what()};
    }
    const auto where = path.filename().string() + ": ";
    if (f.schema_name != schema.name || f.schema_version != schema.version) {
        problems.push_back(where + "schema line '" + f.schema_name + " v" + std::to_string(f.schema_version) +
                           "', expected '" + schema.name + " v" + std::to_string(schema.version) + "'");
    }
    if (f.inputs.empty()) problems.push_back(where + "no input digests");
    for (const auto& [label, digest] : f.inputs) {
        if (digest.size() != 64 || digest.find_first_not_of("0123456789abcdef") != std::string::npos) {
            problems.push_back(where + "input " + label + " has a malformed digest");
        }
    }
    if (f.columns != schema.columns) problems.push_back(where + "header row does not match the schema");
    if (f.rows.empty()) problems.push_back(where + "no data rows");
    for (std::size_t i = 0; i < f.rows.size(); ++i) {
        if (f.rows[i].size() != schema.columns.size()) {
            problems.push_back(where + "row " + std::to_string(i + 1) + " has " + std::to_string(f.rows[i].size()) +
                               " cells");
        }
    }
    return problems;
}

std::string cell(double v) { return detail::format_double(v); }

std::string cell(std::optional<double> v) { return v ? cell(*v) : kMissingCell; }

}  // namespace namefreq
