#pragma once

// Report tables. Every TSV starts with two comment lines:
//   # schema: <name> v<version>
//   # inputs: <label>=<sha256> ...
// followed by a header row and data rows. A fixed-width text mirror is
// written alongside for reading in a terminal.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace namefreq {

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

struct TableSchema {
    std::string file;  // e.g. "table1_median_frequency.tsv"
    std::string name;
    int version = 1;
    std::vector<std::string> columns;
};

// The seven report tables, in order.
const std::vector<TableSchema>& report_schemas();
const TableSchema& report_schema(std::string_view name);

using InputDigests = std::map<std::string, std::string>;

struct Table {
    const TableSchema* schema = nullptr;
    InputDigests inputs;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);
    void write_tsv(const std::filesystem::path& path) const;
    void write_text(const std::filesystem::path& path) const;
};

// Parsed TSV with its header comments.
struct TsvFile {
    std::string schema_name;
    int schema_version = 0;
    InputDigests inputs;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    static TsvFile read(const std::filesystem::path& path);
};

// Problems with a written table against its schema; empty when it conforms.
std::vector<std::string> check_schema(const std::filesystem::path& path, const TableSchema& schema);

// Number formatting for table cells.
std::string cell(double v);
std::string cell(std::optional<double> v);
inline const std::string kMissingCell = "NA";

}  // namespace namefreq
