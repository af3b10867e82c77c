#pragma once

// Name registry: race-proportion table and SSA yearly birth counts,
// cross-referenced into names labeled by majority race and gender.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace namefreq {

// Thrown for malformed input files. `row` is 1-based (header = row 1) or 0
// when the problem is not tied to a row.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, std::size_t row, const std::string& what);
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

// Fixed category order; also the tie-break order for the majority label.
enum class Race { White, Black, Hispanic, Asian, NativeAmerican, Mixed };
inline constexpr std::size_t kRaceCount = 6;

enum class Gender { Female, Male };

enum class DemographicGroup { AF, BF, HF, WF, AM, BM, HM, WM };

// The eight groups used in every report, in report column order.
inline constexpr std::array<DemographicGroup, 8> kReportGroups = {
    DemographicGroup::AF, DemographicGroup::BF, DemographicGroup::HF, DemographicGroup::WF,
    DemographicGroup::AM, DemographicGroup::BM, DemographicGroup::HM, DemographicGroup::WM};

std::string to_string(Race r);
std::string to_string(Gender g);
std::string to_string(DemographicGroup g);
Race parse_race(std::string_view s);
Gender parse_gender(std::string_view s);
DemographicGroup parse_group(std::string_view s);

// Only Asian, Black, Hispanic and White names have a reporting group.
std::optional<DemographicGroup> group_of(Race r, Gender g);

struct RaceDistribution {
    // Indexed by Race.
    std::array<double, kRaceCount> proportions{};
    std::uint64_t observations = 1;

    double operator[](Race r) const { return proportions[static_cast<std::size_t>(r)]; }
};

struct GenderCounts {
    std::uint64_t female_births = 0;
    std::uint64_t male_births = 0;
};

struct RaceLabel {
    Race race;
    bool tie;
};

struct GenderLabel {
    Gender gender;
    bool tie;
};

RaceLabel assign_race_label(const RaceDistribution& dist);
GenderLabel assign_gender_label(const GenderCounts& counts);

struct NameRecord {
    std::string name;
    Race race = Race::White;
    Gender gender = Gender::Female;
    std::optional<DemographicGroup> group;
    std::uint64_t ssa_frequency = 0;
    bool race_tie = false;
    bool gender_tie = false;

    std::string tie_flags() const;
};

// First character uppercased (ASCII), the rest preserved.
std::string normal_form(std::string_view name);

// Column names for each field of the race table. Published releases name
// these differently, so all of them are configurable.
struct RaceTableFormat {
    char delimiter = ',';
    std::string name_column = "name";
    std::string observations_column = "obs";
    std::array<std::string, kRaceCount> proportion_columns = {
        "white", "black", "hispanic", "api", "aian", "two_or_more"};
    // Set when proportions are stored as percentages (0-100).
    bool percent = false;
};

struct RaceEntry {
    std::string name;
    RaceDistribution distribution;
};

std::vector<RaceEntry> load_race_table(const std::filesystem::path& path,
                                       const RaceTableFormat& format = {});

using SsaMap = std::map<std::string, GenderCounts>;

SsaMap load_ssa_year(const std::filesystem::path& path);

inline constexpr std::size_t kDefaultMinGroupSize = 8;

// Immutable, name-sorted collection of NameRecords.
class Registry {
public:
    Registry() = default;
    explicit Registry(std::vector<NameRecord> records);

    const std::vector<NameRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const NameRecord* find(std::string_view name) const;
    std::vector<std::string> names() const;
    std::map<DemographicGroup, std::size_t> group_counts() const;

    // `comments` are written as leading '# ' lines; read() skips them.
    void write(const std::filesystem::path& path, const std::vector<std::string>& comments = {}) const;
    static Registry read(const std::filesystem::path& path);

private:
    std::vector<NameRecord> records_;
    std::unordered_map<std::string, std::size_t> index_;
};

Registry cross_reference(const std::vector<RaceEntry>& race_list, const SsaMap& ssa,
                         std::size_t min_group_size = kDefaultMinGroupSize);

}  // namespace namefreq
