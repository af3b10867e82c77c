#include "namefreq/names.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "detail/text.hpp"

namespace namefreq {

using detail::split;
using detail::trim;

ParseError::ParseError(const std::string& file, std::size_t row, const std::string& what)
    : std::runtime_error(file + (row ? ":" + std::to_string(row) : std::string()) + ": " + what),
      row_(row) {}

std::string to_string(Race r) {
    switch (r) {
        case Race::White: return "White";
        case Race::Black: return "Black";
        case Race::Hispanic: return "Hispanic";
        case Race::Asian: return "Asian";
        case Race::NativeAmerican: return "NativeAmerican";
        case Race::Mixed: return "Mixed";
    }
    return "?";
}

std::string to_string(Gender g) { return g == Gender::Female ? "Female" : "Male"; }

std::string to_string(DemographicGroup g) {
    static constexpr const char* kCodes[] = {"AF", "BF", "HF", "WF", "AM", "BM", "HM", "WM"};
    return kCodes[static_cast<int>(g)];
}

Race parse_race(std::string_view s) {
    for (std::size_t i = 0; i < kRaceCount; ++i) {
        if (to_string(static_cast<Race>(i)) == s) return static_cast<Race>(i);
    }
    throw std::invalid_argument("unknown race label: " + std::string(s));
}

Gender parse_gender(std::string_view s) {
    if (s == "Female") return Gender::Female;
    if (s == "Male") return Gender::Male;
    throw std::invalid_argument("unknown gender label: " + std::string(s));
}

DemographicGroup parse_group(std::string_view s) {
    for (auto g : kReportGroups) {
        if (to_string(g) == s) return g;
    }
    throw std::invalid_argument("unknown demographic group: " + std::string(s));
}

std::optional<DemographicGroup> group_of(Race r, Gender g) {
    const bool f = g == Gender::Female;
    switch (r) {
        case Race::Asian: return f ? DemographicGroup::AF : DemographicGroup::AM;
        case Race::Black: return f ? DemographicGroup::BF : DemographicGroup::BM;
        case Race::Hispanic: return f ? DemographicGroup::HF : DemographicGroup::HM;
        case Race::White: return f ? DemographicGroup::WF : DemographicGroup::WM;
        default: return std::nullopt;
    }
}

RaceLabel assign_race_label(const RaceDistribution& dist) {
    std::size_t best = 0;
    bool tie = false;
    for (std::size_t i = 1; i < kRaceCount; ++i) {
        if (dist.proportions[i] > dist.proportions[best]) {
            best = i;
            tie = false;
        } else if (dist.proportions[i] == dist.proportions[best]) {
            tie = true;
        }
    }
    return {static_cast<Race>(best), tie};
}

GenderLabel assign_gender_label(const GenderCounts& counts) {
    if (counts.male_births > counts.female_births) return {Gender::Male, false};
    return {Gender::Female, counts.female_births == counts.male_births};
}

std::string NameRecord::tie_flags() const {
    if (race_tie && gender_tie) return "race,gender";
    if (race_tie) return "race";
    if (gender_tie) return "gender";
    return "-";
}

std::string normal_form(std::string_view name) {
    std::string out(trim(name));
    if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
    return out;
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    return in;
}

}  // namespace

std::vector<RaceEntry> load_race_table(const std::filesystem::path& path,
                                       const RaceTableFormat& format) {
    auto in = open_input(path);
    const std::string file = path.string();
    std::string line;
    std::size_t row = 0;

    std::vector<std::size_t> column_of(kRaceCount + 2);
    std::size_t n_columns = 0;
    bool have_header = false;
    std::vector<RaceEntry> out;
    std::unordered_map<std::string, std::size_t> seen;  // lowercased name -> row

    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto fields = split(line, format.delimiter);
        for (auto& f : fields) f = trim(f);

        if (!have_header) {
            n_columns = fields.size();
            auto find = [&](const std::string& col) {
                for (std::size_t i = 0; i < fields.size(); ++i) {
                    if (detail::ascii_lower(fields[i]) == detail::ascii_lower(col)) return i;
                }
                throw ParseError(file, row, "header lacks column '" + col + "'");
            };
            column_of[0] = find(format.name_column);
            column_of[1] = find(format.observations_column);
            for (std::size_t r = 0; r < kRaceCount; ++r) {
                column_of[2 + r] = find(format.proportion_columns[r]);
            }
            have_header = true;
            continue;
        }

        if (fields.size() != n_columns) {
            throw ParseError(file, row, "expected " + std::to_string(n_columns) + " columns, found " +
                                            std::to_string(fields.size()));
        }
        RaceEntry entry;
        entry.name = normal_form(fields[column_of[0]]);
        if (entry.name.empty()) throw ParseError(file, row, "empty name");
        const auto obs = detail::parse_u64(fields[column_of[1]]);
        if (!obs || *obs < 1) {
            throw ParseError(file, row, "observation count must be a positive integer");
        }
        entry.distribution.observations = *obs;
        double sum = 0.0;
        for (std::size_t r = 0; r < kRaceCount; ++r) {
            const auto v = detail::parse_double(fields[column_of[2 + r]]);
            if (!v) {
                throw ParseError(file, row, "cannot parse proportion '" +
                                                std::string(fields[column_of[2 + r]]) + "'");
            }
            const double p = format.percent ? *v / 100.0 : *v;
            if (!(p >= 0.0 && p <= 1.0)) {
                throw ParseError(file, row, "proportion outside [0, 1]: " + std::string(fields[column_of[2 + r]]));
            }
            entry.distribution.proportions[r] = p;
            sum += p;
        }
        if (sum < 0.99 || sum > 1.01) {
            throw ParseError(file, row, "proportions sum to " + detail::format_double(sum) +
                                            ", outside [0.99, 1.01]");
        }
        const auto key = detail::ascii_lower(entry.name);
        if (auto it = seen.find(key); it != seen.end()) {
            throw ParseError(file, row, "duplicate name '" + entry.name + "' (first seen at row " +
                                            std::to_string(it->second) + ")");
        }
        seen.emplace(key, row);
        out.push_back(std::move(entry));
    }
    if (!have_header) throw ParseError(file, 0, "missing header row");
    return out;
}

SsaMap load_ssa_year(const std::filesystem::path& path) {
    auto in = open_input(path);
    const std::string file = path.string();
    SsaMap out;
    std::set<std::pair<std::string, char>> seen;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != 3) {
            throw ParseError(file, row, "expected 'name,sex,count', found " +
                                            std::to_string(fields.size()) + " columns");
        }
        const auto name = trim(fields[0]);
        const auto sex = trim(fields[1]);
        const auto count_field = trim(fields[2]);
        if (row == 1 && detail::ascii_lower(name) == "name" && detail::ascii_lower(count_field) == "count") {
            continue;
        }
        if (name.empty()) throw ParseError(file, row, "empty name");
        if (sex != "F" && sex != "M") {
            throw ParseError(file, row, "unknown sex code '" + std::string(sex) + "'");
        }
        const auto count = detail::parse_u64(count_field);
        if (!count) throw ParseError(file, row, "non-numeric count '" + std::string(count_field) + "'");
        const std::string key = normal_form(name);
        if (!seen.emplace(key, sex[0]).second) {
            throw ParseError(file, row, "duplicate row for " + key + "," + std::string(sex));
        }
        auto& gc = out[key];
        (sex == "F" ? gc.female_births : gc.male_births) += *count;
    }
    return out;
}

Registry::Registry(std::vector<NameRecord> records) : records_(std::move(records)) {
    std::sort(records_.begin(), records_.end(),
              [](const NameRecord& a, const NameRecord& b) { return a.name < b.name; });
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (!index_.emplace(records_[i].name, i).second) {
            throw std::invalid_argument("registry: duplicate name " + records_[i].name);
        }
    }
}

const NameRecord* Registry::find(std::string_view name) const {
    const auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &records_[it->second];
}

std::vector<std::string> Registry::names() const {
    std::vector<std::string> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.name);
    return out;
}

std::map<DemographicGroup, std::size_t> Registry::group_counts() const {
    std::map<DemographicGroup, std::size_t> out;
    for (auto g : kReportGroups) out[g] = 0;
    for (const auto& r : records_) {
        if (r.group) ++out[*r.group];
    }
    return out;
}

void Registry::write(const std::filesystem::path& path, const std::vector<std::string>& comments) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "name\trace\tgender\tgroup\tssa_frequency\ttie_flags\n";
    for (const auto& r : records_) {
        out << r.name << '\t' << to_string(r.race) << '\t' << to_string(r.gender) << '\t'
            << (r.group ? to_string(*r.group) : "-") << '\t' << r.ssa_frequency << '\t'
            << r.tie_flags() << '\n';
    }
}

Registry Registry::read(const std::filesystem::path& path) {
    auto in = open_input(path);
    const std::string file = path.string();
    std::string line;
    std::size_t row = 0;
    std::vector<NameRecord> records;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty() || line[0] == '#') continue;
        const auto f = split(line, '\t');
        if (f.size() != 6) throw ParseError(file, row, "expected 6 tab-separated columns");
        if (f[0] == "name") continue;
        try {
            NameRecord r;
            r.name = std::string(f[0]);
            r.race = parse_race(f[1]);
            r.gender = parse_gender(f[2]);
            r.group = group_of(r.race, r.gender);
            const auto expected = r.group ? to_string(*r.group) : "-";
            if (f[3] != expected) throw std::invalid_argument("group column disagrees with race/gender");
            const auto freq = detail::parse_u64(f[4]);
            if (!freq || *freq < 1) throw std::invalid_argument("bad ssa_frequency");
            r.ssa_frequency = *freq;
            const auto ties = trim(f[5]);
            r.race_tie = ties.find("race") != std::string_view::npos;
            r.gender_tie = ties.find("gender") != std::string_view::npos;
            records.push_back(std::move(r));
        } catch (const std::invalid_argument& e) {
            throw ParseError(file, row, e.what());
        }
    }
    return Registry(std::move(records));
}

Registry cross_reference(const std::vector<RaceEntry>& race_list, const SsaMap& ssa,
                         std::size_t min_group_size) {
    std::unordered_map<std::string, const RaceEntry*> by_lower;
    for (const auto& e : race_list) by_lower.emplace(detail::ascii_lower(e.name), &e);

    std::vector<NameRecord> joined;
    for (const auto& [ssa_name, counts] : ssa) {
        const auto it = by_lower.find(detail::ascii_lower(ssa_name));
        if (it == by_lower.end()) continue;
        if (counts.female_births + counts.male_births < 1) continue;
        const auto race = assign_race_label(it->second->distribution);
        const auto gender = assign_gender_label(counts);
        NameRecord r;
        r.name = normal_form(ssa_name);
        r.race = race.race;
        r.race_tie = race.tie;
        r.gender = gender.gender;
        r.gender_tie = gender.tie;
        r.group = group_of(r.race, r.gender);
        r.ssa_frequency = counts.female_births + counts.male_births;
        joined.push_back(std::move(r));
    }
    if (joined.empty()) {
        throw std::invalid_argument("cross_reference: no name appears in both sources");
    }

    std::array<std::size_t, kRaceCount> per_race{};
    for (const auto& r : joined) ++per_race[static_cast<std::size_t>(r.race)];
    std::erase_if(joined, [&](const NameRecord& r) {
        return per_race[static_cast<std::size_t>(r.race)] < min_group_size;
    });
    if (joined.empty()) {
        throw std::invalid_argument("cross_reference: every race label has fewer than " +
                                    std::to_string(min_group_size) + " names");
    }
    return Registry(std::move(joined));
}

}  // namespace namefreq
