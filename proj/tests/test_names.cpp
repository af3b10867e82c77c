#include <doctest.h>

#include "namefreq/names.hpp"
#include "support.hpp"

using namespace namefreq;
using testing_util::TempDir;
using testing_util::write_file;

namespace {

const char* kHeader = "name,obs,white,black,hispanic,api,aian,two_or_more\n";

RaceDistribution dist(std::initializer_list<std::pair<Race, double>> parts) {
    RaceDistribution d;
    for (auto [r, p] : parts) d.proportions[static_cast<std::size_t>(r)] = p;
    return d;
}

}  // namespace

TEST_CASE("race table rows") {
    TempDir dir("race");
    write_file(dir / "t.csv", std::string(kHeader) + "Maria,1200,0.10,0.02,0.85,0.02,0.00,0.01\n");
    const auto rows = load_race_table(dir / "t.csv");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].name == "Maria");
    CHECK(rows[0].distribution.observations == 1200);
    CHECK(rows[0].distribution[Race::Hispanic] == 0.85);
    CHECK(rows[0].distribution[Race::White] == 0.10);

    write_file(dir / "dup.csv", std::string(kHeader) + "Anna,10,1,0,0,0,0,0\nBob,10,1,0,0,0,0,0\nAnna,5,0,1,0,0,0,0\n");
    try {
        load_race_table(dir / "dup.csv");
        FAIL("expected duplicate error");
    } catch (const ParseError& e) {
        CHECK(e.row() == 4);
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }

    write_file(dir / "sum.csv", std::string(kHeader) + "Anna,10,0.2,0.1,0.1,0.1,0.0,0.0\n");
    CHECK_THROWS_WITH_AS(load_race_table(dir / "sum.csv"), doctest::Contains("sum"), ParseError);

    write_file(dir / "pct.tsv", "name\tobs\twhite\tblack\thispanic\tapi\taian\ttwo_or_more\nKim\t40\t10\t0\t0\t90\t0\t0\n");
    RaceTableFormat fmt;
    fmt.delimiter = '\t';
    fmt.percent = true;
    const auto pct = load_race_table(dir / "pct.tsv", fmt);
    CHECK(pct[0].distribution[Race::Asian] == doctest::Approx(0.9));

    write_file(dir / "nohdr.csv", "");
    CHECK_THROWS_AS(load_race_table(dir / "nohdr.csv"), ParseError);
}

TEST_CASE("ssa year file") {
    TempDir dir("ssa");
    write_file(dir / "yob.txt", "Taylor,F,7258\nAiko,F,120\nTaylor,M,6577\n");
    const auto ssa = load_ssa_year(dir / "yob.txt");
    CHECK(ssa.at("Taylor").female_births == 7258);
    CHECK(ssa.at("Taylor").male_births == 6577);
    CHECK(ssa.at("Aiko").female_births == 120);
    CHECK(ssa.at("Aiko").male_births == 0);

    write_file(dir / "bad.txt", "Anna,F,3\nBob,X,5\n");
    try {
        load_ssa_year(dir / "bad.txt");
        FAIL("expected unknown sex error");
    } catch (const ParseError& e) {
        CHECK(e.row() == 2);
    }
    write_file(dir / "cnt.txt", "Anna,F,many\n");
    CHECK_THROWS_AS(load_ssa_year(dir / "cnt.txt"), ParseError);
}

TEST_CASE("race label") {
    CHECK(assign_race_label(dist({{Race::White, 1.0}})).race == Race::White);
    const auto mixed = assign_race_label(dist({{Race::White, 0.40}, {Race::Hispanic, 0.35}, {Race::Black, 0.25}}));
    CHECK(mixed.race == Race::White);
    CHECK_FALSE(mixed.tie);
    const auto tie = assign_race_label(dist({{Race::White, 0.5}, {Race::Black, 0.5}}));
    CHECK(tie.race == Race::White);
    CHECK(tie.tie);
    const auto tie2 = assign_race_label(dist({{Race::Asian, 0.5}, {Race::Hispanic, 0.5}}));
    CHECK(tie2.race == Race::Hispanic);
}

TEST_CASE("gender label") {
    const auto taylor = assign_gender_label({7258, 6577});
    CHECK(taylor.gender == Gender::Female);
    CHECK_FALSE(taylor.tie);
    CHECK(assign_gender_label({0, 412}).gender == Gender::Male);
    const auto tie = assign_gender_label({10, 10});
    CHECK(tie.gender == Gender::Female);
    CHECK(tie.tie);
}

TEST_CASE("groups") {
    CHECK(group_of(Race::Black, Gender::Female) == DemographicGroup::BF);
    CHECK(group_of(Race::White, Gender::Male) == DemographicGroup::WM);
    CHECK_FALSE(group_of(Race::NativeAmerican, Gender::Male).has_value());
    CHECK_FALSE(group_of(Race::Mixed, Gender::Female).has_value());
    for (auto g : kReportGroups) CHECK(parse_group(to_string(g)) == g);
    CHECK(normal_form("taylor") == "Taylor");
    CHECK(normal_form("JOSÉ") == "JOSÉ");
}

TEST_CASE("cross reference") {
    std::vector<RaceEntry> races{{"ANNA", dist({{Race::White, 1.0}})}};
    SsaMap only_bob{{"Bob", {0, 5}}};
    CHECK_THROWS_AS(cross_reference(races, only_bob), std::invalid_argument);

    // 9 white names, 1 native american name
    std::vector<RaceEntry> list;
    SsaMap ssa;
    const char* white[] = {"Amy", "Ben", "Cal", "Dee", "Eve", "Fay", "Gus", "Hal", "Ida"};
    for (const char* n : white) {
        list.push_back({n, dist({{Race::White, 0.9}, {Race::Black, 0.1}})});
        ssa[n] = {30, 2};
    }
    list.push_back({"Koda", dist({{Race::NativeAmerican, 0.8}, {Race::White, 0.2}})});
    ssa["Koda"] = {1, 40};
    list.push_back({"Zed", dist({{Race::White, 1.0}})});  // not in ssa
    const auto reg = cross_reference(list, ssa, 8);
    CHECK(reg.size() == 9);
    CHECK(reg.find("Koda") == nullptr);
    CHECK(reg.find("Amy")->group == DemographicGroup::WF);
    CHECK(reg.find("Amy")->ssa_frequency == 32);
    CHECK(reg.size() <= std::min(list.size(), ssa.size()));

    const auto all = cross_reference(list, ssa, 1);
    CHECK(all.find("Koda") != nullptr);
    CHECK_FALSE(all.find("Koda")->group.has_value());
    CHECK_THROWS_AS(cross_reference(list, ssa, 100), std::invalid_argument);
}

TEST_CASE("registry properties on random inputs") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<RaceEntry> list;
        SsaMap ssa;
        for (int i = 0; i < 80; ++i) {
            std::string name = "N" + std::to_string(t) + "x" + std::to_string(i);
            RaceDistribution d;
            double total = 0;
            for (auto& p : d.proportions) total += (p = u(rng));
            for (auto& p : d.proportions) p /= total;
            if (i % 3 != 0) list.push_back({name, d});
            if (i % 4 != 0) ssa[name] = {static_cast<std::uint64_t>(u(rng) * 50), static_cast<std::uint64_t>(u(rng) * 50) + 1};
        }
        const auto reg = cross_reference(list, ssa, 1);
        CHECK(reg.size() <= std::min(list.size(), ssa.size()));
        for (const auto& r : reg.records()) {
            const auto it = std::find_if(list.begin(), list.end(), [&](const RaceEntry& e) { return e.name == r.name; });
            REQUIRE(it != list.end());
            const auto race = assign_race_label(it->distribution);
            const auto gender = assign_gender_label(ssa.at(r.name));
            CHECK(r.race == race.race);
            CHECK(r.gender == gender.gender);
            CHECK(r.group == group_of(race.race, gender.gender));
        }
    }
}

TEST_CASE("registry file round trip is deterministic") {
    TempDir dir("reg");
    std::vector<RaceEntry> list;
    SsaMap ssa;
    const char* names[] = {"Zoe", "Amir", "Lupe", "Mei", "Jamal", "Hank", "Rosa", "Ken"};
    const Race races[] = {Race::White, Race::Black, Race::Hispanic, Race::Asian};
    for (int i = 0; i < 8; ++i) {
        list.push_back({names[i], dist({{races[i % 4], 1.0}})});
        ssa[names[i]] = {static_cast<std::uint64_t>(10 + i), static_cast<std::uint64_t>(i % 2 ? 100 : 1)};
    }
    const auto reg = cross_reference(list, ssa, 1);
    reg.write(dir / "a.tsv", {"made in a test"});
    reg.write(dir / "b.tsv", {"made in a test"});
    CHECK(testing_util::read_file(dir / "a.tsv") == testing_util::read_file(dir / "b.tsv"));
    const auto back = Registry::read(dir / "a.tsv");
    REQUIRE(back.size() == reg.size());
    for (std::size_t i = 0; i < reg.size(); ++i) {
        CHECK(back.records()[i].name == reg.records()[i].name);
        CHECK(back.records()[i].group == reg.records()[i].group);
        CHECK(back.records()[i].ssa_frequency == reg.records()[i].ssa_frequency);
    }
    const auto counts = reg.group_counts();
    CHECK(counts.at(DemographicGroup::WF) == 2);
    CHECK(counts.at(DemographicGroup::BM) == 2);
}
