#include "nutaxis/errors.hpp"
#include "nutaxis/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace nutaxis;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("nutaxis_io_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

std::string message_of(auto&& f) {
    try {
        f();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("config round trip") {
    for (const auto& [name, variant] : {std::pair{"fig1_left", "sigma=120"}, {"fig1_right", "l=1.4"}, {"fig3", "d=3"}}) {
        const ScenarioConfig c = preset(name, variant);
        CHECK(config_from_json(to_json(c)) == c);
        const fs::path p = scratch(std::string(name) + ".json");
        write_config(c, p);
        CHECK(read_config(p) == c);
    }
}

TEST_CASE("strict config parsing names the offending key") {
    json doc = to_json(preset("fig1_right", "l=14"));

    json extra = doc;
    extra["params"]["chii"] = 1.0;
    CHECK(message_of([&] { config_from_json(extra); }).find("/params/chii") != std::string::npos);

    json missing = doc;
    missing["geometry"].erase("n_cells");
    CHECK(message_of([&] { config_from_json(missing); }).find("/geometry/n_cells") != std::string::npos);

    json wrong_type = doc;
    wrong_type["t_end"] = "long";
    CHECK(message_of([&] { config_from_json(wrong_type); }).find("/t_end") != std::string::npos);

    json bad_profile = doc;
    bad_profile["initial"]["w"]["kind"] = "triangle";
    CHECK_THROWS_AS(config_from_json(bad_profile), ConfigError);

    json invalid = doc;
    invalid["params"]["D_u"] = -1.0;
    CHECK_THROWS_AS(config_from_json(invalid), ConfigError);

    json partial_stepper = doc;
    partial_stepper["stepper"] = {{"scheme", "sbdf1"}};
    CHECK(config_from_json(partial_stepper).stepper.scheme == TimeScheme::sbdf1);
}

TEST_CASE("preset references") {
    const ScenarioConfig c = config_from_document({{"preset", "fig1_right"}, {"variant", "l=14"}, {"n_cells", 50}});
    CHECK(c.geometry.n_cells == 50);
    CHECK(c.params == preset("fig1_right", "l=14").params);
    CHECK_THROWS_AS(config_from_document({{"preset", "fig1_right"}, {"variant", "l=14"}, {"bogus", 1}}), ConfigError);
    CHECK_THROWS_AS(config_from_document({{"preset", "nope"}, {"variant", "1"}}), UnknownVariant);
}

TEST_CASE("records csv round trip") {
    ScenarioConfig c = preset("fig1_right", "l=14");
    c.geometry.n_cells = 40;
    c.t_end = 1.0;
    const ScenarioResult res = run_scenario(c);
    const fs::path p = scratch("records.csv");
    write_records(res.records, p);

    std::ifstream in(p);
    std::string header, row;
    std::getline(in, header);
    CHECK(std::count(header.begin(), header.end(), ',') == 13);
    CHECK(header.rfind("t,", 0) == 0);
    int rows = 0;
    while (std::getline(in, row)) {
        CHECK(std::count(row.begin(), row.end(), ',') == 13);
        ++rows;
    }
    CHECK(rows == static_cast<int>(res.records.size()));

    const auto back = read_records(p);
    REQUIRE(back.size() == res.records.size());
    for (std::size_t k = 0; k < back.size(); ++k) CHECK(back[k].values() == res.records[k].values());
    for (std::size_t k = 1; k < back.size(); ++k) CHECK(back[k].t > back[k - 1].t);
}

TEST_CASE("malformed records report the line") {
    const fs::path p = scratch("broken.csv");
    {
        std::ofstream out(p);
        std::string header;
        for (const auto& n : DiagnosticsRecord::field_names()) header += (header.empty() ? "" : ",") + std::string(n);
        out << header << '\n' << "0,1,2,3,4,5,6,7,8,9,10,11,12,13\n" << "1,2,3\n";
    }
    CHECK(message_of([&] { read_records(p); }).find("3") != std::string::npos);
    CHECK_THROWS_AS(read_records(scratch("absent.csv")), ConfigError);
}

TEST_CASE("manifest") {
    ScenarioConfig c = preset("fig1_left", "sigma=60");
    c.geometry.n_cells = 40;
    c.t_end = 1.0;
    const ScenarioResult res = run_scenario(c);
    const json m = make_manifest(res);
    for (const char* key : {"version", "config", "constants", "grid", "steps", "audits", "wall_seconds", "initial_index"})
        CHECK(m.contains(key));
    CHECK(m["version"] == kVersion);
    CHECK(config_from_json(m["config"]) == c);
    CHECK(m["constants"]["kappa"].get<double>() == res.constants.kappa);
    CHECK(m["grid"]["n_cells"] == 40);
    CHECK(m["audits"].size() == res.audits.checks.size());

    const fs::path p = scratch("manifest.json");
    write_manifest(res, p);
    CHECK(read_json_file(p) == json::parse(m.dump()));
}

TEST_CASE("sweep spec parsing") {
    const json doc = {{"base", {{"preset", "fig1_right"}, {"variant", "l=14"}}},
                      {"mode", "zip"},
                      {"overrides", {{{"path", "/variant"}, {"values", {"l=1.4", "l=20"}}}}}};
    const SweepSpec s = sweep_from_json(doc);
    CHECK(s.mode == SweepMode::zip);
    REQUIRE(s.overrides.size() == 1);
    CHECK(s.overrides[0].path == "/variant");
    CHECK(s.overrides[0].values.size() == 2);

    json bad = doc;
    bad["mode"] = "diagonal";
    CHECK_THROWS_AS(sweep_from_json(bad), ConfigError);
    bad = doc;
    bad["overrides"][0]["step"] = 1;
    CHECK_THROWS_AS(sweep_from_json(bad), ConfigError);
}

TEST_CASE("sweep table") {
    SweepRow ok;
    ok.label = "/variant=l=14";
    ok.ok = true;
    ok.final_I = -0.25;
    SweepRow failed;
    failed.label = "x";
    failed.error = "boom, at t = 1";
    const fs::path p = scratch("sweep_table.csv");
    write_sweep_table({ok, failed}, p);
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    CHECK(line == "run,label,status,M_star,sigma_star,final_I,final_sign,audits_passed,error");
    std::getline(in, line);
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
    CHECK(line.find("-0.25") != std::string::npos);
    std::getline(in, line);
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
}

TEST_CASE("format_double keeps 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
