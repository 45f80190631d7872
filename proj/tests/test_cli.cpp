#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "geophase/linalg.hpp"

using nlohmann::json;
using geophase::kPi;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = geophase::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
    const auto r = run(std::move(args));
    INFO(r.err);
    REQUIRE(r.code == 0);
    return json::parse(r.out);
}

void write_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double summary_from_csv(const std::string& csv, const std::string& name) {
    const std::string key = "#summary," + name + ",";
    const auto pos = csv.find(key);
    REQUIRE(pos != std::string::npos);
    return std::stod(csv.substr(pos + key.size()));
}

}  // namespace

TEST_CASE("phase command reports the headline decomposition") {
    const auto doc = run_json({"phase", "--omega-over-delta", "0.5", "--periods", "1"});
    const auto& a = doc.at("analytic");
    CHECK(a.at("total").get<double>() == doctest::Approx(-kPi / 2.0).epsilon(1e-9));
    CHECK(a.at("geometric").get<double>() == doctest::Approx(kPi / 2.0).epsilon(1e-9));
    CHECK(a.at("dynamic").get<double>() == doctest::Approx(-kPi).epsilon(1e-9));
    CHECK(a.at("eta").get<double>() == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(a.at("classification") == "unconventional");
    CHECK(doc.at("schema_version") == 1);
    CHECK(doc.at("closed") == true);
}

TEST_CASE("phase command on a zero drive") {
    const auto doc = run_json({"phase", "--omega-over-delta", "0"});
    for (const char* k : {"total", "geometric", "dynamic"}) CHECK(doc.at("analytic").at(k) == 0.0);
}

TEST_CASE("open loops are rejected on request") {
    const auto r = run({"phase", "--omega-over-delta", "0.5", "--periods", "0.5", "--require-closed"});
    CHECK(r.code == 2);
    // alpha(pi / delta) = -i, so the residual is 1.
    CHECK(r.err.find("residual 1 ") != std::string::npos);
    CHECK(r.out.empty());
    CHECK(run({"phase", "--omega-over-delta", "0.5", "--periods", "0.5"}).code == 0);
}

TEST_CASE("phase command with the oracle") {
    const auto doc = run_json({"phase", "--oracle", "--n-max", "40", "--steps", "4000"});
    const auto& states = doc.at("oracle").at("states");
    CHECK(states[1].at("total").get<double>() == doctest::Approx(-kPi / 2.0).epsilon(1e-5));
    CHECK(doc.at("oracle").at("n_max") == 40);

    const auto trunc = run({"phase", "--oracle", "--omega-over-delta", "2", "--n-max", "8", "--fixed-n-max"});
    CHECK(trunc.code == 3);
    CHECK(trunc.err.find("n_max") != std::string::npos);
}

TEST_CASE("gate command") {
    SUBCASE("designed drive corrected to CZ") {
        const auto doc = run_json({"gate", "--target-phase", "-1.5707963268", "--correct-to-cz"});
        const auto& m = doc.at("gate").at("matrix");
        const double expected[4] = {1.0, 1.0, 1.0, -1.0};
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const double re = m[i][j][0].get<double>(), im = m[i][j][1].get<double>();
                CHECK(std::hypot(re - (i == j ? expected[i] : 0.0), im) < 1e-10);
            }
        }
        CHECK(doc.at("fidelity_vs_cz").get<double>() == 1.0);
        CHECK(doc.at("nontrivial") == true);
    }
    SUBCASE("zero jz gate is the identity") {
        const auto doc = run_json({"gate", "--conditioner", "jz", "--gamma0", "0"});
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK(doc.at("gate").at("matrix")[i][j] == json::array({i == j ? 1.0 : 0.0, 0.0}));
        CHECK(doc.at("nontrivial") == false);
    }
    SUBCASE("jy gate matches the dense exponential") {
        const auto doc = run_json({"gate", "--conditioner", "jy", "--gamma", "0.7"});
        CHECK(doc.at("dense_expm_deviation").get<double>() < 1e-10);
        CHECK(doc.at("gate").at("phases").is_null());
    }
    SUBCASE("source selection") {
        CHECK(run({"gate"}).code == 2);
        CHECK(run({"gate", "--gamma", "1", "--gamma0", "1"}).code == 2);
        CHECK(run({"gate", "--target-phase", "0.5"}).code == 2);
        CHECK(run({"gate", "--conditioner", "jy", "--gamma", "0.2", "--correct-to-cz"}).code == 2);
        CHECK(run({"gate", "--conditioner", "jz", "--gamma", "0.2"}).code == 2);
    }
    SUBCASE("csv output") {
        const auto r = run({"gate", "--gamma", "-1.5707963267948966", "--format", "csv"});
        CHECK(r.code == 0);
        CHECK(r.out.rfind("row,col,re,im\n", 0) == 0);
        CHECK(r.out.find("#nontrivial,true") != std::string::npos);
    }
}

TEST_CASE("sweep command") {
    write_file("eta_sweep.json",
               R"({"command": "sweep", "kind": "eta", "parameter": "omega_over_delta",
                   "grid": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0], "format": "csv"})");
    const auto r = run({"sweep", "--config", "eta_sweep.json"});
    REQUIRE(r.code == 0);
    CHECK(summary_from_csv(r.out, "max_abs_eta_plus_2") < 1e-6);

    CHECK(run({"sweep", "--kind", "eta", "--grid", ""}).code == 2);
    CHECK(run({"sweep", "--kind", "eta"}).code == 2);

    const auto timing = run({"sweep", "--kind", "timing", "--grid", "0.001,0.002,0.005,0.01", "--format", "csv"});
    REQUIRE(timing.code == 0);
    CHECK(summary_from_csv(timing.out, "loglog_slope") >= 2.5);

    const auto area = run_json({"sweep", "--kind", "area", "--grid", "1,2"});
    CHECK(area.at("summary").at("spread").get<double>() < 1e-6);

    const auto noncyclic = run_json({"sweep", "--kind", "noncyclic", "--grid", "0.5,1"});
    CHECK(noncyclic.at("rows")[1].at("total").get<double>() == doctest::Approx(-kPi / 2.0).epsilon(1e-9));
    CHECK(run({"sweep", "--kind", "spiral", "--grid", "1"}).code == 2);
}

TEST_CASE("config files merge with flags") {
    write_file("phase_cfg.json", R"({"omega_over_delta": 0.25, "periods": 1})");
    const auto from_file = run_json({"phase", "--config", "phase_cfg.json"});
    CHECK(from_file.at("analytic").at("total").get<double>() ==
          doctest::Approx(-2.0 * kPi * 0.0625).epsilon(1e-9));
    const auto overridden = run_json({"phase", "--config", "phase_cfg.json", "--omega-over-delta", "0.5"});
    CHECK(overridden.at("analytic").at("total").get<double>() == doctest::Approx(-kPi / 2.0).epsilon(1e-9));

    write_file("unknown.json", R"({"omega_over_delta": 0.5, "speed": 3})");
    const auto unknown = run({"phase", "--config", "unknown.json"});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("speed") != std::string::npos);

    write_file("wrong_type.json", R"({"omega_over_delta": "half"})");
    CHECK(run({"phase", "--config", "wrong_type.json"}).code == 2);
    write_file("broken.json", R"({"omega_over_delta": )");
    CHECK(run({"phase", "--config", "broken.json"}).code == 2);
    write_file("other.json", R"({"command": "gate"})");
    CHECK(run({"phase", "--config", "other.json"}).code == 2);
    CHECK(run({"phase", "--config", "missing.json"}).code == 2);
}

TEST_CASE("drive files") {
    write_file("square.json", R"({"schema_version": 1, "conditioner": "odd-parity-projector", "segments": [
        {"kind": "constant", "duration": 1, "amplitude": [0.5, 0]},
        {"kind": "constant", "duration": 1, "amplitude": [0, 0.5]},
        {"kind": "constant", "duration": 1, "amplitude": [-0.5, 0]},
        {"kind": "constant", "duration": 1, "amplitude": [0, -0.5]}]})");
    const auto doc = run_json({"phase", "--drive", "square.json", "--require-closed"});
    CHECK(doc.at("analytic").at("geometric").get<double>() == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(doc.at("reference").is_null());
    CHECK(run({"phase", "--drive", "square.json", "--omega-over-delta", "0.5"}).code == 2);
    CHECK(run({"phase", "--drive", "square.json", "--duration", "9"}).code == 2);

    const auto gate = run_json({"gate", "--drive", "square.json", "--conditioner", "jz"});
    CHECK(gate.at("gamma0").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("oracle-verify and design") {
    const auto doc = run_json({"oracle-verify", "--n-max", "40", "--steps", "4000"});
    CHECK(doc.at("max_deviation").get<double>() < 1e-4);
    CHECK(doc.at("magnus").at("deviation").get<double>() < 1e-4);

    const auto design = run_json({"design", "--target-phase", "-6.283185307179586"});
    CHECK(design.at("params").at("omega_over_delta").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(run({"design", "--target-phase", "0.5"}).code == 2);
    CHECK(run({"design"}).code == 2);

    CHECK(run({"design", "--target-phase", "-3.14159", "--out", "designed.json"}).code == 0);
    const auto replay = run_json({"phase", "--drive", "designed.json", "--require-closed"});
    CHECK(replay.at("analytic").at("total").get<double>() == doctest::Approx(-3.14159).epsilon(1e-8));
}

TEST_CASE("argument errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"teleport"}).code == 2);
    CHECK(run({"phase", "--bogus"}).code == 2);
    CHECK(run({"phase", "--omega-over-delta", "abc"}).code == 2);
    CHECK(run({"phase", "--format", "xml"}).code == 2);
    CHECK(run({"phase", "--delta", "0"}).code == 2);
    CHECK(run({"phase", "--samples", "1"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("output is deterministic and --out writes the same bytes") {
    const std::vector<std::string> args{"sweep", "--kind", "timing", "--grid", "0.001,0.01", "--oracle",
                                        "--n-max", "40", "--steps", "2000"};
    const auto first = run(args);
    const auto second = run(args);
    REQUIRE(first.code == 0);
    CHECK(first.out == second.out);

    auto with_out = args;
    with_out.insert(with_out.end(), {"--out", "timing.json"});
    const auto written = run(with_out);
    CHECK(written.code == 0);
    CHECK(written.out.empty());
    CHECK(read_file("timing.json") == first.out);
}
