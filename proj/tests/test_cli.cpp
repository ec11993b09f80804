#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dagger/spec_io.hpp"

using namespace dagger;
namespace fs = std::filesystem;

namespace {

fs::path workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("dagger_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    const fs::path f = workdir() / name;
    std::ofstream(f) << text;
    return f.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Runs the CLI with the given arguments; stdout/stderr go to files in the work dir.
int run(const std::string& args) {
    const char* cli = std::getenv("DAGGER_CLI");
    REQUIRE_MESSAGE(cli != nullptr, "DAGGER_CLI must point to the dagger executable");
    const std::string cmd = std::string(cli) + " " + args + " > " + (workdir() / "stdout.txt").string() + " 2> " +
                            (workdir() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

Json run_json(const std::string& args, int expect_exit) {
    const std::string out = (workdir() / "report.json").string();
    fs::remove(out);
    CHECK(run(args + " --json-out " + out) == expect_exit);
    return Json::parse(read_file(out));
}

}  // namespace

TEST_CASE("G_m at p = 7, s = 4, M = 3 passes with Z = (1 - t)/(1 - 7t)") {
    auto spec = write_file("gm.json", R"({"spec_version": 1, "variety": {"family": "torus", "n": 1},
                                          "p": "7", "precision": 4, "depth": 3})");
    Json r = run_json("zeta --spec " + spec, 0);
    CHECK(r["verdict"] == "PASS");
    CHECK(r["result"]["zeta"]["numerator"] == Json::array({"1", "-1"}));
    CHECK(r["result"]["zeta"]["denominator"] == Json::array({"1", "-7"}));
    CHECK(r["result"]["zeta"]["text"] == "(1 - t)/(1 - 7t)");
    // N_m = 7^m - 1
    const char* counts[] = {"6", "48", "342"};
    for (int m = 0; m < 3; ++m) {
        CHECK(r["result"]["counts"][m]["recovered"] == counts[m]);
        CHECK(r["result"]["counts"][m]["brute_force"] == counts[m]);
    }
    CHECK(r["precision_ledger"]["working_precision"] == 4);
}

TEST_CASE("schema errors exit 2") {
    auto bad = write_file("bad.json", R"({"spec_version": 1, "variety": )");
    CHECK(run("zeta --spec " + bad) == 2);
    CHECK(read_file((workdir() / "stderr.txt").string()).find("malformed JSON") != std::string::npos);
    auto family = write_file("family.json", R"({"spec_version": 1, "variety": {"family": "sphere"}, "p": 5})");
    CHECK(run("zeta --spec " + family) == 2);
    auto version = write_file("version.json", R"({"spec_version": 2, "variety": {"family": "torus"}, "p": 5})");
    CHECK(run("zeta --spec " + version) == 2);
    auto prime = write_file("prime.json", R"({"spec_version": 1, "variety": {"family": "torus"}, "p": "9"})");
    CHECK(run("zeta --spec " + prime) == 2);
    CHECK(run("zeta --spec " + (workdir() / "missing.json").string()) == 2);
    CHECK(run("zeta") == 2);
}

TEST_CASE("under-provisioned precision exits 3 with the required s") {
    auto spec = write_file("ell.json", R"({"spec_version": 1,
        "variety": {"family": "hyperelliptic_patch", "f": [0, -1, 0, 1]}, "p": 7, "precision": 1})");
    Json r = run_json("zeta --spec " + spec, 3);
    CHECK(r["verdict"] == "ERROR");
    CHECK(r["error"]["kind"] == "precision");
    CHECK(r["error"]["message"].get<std::string>().find("required s") != std::string::npos);
    // the command-line value wins over the spec
    auto ok = write_file("ell_auto.json", R"({"spec_version": 1,
        "variety": {"family": "hyperelliptic_patch", "f": [0, -1, 0, 1]}, "p": 7})");
    CHECK(run("zeta --spec " + ok + " --precision 1") == 3);
}

TEST_CASE("elliptic patch with auto-sized precision") {
    auto spec = write_file("ell2.json", R"({"spec_version": 1,
        "variety": {"family": "hyperelliptic_patch", "f": ["0", "-1", "0", "1"]}, "p": 7})");
    Json r = run_json("zeta --spec " + spec + " --depth 2", 0);
    CHECK(r["result"]["counts"][0]["brute_force"] == "4");
    CHECK(r["result"]["counts"][1]["brute_force"] == "60");
    CHECK(r["result"]["weil_check"] == true);
}

TEST_CASE("cohomology of A^3 and G_m") {
    auto a3 = write_file("a3.json", R"({"spec_version": 1, "variety": {"family": "affine_space", "n": 3}, "p": 5})");
    Json r = run_json("cohomology --spec " + a3, 0);
    CHECK(r["result"]["dims"] == Json::array({1, 0, 0, 0}));
    CHECK(r["result"]["stability"]["stable"] == true);
    auto gm = write_file("gm_coh.json", R"({"spec_version": 1, "variety": {"family": "torus"}, "p": 5,
        "cohomology": {"homotopy": true, "gysin": {"points": [0, 1]}}})");
    Json g = run_json("cohomology --spec " + gm, 0);
    CHECK(g["result"]["dims"] == Json::array({1, 1}));
    CHECK(g["result"]["homotopy"]["dims_X_times_A1"] == Json::array({1, 1, 0}));
    CHECK(g["result"]["gysin"]["dims_U"] == Json::array({1, 2}));
    CHECK(g["result"]["bases"][1]["basis"].size() == 1);
}

TEST_CASE("unstable bounds exit 4") {
    auto gm = write_file("gm_tight.json", R"({"spec_version": 1, "variety": {"family": "torus"}, "p": 5,
        "bounds": {"D": 0, "E": 0}})");
    Json r = run_json("cohomology --spec " + gm, 4);
    CHECK(r["error"]["kind"] == "instability");
    auto ok = write_file("gm_ok.json", R"({"spec_version": 1, "variety": {"family": "torus"}, "p": 5})");
    CHECK(run("cohomology --spec " + ok + " --bounds 0,0") == 4);
    CHECK(run("cohomology --spec " + ok + " --bounds 4,2") == 0);
    CHECK(run("cohomology --spec " + ok + " --bounds 4") == 2);
}

TEST_CASE("default group battery passes and is byte-identical for a fixed seed") {
    const std::string a = (workdir() / "g1.json").string(), b = (workdir() / "g2.json").string();
    CHECK(run("group --seed 7 --json-out " + a) == 0);
    CHECK(run("group --seed 7 --json-out " + b) == 0);
    const std::string ta = read_file(a);
    CHECK(ta == read_file(b));
    Json r = Json::parse(ta);
    CHECK(r["verdict"] == "PASS");
    CHECK(r["result"]["p"] == "5");
    CHECK(r["result"]["s"] == 4);
    CHECK(r["result"]["n"] == 2);
    for (const auto& prop : r["result"]["properties"]) CHECK(prop["checked"] == 100);
    // stdout mode produces the same bytes
    CHECK(run("group --seed 7") == 0);
    CHECK(read_file((workdir() / "stdout.txt").string()) == ta);
    CHECK(run("group --seed 8 --json-out " + b) == 0);
    CHECK(read_file(b) != ta);
}

TEST_CASE("trivial group passes vacuously") {
    auto spec = write_file("g0.json", R"({"spec_version": 1, "group": {"n": 0}})");
    Json r = run_json("group --spec " + spec, 0);
    CHECK(r["verdict"] == "PASS");
    for (const auto& prop : r["result"]["properties"]) CHECK(prop["checked"] == 0);
}

TEST_CASE("zeta reports are deterministic") {
    auto spec = write_file("p3.json", R"({"spec_version": 1,
        "variety": {"family": "punctured_line", "punctures": [0, 1, 2]}, "p": 5})");
    CHECK(run("zeta --spec " + spec) == 0);
    const std::string first = read_file((workdir() / "stdout.txt").string());
    CHECK(run("zeta --spec " + spec) == 0);
    CHECK(read_file((workdir() / "stdout.txt").string()) == first);
    CHECK(first.find("wall_time") == std::string::npos);
    CHECK(run("zeta --spec " + spec + " --timing") == 0);
    CHECK(read_file((workdir() / "stdout.txt").string()).find("wall_time_seconds") != std::string::npos);
}

TEST_CASE("products are accepted") {
    auto spec = write_file("prod.json", R"({"spec_version": 1, "variety": {"family": "product",
        "components": [{"family": "torus"}, {"family": "affine_space", "n": 1}]}, "p": 5})");
    Json r = run_json("zeta --spec " + spec + " --depth 2", 0);
    CHECK(r["result"]["counts"][0]["brute_force"] == "20");
}

TEST_CASE("local cohomology") {
    Json r = run_json("localcoh", 0);
    CHECK(r["result"]["purity"]["concentrated"] == true);
    auto spec = write_file("lc.json", R"({"spec_version": 1, "p": 5, "precision": 3, "bounds": {"D": 4, "E": 4},
        "localcoh": {"n": 2,
          "z": [[{"c": 1, "e": [1, 0]}], [{"c": 1, "e": [0, 1]}]],
          "z_prime": [[[{"c": 1, "e": [1, 0]}], [{"c": 1, "e": [0, 1]}]],
                      [[{"c": 6, "e": [1, 0]}, {"c": 1, "e": [2, 0]}], [{"c": 1, "e": [0, 1]}, {"c": "5", "e": [1, 0]}]]]}})");
    Json ok = run_json("localcoh --spec " + spec, 0);
    CHECK(ok["result"]["changes"][0]["det"] == Json::array({Json{{"c", "1"}, {"e", {0, 0}}}}));
    CHECK(ok["result"]["changes"][1]["equal"] == true);
    // 1/6 mod 125
    CHECK(ok["result"]["changes"][1]["det"][0]["c"] == "21");
    auto mismatch = write_file("lc_bad.json", R"({"spec_version": 1, "p": 5,
        "localcoh": {"n": 1, "z": [[{"c": 1, "e": [1]}]], "z_prime": [[[{"c": 1, "e": [1]}, {"c": 5, "e": [0]}]]]}})");
    Json bad = run_json("localcoh --spec " + mismatch, 1);
    CHECK(bad["verdict"] == "FAIL");
    CHECK(bad["result"]["changes"][0].contains("error"));
    auto unadapted = write_file("lc_un.json", R"({"spec_version": 1, "p": 5,
        "localcoh": {"n": 2, "z": [[{"c": 1, "e": [1, 0]}, {"c": 1, "e": [0, 1]}]]}})");
    CHECK(run("localcoh --spec " + unadapted) == 2);
}

TEST_CASE("integer formatting") {
    CHECK(format_integer_poly({1, -1}) == "1 - t");
    CHECK(format_integer_poly({1, -7}) == "1 - 7t");
    CHECK(format_integer_poly({1, 2, 7}) == "1 + 2t + 7t^2");
    CHECK(format_integer_poly({0, 0}) == "0");
    CHECK(json_int_value(Json("-12"), "x") == -12);
    CHECK_THROWS_AS(json_int_value(Json("12a"), "x"), SchemaError);
    CHECK_THROWS_AS(json_int_value(Json(1.5), "x"), SchemaError);
}
