#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

// End-to-end checks against the built binary; the path arrives via QLS_CLI_BIN.
namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

const char* cli_bin() { return std::getenv("QLS_CLI_BIN"); }

RunResult run(const std::string& args) {
    std::string cmd = std::string(cli_bin()) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    int status = pclose(p);
    return {WEXITSTATUS(status), out};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    REQUIRE(f.good());
    f << text;
}

}  // namespace

TEST_CASE("cli: transform, invariant, reduce, solve") {
    if (!cli_bin()) {
        MESSAGE("QLS_CLI_BIN not set; skipping CLI tests");
        return;
    }
    const std::string dir = "/tmp/qls_cli_test";
    std::system(("mkdir -p " + dir).c_str());
    write_file(dir + "/cubic.json", R"({"q": 3, "coeffs": ["0", "0", "0", "1"]})");
    write_file(dir + "/id_curve.json", R"({"beta": "0", "alpha": "1"})");
    write_file(dir + "/aff_curve.json", R"({"beta": "1", "alpha": "2"})");
    write_file(dir + "/ones.json", R"({"q": 3, "coeffs": ["1", "1", "1", "1"]})");
    write_file(dir + "/nonint.json", R"({"q": 3, "coeffs": ["1", "0", "0", "1"]})");
    write_file(dir + "/broken.json", R"({"q": 3})");

    SUBCASE("identity transform reproduces the input expressions") {
        RunResult r = run("transform " + dir + "/cubic.json " + dir + "/id_curve.json");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("\"transformed\"") != std::string::npos);
        // coefficients serialize exactly as in the input equation
        CHECK(r.output.find(R"("coeffs": [
      "0",
      "0",
      "0",
      "1"
    ])") != std::string::npos);
    }

    SUBCASE("constant affine transform yields (1/2, 3, 6, 4)") {
        RunResult r = run("--grid 0:1:16 transform " + dir + "/cubic.json " + dir +
                          "/aff_curve.json");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("0.5") != std::string::npos);
        CHECK(r.output.find("6") != std::string::npos);
    }

    SUBCASE("schema violations exit with code 2") {
        RunResult r = run("transform " + dir + "/broken.json " + dir + "/id_curve.json");
        CHECK(r.exit_code == 2);
    }

    SUBCASE("invariant stream holds F = 50/81 on the constant instance") {
        RunResult r = run("--grid 0:1:16 invariant " + dir + "/ones.json");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("0.6172839506172839") != std::string::npos);
        CHECK(r.output.find("null") == std::string::npos);
    }

    SUBCASE("invariant F is null when phi5 vanishes") {
        RunResult r = run("--grid 0:1:16 invariant " + dir + "/nonint.json");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("\"F\": null") != std::string::npos);
    }

    SUBCASE("reduce verdicts and exit codes") {
        write_file(dir + "/linearizable.json", R"({"q": 3, "coeffs": ["0", "1", "0", "1"]})");
        RunResult ok = run("--grid 0:0.5:64 reduce " + dir + "/linearizable.json --mu 0");
        CHECK(ok.exit_code == 0);
        CHECK(ok.output.find("\"reducible_2d\": true") != std::string::npos);

        RunResult no = run("--grid 0:0.5:64 reduce " + dir + "/nonint.json");
        CHECK(no.exit_code == 1);
        CHECK(no.output.find("\"reducible_2d\": false") != std::string::npos);
    }

    SUBCASE("solve emits CSV and flags blow-up") {
        RunResult r = run("--grid 0:0.3:32 solve " + dir + "/cubic.json --x0 0.5 --steps 64");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("0,0.5") != std::string::npos);
        RunResult blow = run("--grid 0:1:32 solve " + dir + "/cubic.json --x0 1.5 --steps 4096");
        CHECK(blow.exit_code == 3);
    }

    SUBCASE("reports are byte-identical across runs") {
        std::string args = "--grid 0:1:32 transform " + dir + "/cubic.json " + dir +
                           "/aff_curve.json --verify";
        RunResult a = run(args);
        RunResult b = run(args);
        CHECK(a.exit_code == 0);
        CHECK(a.output == b.output);
    }
}

TEST_CASE("cli: scheme and rank reports") {
    if (!cli_bin()) return;
    const std::string dir = "/tmp/qls_cli_test";
    std::system(("mkdir -p " + dir).c_str());
    // Y_0..Y_3 with W = <Y_0, Y_1> on the line
    write_file(dir + "/abel_scheme.json", R"({
      "V_basis": [
        {"dim": 1, "components": [[[[0], 1, 1]]]},
        {"dim": 1, "components": [[[[1], 1, 1]]]},
        {"dim": 1, "components": [[[[2], 1, 1]]]},
        {"dim": 1, "components": [[[[3], 1, 1]]]}
      ],
      "W_basis": [
        {"dim": 1, "components": [[[[0], 1, 1]]]},
        {"dim": 1, "components": [[[[1], 1, 1]]]}
      ]
    })");

    RunResult s = run("scheme " + dir + "/abel_scheme.json");
    CHECK(s.exit_code == 0);
    CHECK(s.output.find("\"W_subset_V\": true") != std::string::npos);
    CHECK(s.output.find("\"nilpotency_index\"") != std::string::npos);
    CHECK(s.output.find("4") != std::string::npos);

    RunResult r2 = run("rank " + dir + "/abel_scheme.json --p 2 --seed 7 --samples 20");
    CHECK(r2.exit_code == 0);
    CHECK(r2.output.find("\"generic_rank\": 8") != std::string::npos);
    CHECK(r2.output.find("\"invariant_count\": 4") != std::string::npos);
    CHECK(r2.output.find("liouville_first_integral_max_derivative") != std::string::npos);

    RunResult r1 = run("rank " + dir + "/abel_scheme.json --p 1 --seed 7 --samples 20");
    CHECK(r1.exit_code == 0);
    CHECK(r1.output.find("bracket_variants") != std::string::npos);
}
