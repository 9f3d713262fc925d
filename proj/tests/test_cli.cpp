#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "conespectra/cli.hpp"
#include "conespectra/errors.hpp"

using namespace conespectra;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string tmp_path(const std::string& name) {
    return (fs::temp_directory_path() / ("cone_spectra_test_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

int run_argv(std::vector<std::string> args) {
    std::vector<char*> argv;
    args.insert(args.begin(), "cone-spectra");
    for (auto& a : args) argv.push_back(a.data());
    return cli::main_entry(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("descriptor parsing") {
    auto c = cli::parse_descriptor("circle:L=3.14");
    CHECK(c.kind == cli::Descriptor::Kind::circle);
    CHECK(c.circumference == doctest::Approx(3.14));

    auto s = cli::parse_descriptor("sphere:m=3");
    CHECK(s.kind == cli::Descriptor::Kind::sphere);
    CHECK(s.m == 3);
    CHECK(s.radius == 1.0);

    auto sr = cli::parse_descriptor("sphere:m=2,r=0.5");
    CHECK(sr.radius == doctest::Approx(0.5));

    auto f = cli::parse_descriptor("football:q=5");
    CHECK(f.kind == cli::Descriptor::Kind::football);
    CHECK(f.q == 5);
}

TEST_CASE("descriptor parse errors carry position and expectation") {
    CHECK_THROWS_AS(cli::parse_descriptor("torus:r=1"), ParseError);
    CHECK_THROWS_AS(cli::parse_descriptor("circle"), ParseError);
    CHECK_THROWS_AS(cli::parse_descriptor("circle:L=abc"), ParseError);
    CHECK_THROWS_AS(cli::parse_descriptor("sphere:r=1"), ParseError);
    try {
        cli::parse_descriptor("sphere:m=2,q=3");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("position 11") != std::string::npos);
        CHECK(msg.find("unknown key 'q'") != std::string::npos);
    }
}

TEST_CASE("cross-section builders") {
    auto d = cli::parse_descriptor("football:q=2");
    auto s = cli::build_cross_section(d, 7.0);
    CHECK(s.entries.size() == 3);

    auto grown = cli::cross_section_with_count(d, 50);
    CHECK(positive_count(grown) >= 50);
}

TEST_CASE("thread cap honors the environment") {
    setenv("CONE_SPECTRA_THREADS", "3", 1);
    CHECK(cli::thread_cap() == 3);
    setenv("CONE_SPECTRA_THREADS", "0", 1);
    CHECK(cli::thread_cap() >= 1);
    unsetenv("CONE_SPECTRA_THREADS");
    CHECK(cli::thread_cap() >= 1);
}

TEST_CASE("hd command writes the counting report") {
    cli::RunConfig cfg;
    cfg.command = cli::Command::hd;
    cfg.descriptor = "circle:L=" + std::to_string(kTwoPi);
    cfg.d_max = 50;
    cfg.out = tmp_path("hd.csv");
    CHECK(cli::run(cfg) == 0);

    std::istringstream in(slurp(cfg.out));
    std::string line;
    std::getline(in, line);
    CHECK(line == "d,h_d,k_d,S_d,ratio_sum,ratio_hd");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 50);
    CHECK(slurp(cfg.out + ".meta.json").find("tie_tolerance") != std::string::npos);
    fs::remove(cfg.out);
    fs::remove(cfg.out + ".meta.json");
}

TEST_CASE("output is byte-identical across runs") {
    for (cli::Command cmd : {cli::Command::hd, cli::Command::gram_check}) {
        cli::RunConfig cfg;
        cfg.command = cmd;
        cfg.descriptor =
            cmd == cli::Command::hd ? "sphere:m=2" : "football:q=3";
        cfg.d_max = 30;
        cfg.trials = 8;
        cfg.out = tmp_path("det_a");
        REQUIRE(cli::run(cfg) == 0);
        const std::string first = slurp(cfg.out);
        cfg.out = tmp_path("det_b");
        REQUIRE(cli::run(cfg) == 0);
        CHECK(first == slurp(cfg.out));
        fs::remove(tmp_path("det_a"));
        fs::remove(tmp_path("det_b"));
        fs::remove(tmp_path("det_a") + ".meta.json");
        fs::remove(tmp_path("det_b") + ".meta.json");
    }
}

TEST_CASE("weyl command passes for catalog cones") {
    for (const char* desc : {"sphere:m=2", "football:q=2"}) {
        cli::RunConfig cfg;
        cfg.command = cli::Command::weyl;
        cfg.descriptor = desc;
        cfg.out = tmp_path("weyl.json");
        CHECK(cli::run(cfg) == 0);
        const std::string body = slurp(cfg.out);
        CHECK(body.find("\"pass\":true") != std::string::npos);
        fs::remove(cfg.out);
    }
}

TEST_CASE("gram-check reports one JSON line per trial, all holding") {
    cli::RunConfig cfg;
    cfg.command = cli::Command::gram_check;
    cfg.n = 3;
    cfg.dim = 4;
    cfg.trials = 12;
    cfg.out = tmp_path("gram.jsonl");
    CHECK(cli::run(cfg) == 0);
    std::istringstream in(slurp(cfg.out));
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++lines;
        CHECK(line.find("\"holds\":true") != std::string::npos);
    }
    CHECK(lines == 12);
    fs::remove(cfg.out);
}

TEST_CASE("oracle command validates discretizations") {
    cli::RunConfig cfg;
    cfg.command = cli::Command::oracle;
    cfg.descriptor = "circle:L=" + std::to_string(kTwoPi);
    cfg.points = 256;
    cfg.out = tmp_path("oracle_circle.json");
    CHECK(cli::run(cfg) == 0);
    fs::remove(cfg.out);

    cfg.descriptor = "football:q=2";
    cfg.level = 3;
    cfg.rel_tol = 0.05;
    cfg.out = tmp_path("oracle_football.json");
    cfg.mesh_out = tmp_path("oracle_football.mesh");
    CHECK(cli::run(cfg) == 0);
    CHECK(slurp(cfg.mesh_out).substr(0, 2) == "v ");
    fs::remove(cfg.out);
    fs::remove(cfg.mesh_out);
}

TEST_CASE("report command bundles all verdicts") {
    cli::RunConfig cfg;
    cfg.command = cli::Command::report;
    cfg.descriptor = "circle:L=" + std::to_string(kTwoPi);
    cfg.d_max = 1000;
    cfg.trials = 8;
    cfg.out = tmp_path("report.json");
    CHECK(cli::run(cfg) == 0);
    const std::string body = slurp(cfg.out);
    for (const char* key : {"\"hd\"", "\"weyl\"", "\"gram_check\"", "\"pass\":true"})
        CHECK(body.find(key) != std::string::npos);
    fs::remove(cfg.out);
}

TEST_CASE("run maps errors to exit code 2") {
    cli::RunConfig cfg;
    cfg.command = cli::Command::spectrum;
    cfg.descriptor = "torus:r=1";
    CHECK(cli::run(cfg) == 2);

    cfg.descriptor = "circle:L=" + std::to_string(kTwoPi);
    cfg.out = "/nonexistent-dir/spectra.csv";
    CHECK(cli::run(cfg) == 2);
}

TEST_CASE("argv surface") {
    const std::string out = tmp_path("argv.csv");
    CHECK(run_argv({"spectrum", "-x", "circle:L=3.1", "--lambda-max", "10",
                    "--out", out}) == 0);
    CHECK(slurp(out).find("eigenvalue") != std::string::npos);
    fs::remove(out);
    fs::remove(out + ".meta.json");

    CHECK(run_argv({"bogus"}) == 2);
    CHECK(run_argv({"spectrum"}) == 2);  // missing required option
    CHECK(run_argv({"hd", "-c", "notacone"}) == 2);
}
