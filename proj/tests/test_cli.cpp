#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "henon/cli.hpp"
#include "henon/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>

using namespace henon;
using namespace henon::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("henon_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

int run_bin(const std::string& args, const std::string& env = "") {
    const char* bin = std::getenv("HENONLAB_BIN");
    REQUIRE(bin != nullptr);
    const std::string cmd = env + " '" + std::string(bin) + "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> split(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

} // namespace

TEST_CASE("ranges") {
    CHECK(parse_range("3") == std::vector<double>{3});
    CHECK(parse_range("5:8") == std::vector<double>{5, 6, 7, 8});
    CHECK(parse_range("3.5:5:0.5") == std::vector<double>{3.5, 4, 4.5, 5});
    CHECK(parse_range("1,2.5,4") == std::vector<double>{1, 2.5, 4});
    CHECK(parse_range("8:5").empty());
    CHECK_THROWS_AS(parse_range("1:2:0"), UsageError);
    CHECK_THROWS_AS(parse_range("1:2:3:4"), UsageError);
    CHECK_THROWS_AS(parse_range("abc"), UsageError);
}

TEST_CASE("defaults and flags") {
    const RunConfig d = parse_config({"sequences", "--out", "x"});
    CHECK(d.subcommand == Subcommand::sequences);
    CHECK(d.n == 8);
    CHECK(d.p == 5.0);
    CHECK(d.K == 200);
    CHECK(d.tolerances == default_tolerances());
    const RunConfig c = parse_config(split("verify --n 10 --p 4 --a 0.5 --tol-margin 1e-8 --out y"));
    CHECK(c.subcommand == Subcommand::verify);
    CHECK(c.n == 10);
    CHECK(c.a == 0.5);
    CHECK(c.tolerances.at("margin") == 1e-8);
    CHECK(c.output_dir == "y");
}

TEST_CASE("usage errors") {
    CHECK_THROWS_AS(parse_config({}), UsageError);
    CHECK_THROWS_AS(parse_config(split("solve --bogus 1")), UsageError);
    CHECK_THROWS_AS(parse_config(split("solve --p 5x")), UsageError);
    CHECK_THROWS_AS(parse_config(split("solve --n 8.5")), UsageError);
    CHECK_THROWS_AS(parse_config(split("solve --mode loose")), UsageError);
    CHECK_THROWS_AS(parse_config(split("solve --tol-margin -1")), UsageError);
    CHECK_THROWS_AS(parse_config(split("sweep --target sweep")), UsageError);
}

TEST_CASE("sweep grid and cap") {
    const RunConfig s = parse_config(split("sweep --target verify --n 8,6,8 --p 4:6 --a 0"));
    REQUIRE(s.sweep);
    CHECK(s.sweep->n == std::vector<int>{6, 8});
    CHECK(s.sweep->size() == 6);
    CHECK(s.sweep->target == Subcommand::verify);
    CHECK_THROWS_AS(parse_config(split("sweep --n 5:12 --p 3.5:8:0.5 --sweep-cap 50")), UsageError);
    CHECK_THROWS_AS(parse_config(split("sweep --n 5:12 --p 0:100:0.1")), UsageError);
}

TEST_CASE("config file, overridden by flags") {
    const fs::path dir = scratch("config");
    io::write_text(dir / "run.ini", "p=6\nk=50\ntol-margin=1e-9\n");
    const RunConfig c = parse_config({"sequences", "--config", (dir / "run.ini").string(), "--p", "4"});
    CHECK(c.p == 4.0);
    CHECK(c.K == 50);
    CHECK(c.tolerances.at("margin") == 1e-9);
    io::write_text(dir / "bad.ini", "unknown-key=1\n");
    CHECK_THROWS_AS(parse_config({"sequences", "--config", (dir / "bad.ini").string()}), UsageError);
    fs::remove_all(dir);
}

TEST_CASE("output directory from the environment") {
    setenv(kOutputEnv, "/tmp/from-env", 1);
    CHECK(parse_config({"sequences"}).output_dir == "/tmp/from-env");
    CHECK(parse_config({"sequences", "--out", "flag"}).output_dir == "flag");
    unsetenv(kOutputEnv);
    CHECK(parse_config({"sequences"}).output_dir == "henonlab-out");
}

TEST_CASE("sequences run writes artifacts and a manifest") {
    const fs::path dir = scratch("seq");
    RunConfig c = parse_config({"sequences", "--out", dir.string()});
    CHECK(run(c) == 0);
    for (const char* f : {"sequences.csv", "growth.csv", "sequences.json", "manifest.json"}) CHECK(fs::exists(dir / f));
    const auto manifest = nlohmann::json::parse(io::read_text(dir / "manifest.json"));
    CHECK(manifest["verdict"] == "pass");
    CHECK(manifest["exit_status"] == 0);
    CHECK(manifest["artifacts"]["sequences.csv"] == io::sha256_hex(io::read_text(dir / "sequences.csv")));
    fs::remove_all(dir);
}

TEST_CASE("reruns are byte identical") {
    const fs::path dir = scratch("det");
    RunConfig c = parse_config({"solve", "--out", dir.string()});
    REQUIRE(run(c) == 0);
    const std::string first = io::read_text(dir / "manifest.json");
    REQUIRE(run(c) == 0);
    CHECK(io::read_text(dir / "manifest.json") == first);
    fs::remove_all(dir);
}

TEST_CASE("module errors map to status 3") {
    const fs::path dir = scratch("err");
    RunConfig c = parse_config({"sequences", "--n", "3", "--out", dir.string()});
    CHECK(run(c) == 3);
    CHECK(fs::exists(dir / "error.json"));
    const auto manifest = nlohmann::json::parse(io::read_text(dir / "manifest.json"));
    CHECK(manifest["verdict"] == "error");
    fs::remove_all(dir);
}

TEST_CASE("empty sweep gives a header-only table") {
    const fs::path dir = scratch("empty");
    RunConfig c = parse_config({"sweep", "--n", "8:5", "--out", dir.string()});
    CHECK(run(c) == 0);
    const std::string csv = io::read_text(dir / "sweep.csv");
    CHECK(csv.find('\n') == csv.size() - 1);
    CHECK(csv.rfind("n,p,a,verdict", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("sweep records errors inline and orders rows") {
    const fs::path dir = scratch("sweep");
    RunConfig c = parse_config(split("sweep --target sequences --n 8 --p 6,1.5,5 --workers 3 --out " + dir.string()));
    CHECK(run(c) == 1);
    const std::string csv = io::read_text(dir / "sweep.csv");
    const auto p15 = csv.find("\n8,1.5,0,error,");
    const auto p5 = csv.find("\n8,5,0,pass,");
    const auto p6 = csv.find("\n8,6,0,pass,");
    CHECK(p15 != std::string::npos);
    CHECK(p5 != std::string::npos);
    CHECK(p6 != std::string::npos);
    CHECK(p15 < p5);
    CHECK(p5 < p6);
    CHECK(fs::exists(dir / "points" / "n8_p5_a0" / "sequences.json"));
    fs::remove_all(dir);
}

TEST_CASE("binary exit codes") {
    const fs::path dir = scratch("bin");
    CHECK(run_bin("sequences --out '" + dir.string() + "'") == 0);
    CHECK(run_bin("sequences --bogus") == 2);
    CHECK(run_bin("") == 2);
    CHECK(run_bin("sequences --p 1.2 --out '" + dir.string() + "'") == 3);
    CHECK(run_bin("sequences", "HENONLAB_OUT='" + (dir / "env").string() + "'") == 0);
    CHECK(fs::exists(dir / "env" / "manifest.json"));
    fs::remove_all(dir);
}
