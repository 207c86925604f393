#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "henon/io.hpp"
#include "henon/params.hpp"

#include <cmath>
#include <filesystem>

using namespace henon;

TEST_CASE("doubles round-trip in shortest form") {
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(1e300) == "1e+300");
    CHECK(io::format_double(NAN) == "nan");
    CHECK(io::format_double(-INFINITY) == "-inf");
    for (double x : {0.60054610458056, 1.0 / 3.0, -2.5e-17}) CHECK(std::stod(io::format_double(x)) == x);
}

TEST_CASE("CSV writer") {
    io::CsvWriter w({"a", "b"});
    w.add_numeric_row({1.0, 0.5});
    w.add_row({"x,y", "say \"hi\""});
    CHECK(w.rows() == 2);
    CHECK(w.str() == "a,b\n1,0.5\n\"x,y\",\"say \"\"hi\"\"\"\n");
    CHECK_THROWS_AS(w.add_row({"only"}), HenonError);
    CHECK_THROWS_AS(io::CsvWriter({}), HenonError);
    CHECK(io::CsvWriter({"h"}).str() == "h\n");
}

TEST_CASE("columns to CSV") {
    const std::vector<double> x = {1, 2}, y = {3, 4}, z = {5};
    CHECK(io::columns_to_csv({"x", "y"}, {&x, &y}).str() == "x,y\n1,3\n2,4\n");
    CHECK_THROWS_AS(io::columns_to_csv({"x", "z"}, {&x, &z}), HenonError);
}

TEST_CASE("JSON numbers") {
    CHECK(io::number(NAN).is_null());
    CHECK(io::number(2.0) == 2.0);
    const auto arr = io::numbers({1.0, INFINITY});
    CHECK(arr[1].is_null());
    nlohmann::json j = {{"b", 1}, {"a", 2}};
    CHECK(io::dump_json(j) == "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
}

TEST_CASE("SHA-256 known answers") {
    CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("text files round-trip and create parents") {
    const auto dir = std::filesystem::temp_directory_path() / "henon_io_test";
    std::filesystem::remove_all(dir);
    const auto path = dir / "a" / "b.txt";
    io::write_text(path, "hello\n");
    CHECK(io::read_text(path) == "hello\n");
    CHECK_THROWS_AS(io::read_text(dir / "missing"), HenonError);
    std::filesystem::remove_all(dir);
}
