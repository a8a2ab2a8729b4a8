#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "crystalfold/domain.hpp"
#include "crystalfold/io.hpp"
#include "crystalfold/registry.hpp"

using namespace crystalfold;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
    const std::string path =
        (std::filesystem::temp_directory_path() / ("crystalfold_io_" + name)).string();
    std::ofstream out(path);
    out << content;
    out.close();
    return path;
}

// A p2-style group: two unit shifts plus the half turn, with the standard
// half-square fundamental domain, written with exact string tokens.
const char* kHalfTurnFixture = R"({
  "name": "halfturn",
  "dimension": 2,
  "generators": [
    {"matrix": ["1", "0", "0", "1"], "translation": ["1", "0"]},
    {"matrix": [1, 0, 0, 1], "translation": [0, 1]},
    {"matrix": ["-1", "0", "0", "-1"], "translation": ["0", "0"]}
  ],
  "lattice_basis": [["1", "0"], ["0", "1"]],
  "polytope_vertices": [["0", "0"], ["1", "0"], ["1", "1/2"], ["0", "1/2"]]
})";

// Pure shifts on the hexagonal lattice; exercises the sqrt tokens.
const char* kHexShiftFixture = R"({
  "name": "hexshift",
  "dimension": 2,
  "generators": [
    {"matrix": ["1", "0", "0", "1"], "translation": ["1", "0"]},
    {"matrix": ["1", "0", "0", "1"], "translation": ["1/2", "sqrt3/2"]}
  ],
  "lattice_basis": [["1", "0"], ["1/2", "sqrt3/2"]],
  "polytope_vertices": [["0", "0"], ["1", "0"], ["1/2", "sqrt3/2"], ["3/2", "sqrt3/2"]]
})";

}  // namespace

TEST_CASE("group file with fraction tokens loads and validates") {
    const std::string path = temp_file("halfturn.json", kHalfTurnFixture);
    const CrystalGroup group = load_group_file(path);
    CHECK(group.name == "halfturn");
    CHECK(group.dimension == 2);
    CHECK(group.generators.size() == 3);
    CHECK(group.generators[2].matrix(0, 0) == -1.0);
    CHECK(group.lattice(0, 0) == 1.0);
    CHECK(group.domain.vertices().size() == 4);
    CHECK(group.domain.volume() == doctest::Approx(0.5).epsilon(1e-12));
    // The file describes the builtin p2 setup, so the loaded group behaves
    // like it: the half-square domain is exact.
    CHECK(is_exact(group));
}

TEST_CASE("sqrt tokens parse to exact double expressions") {
    const std::string path = temp_file("hexshift.json", kHexShiftFixture);
    const CrystalGroup group = load_group_file(path);
    CHECK(group.lattice(0, 1) == 0.5);
    CHECK(group.lattice(1, 1) == std::sqrt(3.0) / 2.0);
    CHECK(group.generators[1].translation(1) == std::sqrt(3.0) / 2.0);
    CHECK(group.domain.volume() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("token grammar corner cases") {
    // Dressed-up but legal spellings of the same halfturn group.
    std::string text = kHalfTurnFixture;
    text.replace(text.find("\"1/2\""), 5, "\"2/4\"");
    text.replace(text.find("\"1/2\""), 5, "\"+0.5\"");
    const CrystalGroup group = load_group_file(temp_file("tokens.json", text));
    CHECK(group.domain.volume() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("loader rejects malformed files with descriptive errors") {
    CHECK_THROWS_AS(load_group_file("/nonexistent/group.json"), std::runtime_error);
    CHECK_THROWS_AS(load_group_file(temp_file("broken.json", "{not json")), std::runtime_error);
    CHECK_THROWS_AS(load_group_file(temp_file("empty.json", "{}")), std::invalid_argument);

    // Bad numeric tokens.
    for (const char* token : {"\"1/0\"", "\"sqrt-3\"", "\"1/2x\"", "\"\""}) {
        std::string text = kHalfTurnFixture;
        text.replace(text.find("\"1/2\""), 5, token);
        CHECK_THROWS_AS(load_group_file(temp_file("badtoken.json", text)),
                        std::invalid_argument);
    }

    // Matrix size mismatch.
    std::string text = kHalfTurnFixture;
    text.replace(text.find("[\"1\", \"0\", \"0\", \"1\"]"), 20, "[\"1\", \"0\", \"0\"]");
    CHECK_THROWS_AS(load_group_file(temp_file("shortmatrix.json", text)), std::invalid_argument);

    // Non-orthogonal generator matrix.
    text = kHalfTurnFixture;
    text.replace(text.find("[\"1\", \"0\", \"0\", \"1\"]"), 20, "[\"2\", \"0\", \"0\", \"1\"]");
    CHECK_THROWS_AS(load_group_file(temp_file("skewed.json", text)), std::invalid_argument);

    // Degenerate polytope.
    text = kHalfTurnFixture;
    const std::string vertices = "[[\"0\", \"0\"], [\"1\", \"0\"], [\"1\", \"1/2\"], [\"0\", \"1/2\"]]";
    text.replace(text.find(vertices), vertices.size(), "[[\"0\", \"0\"], [\"1\", \"0\"]]");
    CHECK_THROWS_AS(load_group_file(temp_file("flat.json", text)), std::invalid_argument);
}

TEST_CASE("resolve_group prefers builtins, falls back to files, lists names") {
    CHECK(resolve_group("p1").name == "p1");
    CHECK(resolve_group("pmm").name == "p2mm");  // alias resolution
    const std::string path = temp_file("resolve.json", kHalfTurnFixture);
    CHECK(resolve_group(path).name == "halfturn");
    CHECK_THROWS_AS(resolve_group("no_such_group"), std::invalid_argument);
    try {
        resolve_group("no_such_group");
    } catch (const std::invalid_argument& err) {
        const std::string what = err.what();
        CHECK(what.find("p4gm") != std::string::npos);  // error lists valid names
        CHECK(what.find("p6mm") != std::string::npos);
    }
}
