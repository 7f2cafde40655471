#include <doctest.h>

#include <stdexcept>

#include <sstream>

#include "sparsedom/family_io.hpp"

using namespace sparsedom;

namespace {

int error_line(const std::string& text) {
    try {
        parse_family(text);
    } catch (const FamilyParseError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("family files round-trip") {
    SparseFamily fam;
    fam.dim = 2;
    fam.eta = Density{1, 162};
    fam.cubes = {{2, {0, 0}, 8, 1}, {2, {-3, 2}, 9, 0}, {2, {4, 4}, 4, 2}};
    fam.certificate = {{Span{{0, 0}, 3}, Span{{1, 0}, 2}}, {Span{{-3, 2}, 1}}, {}};
    const std::string text = format_family(fam, 4);
    const ParsedFamily back = parse_family(text);
    CHECK(back.depth == 4);
    CHECK(back.has_certificate);
    CHECK(back.family.dim == 2);
    CHECK(back.family.eta.num == 1);
    CHECK(back.family.eta.den == 162);
    REQUIRE(back.family.cubes.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.family.cubes[i] == fam.cubes[i]);
        CHECK(back.family.cubes[i].grid == fam.cubes[i].grid);
        CHECK(certificate_cells(back.family.certificate[i]) == certificate_cells(fam.certificate[i]));
    }
    CHECK(format_family(back.family, 4) == text);
}

TEST_CASE("comments, blank lines and missing certificates") {
    const ParsedFamily pf = parse_family(
        "# two cubes\n"
        "sparsedom-family 1\n"
        "\n"
        "dim 1\n"
        "depth 4\n"
        "eta 1/2\n"
        "cube 1 0 0 16\n"
        "cube 1 1 0 8\n");
    CHECK_FALSE(pf.has_certificate);
    CHECK(pf.family.cubes.size() == 2);
}

TEST_CASE("parse errors name the line") {
    const std::string head = "sparsedom-family 1\ndim 1\ndepth 4\neta 1/2\n";
    CHECK(error_line("not-a-family\n") == 1);
    CHECK(error_line(head + "cube 1 0 0 16\nbogus 3\n") == 6);
    CHECK(error_line(head + "cube 1 2 0 16\n") == 5);       // wrong level
    CHECK(error_line(head + "cube 1 0 0 16 7\n") == 5);     // trailing token
    CHECK(error_line(head + "cube 1 0 0 0\n") == 5);        // empty cube
    CHECK(error_line(head + "span 0 0 4\n") == 5);          // unknown cube
    CHECK(error_line("sparsedom-family 1\ndim 3\n") == 2);
    CHECK(error_line("sparsedom-family 1\ncube 1 - 0 3\n") == 2);
    CHECK_THROWS_WITH_AS(parse_family(head + "cube 1 0 0 16\nspan 0 0 -1\n"), doctest::Contains("line 6"),
                         FamilyParseError);
}
