#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "sparsedom/sparse.hpp"

namespace sparsedom {

/**
 * Line-oriented text format for sparse families.
 *
 *   sparsedom-family 1
 *   dim <d>
 *   depth <m>                  (N = 2^m; used for the level column)
 *   eta <num>/<den>
 *   cube <grid> <level|-> <corner...> <side>
 *   span <cube index> <start...> <length>
 *
 * Blank lines and lines starting with '#' are ignored. Spans may appear
 * anywhere after the cube they refer to. level is log2(N/side) for power-of-two
 * sides and "-" otherwise; it is checked on input.
 */
class FamilyParseError : public std::runtime_error {
public:
    FamilyParseError(int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

void write_family(std::ostream& out, const SparseFamily& family, int depth);
std::string format_family(const SparseFamily& family, int depth);

struct ParsedFamily {
    SparseFamily family;
    int depth = 0;
    bool has_certificate = false;  // at least one span line
};

ParsedFamily read_family(std::istream& in);
ParsedFamily parse_family(const std::string& text);

void save_family(const std::string& path, const SparseFamily& family, int depth);
ParsedFamily load_family(const std::string& path);

}  // namespace sparsedom
