#ifndef TRISTOCH_ARRAY_IO_HPP
#define TRISTOCH_ARRAY_IO_HPP

#include <string>

#include "tristoch/cube.hpp"

namespace tristoch {

// Canonical array files. Cells are 1-based, entries sorted lexicographically
// by (i, j, k), values reduced rational strings, omitted cells zero:
//   cube:       {"n": N, "entries": [[i, j, k, "p/q"], ...]}
//   half-array: {"n": N, "half_cells": [[i, j, k], ...]}
// Unknown top-level fields (such as an embedded run config) are ignored on
// parse. Serialization is byte-deterministic.

std::string serialize(const Cube& cube);
std::string serialize(const HalfArray& h);

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Cube parse_cube(const std::string& text);
HalfArray parse_half_array(const std::string& text);

// Distinguishes the two schemas by the presence of "entries" / "half_cells".
enum class ArrayFileKind { Cube, HalfArray };
ArrayFileKind detect_array_kind(const std::string& text);

}  // namespace tristoch

#endif
