#ifndef TRISTOCH_CELLS_HPP
#define TRISTOCH_CELLS_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tristoch {

// Cell of an n x n x n array, 1-based on all axes (matching the file formats).
// i indexes x-walls (rows run along j), j indexes y-walls, k indexes layers.
struct Cell {
    int i = 0, j = 0, k = 0;
    auto operator<=>(const Cell&) const = default;
};

// A line is an axis-parallel set of n cells: a column fixes (j,k) and runs
// over i, a row fixes (i,k) and runs over j, a shaft fixes (i,j) and runs
// over k.
enum class Axis : uint8_t { Column = 0, Row = 1, Shaft = 2 };

inline const char* axis_name(Axis a) {
    switch (a) {
        case Axis::Column: return "column";
        case Axis::Row: return "row";
        case Axis::Shaft: return "shaft";
    }
    return "?";
}

struct LineSpec {
    Axis axis = Axis::Column;
    int a = 0, b = 0;  // column: (j,k); row: (i,k); shaft: (i,j)
    auto operator<=>(const LineSpec&) const = default;
};

inline void check_index(int n, int v, const char* what) {
    if (v < 1 || v > n)
        throw std::out_of_range(std::string(what) + " index " + std::to_string(v) +
                                " out of range 1.." + std::to_string(n));
}

inline void check_cell(int n, const Cell& c) {
    check_index(n, c.i, "i");
    check_index(n, c.j, "j");
    check_index(n, c.k, "k");
}

// Cells of a line in increasing free-index order.
inline std::vector<Cell> line_cells(int n, const LineSpec& spec) {
    check_index(n, spec.a, "line");
    check_index(n, spec.b, "line");
    std::vector<Cell> out;
    out.reserve(n);
    for (int t = 1; t <= n; ++t) {
        switch (spec.axis) {
            case Axis::Column: out.push_back({t, spec.a, spec.b}); break;
            case Axis::Row: out.push_back({spec.a, t, spec.b}); break;
            case Axis::Shaft: out.push_back({spec.a, spec.b, t}); break;
        }
    }
    return out;
}

// The three lines through a cell.
inline std::array<LineSpec, 3> lines_through(const Cell& c) {
    return {LineSpec{Axis::Column, c.j, c.k}, LineSpec{Axis::Row, c.i, c.k},
            LineSpec{Axis::Shaft, c.i, c.j}};
}

// Dense line numbering: all columns, then all rows, then all shafts,
// each block in lexicographic (a, b) order. Range [0, 3n^2).
inline int line_index(int n, const LineSpec& spec) {
    int block = static_cast<int>(spec.axis);
    return block * n * n + (spec.a - 1) * n + (spec.b - 1);
}

inline LineSpec line_from_index(int n, int idx) {
    int block = idx / (n * n), rest = idx % (n * n);
    return LineSpec{static_cast<Axis>(block), rest / n + 1, rest % n + 1};
}

inline std::string line_to_string(const LineSpec& spec) {
    return std::string(axis_name(spec.axis)) + "(" + std::to_string(spec.a) + "," +
           std::to_string(spec.b) + ")";
}

// Flat cell key in lexicographic (i, j, k) order; used for canonical storage.
inline uint32_t cell_key(int n, const Cell& c) {
    return (static_cast<uint32_t>(c.i - 1) * n + (c.j - 1)) * n + (c.k - 1);
}

inline Cell cell_from_key(int n, uint32_t key) {
    int k = static_cast<int>(key % n);
    key /= n;
    int j = static_cast<int>(key % n);
    int i = static_cast<int>(key / n);
    return Cell{i + 1, j + 1, k + 1};
}

}  // namespace tristoch

#endif
