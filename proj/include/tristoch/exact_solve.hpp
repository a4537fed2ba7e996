#ifndef TRISTOCH_EXACT_SOLVE_HPP
#define TRISTOCH_EXACT_SOLVE_HPP

#include <utility>
#include <vector>

#include "tristoch/rational.hpp"

namespace tristoch {

// Sparse linear system over the rationals, rows as sorted (column, value)
// term lists. Built for the line-sum systems of this project: many rows,
// few terms per row, exact answers required.
struct SparseSystem {
    struct Row {
        std::vector<std::pair<int, Rational>> terms;
        Rational rhs;
    };
    int ncols = 0;
    std::vector<Row> rows;
};

struct EliminationOutcome {
    int rank = 0;
    bool consistent = true;
    // Filled when consistent and rank == ncols.
    std::vector<Rational> solution;
    // A nonzero kernel vector when rank < ncols.
    std::vector<Rational> kernel;
};

// Sparse Gauss-Jordan elimination with Markowitz-style pivoting (short rows
// first, sparse columns first, then smaller pivot encodings). Exact; no
// floating point.
EliminationOutcome eliminate(SparseSystem system, bool want_solution, bool want_kernel);

// Column rank only (rhs ignored).
int sparse_rank(SparseSystem system);

}  // namespace tristoch

#endif
