#ifndef TRISTOCH_LP_HPP
#define TRISTOCH_LP_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tristoch/certify.hpp"
#include "tristoch/cube.hpp"
#include "tristoch/rng.hpp"

namespace tristoch {

// Equality model of the polytope: 3n^2 line-sum-equals-1 rows over the n^3
// nonnegative cells; every column carries exactly three unit coefficients.
// The row space has rank 3n^2 - 3n + 1, so the polytope has dimension
// (n-1)^3.
struct DeltaModel {
    int n = 0;
    int rows = 0;   // 3n^2
    int cells = 0;  // n^3

    std::array<int, 3> column_lines(int cell) const {
        Cell c = cell_from_key(n, static_cast<uint32_t>(cell));
        auto through = lines_through(c);
        return {line_index(n, through[0]), line_index(n, through[1]), line_index(n, through[2])};
    }
    int expected_rank() const { return 3 * n * n - 3 * n + 1; }
};

DeltaModel build_delta_model(int n);

struct ModelRankReport {
    int n = 0, rows = 0, cols = 0, rank = 0, expected = 0;
    bool matches = false;
};
// Exact rank of the equality matrix by rational elimination; n <= 12.
ModelRankReport delta_model_rank(int n);

struct SampleOptions {
    int max_attempts = 12;     // objective perturbations before giving up
    long iteration_cap = 0;    // 0: derived from the model size
};

struct SampleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SampleRecord {
    int n = 0;
    uint64_t seed = 0;
    Cube vertex;  // exact rational values, certified
    std::string objective_hash;
    int attempts = 1;
    long simplex_iterations = 0;
    double lp_objective = 0;
    size_t support_size = 0;
    int distinct_values = 0;
    // counts[axis][s-1] = number of lines of that axis with support size s
    std::array<std::vector<int>, 3> line_support;
};

// One vertex by the paper's recipe: draw a uniform [0,1] objective from the
// seed, maximize with the floating-point simplex, then re-solve the support
// system exactly and certify. Only certified-exact vertices are returned;
// degenerate or numerically doubtful optima are resampled with a perturbed
// objective.
SampleRecord sample_vertex(int n, uint64_t seed, const SampleOptions& options = {});

// Per-line support-size tallies of one exact array.
std::array<std::vector<int>, 3> line_support_profile(const Cube& cube);

struct HistogramRow {
    int n = 0;
    Axis axis = Axis::Row;
    int support_size = 0;
    uint64_t count = 0;
};
std::vector<HistogramRow> line_support_histogram(const std::vector<SampleRecord>& records,
                                                 Axis axis);

}  // namespace tristoch

#endif
