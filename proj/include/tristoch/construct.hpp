#ifndef TRISTOCH_CONSTRUCT_HPP
#define TRISTOCH_CONSTRUCT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tristoch/certify.hpp"
#include "tristoch/cube.hpp"
#include "tristoch/hamilton.hpp"
#include "tristoch/rng.hpp"

namespace tristoch {

// 5a + 4b = N with 0 <= b <= 4; the smallest valid b is taken, so the
// result is deterministic. Defined for N >= 12.
struct FrobDecomposition {
    int fives = 0;  // a
    int fours = 0;  // b
};
FrobDecomposition frob_decompose(long n);

// Diagonal minor layout for the two stage-1 quadrants. Sizes are 4 or 5
// (first Q minor may be 6 for odd n away from the divisibility override);
// the minors tile each quadrant's main diagonal, one per stage-1 layer.
struct MinorPlan {
    int n = 0;
    int k = 0;                    // number of stage-1 layers
    std::vector<int> p_sizes;     // ascending, sum = floor(n/2)
    std::vector<int> q_sizes;     // sum = ceil(n/2)
    std::vector<int> p_offsets;   // global 1-based diagonal start per minor
    std::vector<int> q_offsets;
    std::string note;             // set when the literal override rule was inconsistent
};
MinorPlan minor_plan(int n);

// Support of the t x t half-valued standard cycle: full diagonal,
// superdiagonal, and the corner (t, 1); a single co-line cycle of length 2t.
std::vector<std::pair<int, int>> standard_cycle(int t);

struct StageLogEvent {
    int stage = 0;
    int layer = 0;
    std::string choice;
    std::vector<std::pair<int, int>> cells;  // layer cells touched by the choice
    std::vector<long> numbers;               // choice scalars (coordinates, retries, ...)
};

struct StageLog {
    int n = 0;
    uint64_t seed = 0;
    MinorPlan plan;
    std::vector<StageLogEvent> events;
};

struct ConstructOptions {
    HamiltonianOptions hamiltonian;
    int matching_retries = 64;  // stage-3 bichromatic sampling budget
};

struct ConstructError : std::runtime_error {
    int stage;
    bool infeasible;  // true: honest below-threshold failure; false: internal
    ConstructError(int stage_, bool infeasible_, const std::string& reason)
        : std::runtime_error(reason), stage(stage_), infeasible(infeasible_) {}
};

// Layer-by-layer builder; stages can be driven individually (tests do) or
// through construct_vertex. All randomness comes from the seed; a build is
// bit-reproducible.
class VertexBuilder {
  public:
    VertexBuilder(int n, uint64_t seed, ConstructOptions options = {});

    const MinorPlan& plan() const { return plan_; }
    int k() const { return plan_.k; }
    int n() const { return n_; }

    void build_stage1_layer(int layer);  // both quadrants of one layer
    void run_stage1();
    void run_stage2();
    void compute_coloring();
    void run_stage3();
    void run_stage4();
    void run_stage5();

    HalfArray finish();  // validates membership; call after stage 5
    const StageLog& log() const { return log_; }
    StageLog take_log() { return std::move(log_); }

    // Inspection (tests and the census ledger).
    int shaft_sum_doubled(int i, int j) const { return d2_[(i - 1) * n_ + (j - 1)]; }
    const std::vector<std::pair<int, int>>& layer_cells(int layer) const {
        return layers_[layer - 1];
    }
    int half_cell_color(int i, int j) const { return color_[(i - 1) * n_ + (j - 1)]; }
    const std::vector<Cell>& odd_walk() const { return odd_walk_; }
    int completed_layers() const { return completed_; }

  private:
    struct Quadrant {
        int lo = 0, hi = 0;                // global row/col range
        const std::vector<int>* sizes = nullptr;
        const std::vector<int>* offsets = nullptr;
        const char* name = "";
    };

    void place(int layer, int i, int j);
    void remove(int layer, int i, int j);
    void build_quadrant_layer(const Quadrant& q, int layer);
    void check_layer_complete(int layer);
    void assert_single_layer_cycle(int layer, int lo, int hi, int stage);
    LineGraph graph_through_layer(int top) const;
    int block_of(const Quadrant& q, int global) const;
    [[noreturn]] void fail(int stage, bool infeasible, const std::string& reason) const;

    int n_ = 0;
    uint64_t seed_ = 0;
    ConstructOptions options_;
    MinorPlan plan_;
    Rng rng_;
    std::vector<int8_t> d2_;                          // doubled shaft sums
    std::vector<std::vector<std::pair<int, int>>> layers_;
    std::vector<std::array<int16_t, 2>> shaft_layers_;  // up to two layers per shaft
    std::vector<int8_t> color_;                       // D half-cell coloring, -1 unset
    std::vector<Cell> odd_walk_;
    StageLog log_;
    int completed_ = 0;  // layers completed
    bool coloring_done_ = false;
};

struct ConstructResult {
    HalfArray vertex;
    StageLog log;
    VertexCertificate certificate;
};

// The whole pipeline: five stages plus the graph certificate. Guaranteed for
// n >= 114 (the Moon-Moser threshold); below that it runs best-effort and
// reports infeasibility honestly via ConstructError.
ConstructResult construct_vertex(int n, uint64_t seed, const ConstructOptions& options = {});

// Rebuild the array a log describes by re-applying its recorded choices;
// validates every step. replay(log) equals the original build.
HalfArray replay(const StageLog& log);

}  // namespace tristoch

#endif
