#ifndef TRISTOCH_HAMILTON_HPP
#define TRISTOCH_HAMILTON_HPP

#include <cstdint>
#include <vector>

#include "tristoch/bipartite.hpp"
#include "tristoch/rng.hpp"

namespace tristoch {

struct HamiltonianOptions {
    int restarts = 64;                  // rotation-extension restarts
    uint64_t rotation_steps = 200000;   // rotation budget per restart
    uint64_t backtrack_nodes = 50'000'000;  // exact-search node budget
};

// Hamiltonian cycle as the alternating vertex sequence
// x_0 y_0 x_1 y_1 ... x_{m-1} y_{m-1}; its 2m cells are (x_t, y_t) and
// (x_{t+1 mod m}, y_t).
struct HamiltonianResult {
    enum class Status { Found, NoneExists, BudgetExhausted };
    Status status = Status::BudgetExhausted;
    std::vector<int> xs, ys;  // both length m when found

    std::vector<std::pair<int, int>> cells() const {
        std::vector<std::pair<int, int>> out;
        int m = static_cast<int>(xs.size());
        for (int t = 0; t < m; ++t) {
            out.emplace_back(xs[t], ys[t]);
            out.emplace_back(xs[(t + 1) % m], ys[t]);
        }
        return out;
    }
};

// Randomized rotation-extension (Posa rotations plus the crossing closure)
// with a complete backtracking fallback. Under the Moon-Moser degree
// condition a cycle exists and the combined search finds one; NoneExists is
// only reported after the exhaustive fallback ran to completion.
HamiltonianResult hamiltonian_cycle(const BipartiteGraph& graph, Rng& rng,
                                    const HamiltonianOptions& opts = {});

bool verify_hamiltonian_cycle(const BipartiteGraph& graph, const HamiltonianResult& result);

// Exact count of undirected Hamiltonian cycles; inclusion-exclusion over the
// right side with a subset DP over the left side, so the budget is
// nx + ny <= 24. Unbalanced graphs have no Hamiltonian cycle.
uint64_t count_hamiltonian_cycles(const BipartiteGraph& graph);

}  // namespace tristoch

#endif
