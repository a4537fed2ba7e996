#ifndef TRISTOCH_BIPARTITE_HPP
#define TRISTOCH_BIPARTITE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "tristoch/cube.hpp"
#include "tristoch/rng.hpp"

namespace tristoch {

// Bipartite graph on X (left, size nx) and Y (right, size ny), kept as sorted
// adjacency lists plus a bitset per left vertex for O(1) edge queries.
class BipartiteGraph {
  public:
    BipartiteGraph() = default;
    BipartiteGraph(int nx, int ny);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    size_t edge_count() const { return edges_; }
    const std::vector<int>& neighbors(int x) const { return adj_[x]; }
    bool has_edge(int x, int y) const { return (bits_[x][y >> 6] >> (y & 63)) & 1; }

    void add_edge(int x, int y);
    void remove_edge(int x, int y);

    int degree_x(int x) const { return static_cast<int>(adj_[x].size()); }
    std::vector<int> degrees_y() const;

    // Degree if the graph is d-regular on both sides, otherwise nullopt.
    std::optional<int> regular_degree() const;

  private:
    int nx_ = 0, ny_ = 0;
    size_t edges_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<std::vector<uint64_t>> bits_;
};

// Result of a perfect-matching search. When no perfect matching exists the
// Hall violator S (left vertices with |N(S)| < |S|) is returned so callers
// can tell infeasible inputs from bugs.
struct MatchingResult {
    bool perfect = false;
    std::vector<int> match_of_x;  // y matched to x, -1 if unmatched
    std::vector<int> hall_violator;

    std::vector<std::pair<int, int>> pairs() const {
        std::vector<std::pair<int, int>> out;
        for (int x = 0; x < static_cast<int>(match_of_x.size()); ++x)
            if (match_of_x[x] >= 0) out.emplace_back(x, match_of_x[x]);
        return out;
    }
};

// Hopcroft–Karp with seeded random visit order; the randomization is what
// makes distinct seeds explore distinct matchings.
MatchingResult perfect_matching(const BipartiteGraph& graph, Rng& rng);

// Perfect matching forced through edge (x, y). Requires a regular graph,
// where every edge extends to a perfect matching.
MatchingResult matching_through_edge(const BipartiteGraph& graph, int x, int y, Rng& rng);

// min degree >= m/2 on a balanced bipartite graph (the sufficient condition
// used to guarantee stage-1 Hamiltonian cycles).
bool moon_moser_holds(const BipartiteGraph& graph);

// Bipartite graphs over a region of a classified shaft view: G on the
// 0-cells and Gbar on the 1/2-cells. Rows/columns are indexed by position
// within the given ranges.
struct CellGraphs {
    BipartiteGraph zero;  // G
    BipartiteGraph half;  // Gbar
};
CellGraphs build_cell_graphs(const CellClasses& classes, int row_lo, int row_hi, int col_lo,
                             int col_hi);

// d pairwise-disjoint random permutations; used by tests and the census
// sweeps. Throws if it fails to stay simple after many attempts (only
// possible for d close to m).
BipartiteGraph random_regular_bipartite(int m, int d, Rng& rng);

}  // namespace tristoch

#endif
