#ifndef TRISTOCH_LINE_GRAPH_HPP
#define TRISTOCH_LINE_GRAPH_HPP

#include <array>
#include <optional>
#include <vector>

#include "tristoch/cube.hpp"

namespace tristoch {

// Co-line graph on the support of an array whose every line has support size
// at most 2: vertices are support cells, adjacent when they share a line.
// Each vertex has at most one partner per axis, so degree <= 3.
class LineGraph {
  public:
    // Throws LineOverflow (carrying the line) if some line has >= 3 support
    // cells.
    struct LineOverflow {
        LineSpec line;
        int count;
    };

    static LineGraph build(int n, const std::vector<uint32_t>& support_keys);
    static LineGraph build(const HalfArray& h) { return build(h.n(), h.support_keys()); }

    int size() const { return static_cast<int>(cells_.size()); }
    const Cell& cell(int v) const { return cells_[v]; }
    const std::vector<Cell>& cells() const { return cells_; }
    // Partner along {column, row, shaft}, -1 when absent.
    const std::array<int, 3>& partners(int v) const { return nbr_[v]; }
    std::optional<LineOverflow> overflow() const { return overflow_; }
    bool valid() const { return !overflow_.has_value(); }

    template <typename Fn>
    void for_each_neighbor(int v, Fn&& fn) const {
        for (int u : nbr_[v])
            if (u >= 0) fn(u);
    }

  private:
    std::vector<Cell> cells_;
    std::vector<std::array<int, 3>> nbr_;
    std::optional<LineOverflow> overflow_;
};

// Partition of the vertex set into maximal connected vertex sets, ordered by
// smallest contained vertex; deterministic BFS order within each.
std::vector<std::vector<int>> connected_components(const LineGraph& graph);

// Proper 2-coloring of one connected component, or an explicit odd closed
// walk witnessing non-bipartiteness. The coloring is deterministic: the
// smallest vertex of the component gets color 0, which pins the unique
// coloring of a connected bipartite graph up to the global swap.
struct TwoColorResult {
    bool bipartite = false;
    std::vector<int8_t> color;   // -1 outside the component
    std::vector<int> odd_walk;   // closed walk (first == last) of odd length
};
TwoColorResult two_color(const LineGraph& graph, const std::vector<int>& component);

// Closed-walk sanity check used when re-verifying certificates.
bool is_odd_closed_walk(const LineGraph& graph, const std::vector<int>& walk);

}  // namespace tristoch

#endif
