#include "tristoch/line_graph.hpp"

#include <algorithm>
#include <deque>

namespace tristoch {

LineGraph LineGraph::build(int n, const std::vector<uint32_t>& support_keys) {
    LineGraph g;
    g.cells_.reserve(support_keys.size());
    for (uint32_t key : support_keys) g.cells_.push_back(cell_from_key(n, key));
    g.nbr_.assign(g.cells_.size(), {-1, -1, -1});

    // line id -> first seen vertex (second occupant links the pair; a third
    // occupant is an overflow).
    std::vector<int> first(static_cast<size_t>(3) * n * n, -1);
    std::vector<int8_t> full(static_cast<size_t>(3) * n * n, 0);
    for (int v = 0; v < static_cast<int>(g.cells_.size()); ++v) {
        for (const LineSpec& spec : lines_through(g.cells_[v])) {
            int idx = line_index(n, spec);
            int axis = static_cast<int>(spec.axis);
            if (full[idx]) {
                if (!g.overflow_) g.overflow_ = LineOverflow{spec, 3};
                continue;
            }
            if (first[idx] < 0) {
                first[idx] = v;
            } else {
                int u = first[idx];
                g.nbr_[v][axis] = u;
                g.nbr_[u][axis] = v;
                full[idx] = 1;
            }
        }
    }
    return g;
}

std::vector<std::vector<int>> connected_components(const LineGraph& graph) {
    std::vector<std::vector<int>> components;
    std::vector<char> seen(graph.size(), 0);
    for (int root = 0; root < graph.size(); ++root) {
        if (seen[root]) continue;
        std::vector<int> comp;
        std::deque<int> queue{root};
        seen[root] = 1;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            comp.push_back(v);
            graph.for_each_neighbor(v, [&](int u) {
                if (!seen[u]) {
                    seen[u] = 1;
                    queue.push_back(u);
                }
            });
        }
        components.push_back(std::move(comp));
    }
    return components;
}

TwoColorResult two_color(const LineGraph& graph, const std::vector<int>& component) {
    TwoColorResult result;
    result.color.assign(graph.size(), -1);
    if (component.empty()) {
        result.bipartite = true;
        return result;
    }
    int root = *std::min_element(component.begin(), component.end());
    std::vector<int> parent(graph.size(), -1), depth(graph.size(), -1);
    std::deque<int> queue{root};
    result.color[root] = 0;
    depth[root] = 0;
    int bad_u = -1, bad_v = -1;
    while (!queue.empty() && bad_u < 0) {
        int v = queue.front();
        queue.pop_front();
        for (int u : graph.partners(v)) {
            if (u < 0) continue;
            if (result.color[u] < 0) {
                result.color[u] = static_cast<int8_t>(1 - result.color[v]);
                parent[u] = v;
                depth[u] = depth[v] + 1;
                queue.push_back(u);
            } else if (result.color[u] == result.color[v]) {
                bad_u = v;
                bad_v = u;
                break;
            }
        }
    }
    if (bad_u < 0) {
        result.bipartite = true;
        return result;
    }
    // Conflict edge (bad_u, bad_v) with equal colors: the walk
    // root..bad_u, bad_v..root through BFS parents closes with odd length.
    result.bipartite = false;
    std::vector<int> up;
    for (int v = bad_u; v >= 0; v = parent[v]) up.push_back(v);
    std::reverse(up.begin(), up.end());  // root .. bad_u
    result.odd_walk = std::move(up);
    for (int v = bad_v; v >= 0; v = parent[v]) result.odd_walk.push_back(v);
    // walk = root..bad_u bad_v..root; length depth(u)+depth(v)+1, odd since
    // colors (= depth parity) agree.
    return result;
}

bool is_odd_closed_walk(const LineGraph& graph, const std::vector<int>& walk) {
    if (walk.size() < 4 || walk.front() != walk.back()) return false;
    size_t len = walk.size() - 1;
    if (len % 2 == 0) return false;
    for (size_t t = 0; t + 1 < walk.size(); ++t) {
        int v = walk[t], u = walk[t + 1];
        bool adjacent = false;
        graph.for_each_neighbor(v, [&](int w) { adjacent |= (w == u); });
        if (!adjacent) return false;
    }
    return true;
}

}  // namespace tristoch
