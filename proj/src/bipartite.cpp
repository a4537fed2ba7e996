#include "tristoch/bipartite.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace tristoch {

BipartiteGraph::BipartiteGraph(int nx, int ny) : nx_(nx), ny_(ny) {
    if (nx < 0 || ny < 0) throw std::invalid_argument("negative side size");
    adj_.assign(nx, {});
    bits_.assign(nx, std::vector<uint64_t>((ny + 63) / 64, 0));
}

void BipartiteGraph::add_edge(int x, int y) {
    if (x < 0 || x >= nx_ || y < 0 || y >= ny_) throw std::out_of_range("edge out of range");
    if (has_edge(x, y)) return;
    bits_[x][y >> 6] |= 1ULL << (y & 63);
    adj_[x].insert(std::lower_bound(adj_[x].begin(), adj_[x].end(), y), y);
    ++edges_;
}

void BipartiteGraph::remove_edge(int x, int y) {
    if (!has_edge(x, y)) return;
    bits_[x][y >> 6] &= ~(1ULL << (y & 63));
    auto it = std::lower_bound(adj_[x].begin(), adj_[x].end(), y);
    adj_[x].erase(it);
    --edges_;
}

std::vector<int> BipartiteGraph::degrees_y() const {
    std::vector<int> deg(ny_, 0);
    for (int x = 0; x < nx_; ++x)
        for (int y : adj_[x]) ++deg[y];
    return deg;
}

std::optional<int> BipartiteGraph::regular_degree() const {
    if (nx_ == 0 || nx_ != ny_) return std::nullopt;
    int d = degree_x(0);
    for (int x = 0; x < nx_; ++x)
        if (degree_x(x) != d) return std::nullopt;
    for (int dy : degrees_y())
        if (dy != d) return std::nullopt;
    return d;
}

namespace {

// Single augmenting-path DFS used after the Hopcroft–Karp phases settle.
bool augment(const BipartiteGraph& g, int x, const std::vector<int>& order_hint,
             std::vector<int>& match_x, std::vector<int>& match_y, std::vector<int>& visited,
             int stamp) {
    (void)order_hint;
    visited[x] = stamp;
    for (int y : g.neighbors(x))
        if (match_y[y] < 0) {
            match_x[x] = y;
            match_y[y] = x;
            return true;
        }
    for (int y : g.neighbors(x)) {
        int x2 = match_y[y];
        if (x2 >= 0 && visited[x2] != stamp &&
            augment(g, x2, order_hint, match_x, match_y, visited, stamp)) {
            match_x[x] = y;
            match_y[y] = x;
            return true;
        }
    }
    return false;
}

std::vector<int> hall_violator_from(const BipartiteGraph& g, const std::vector<int>& match_x,
                                    const std::vector<int>& match_y) {
    // Alternating BFS from unmatched left vertices; the reachable left set S
    // satisfies N(S) = matched right set with |N(S)| = |S| - deficiency.
    std::vector<char> in_s(g.nx(), 0), seen_y(g.ny(), 0);
    std::deque<int> queue;
    for (int x = 0; x < g.nx(); ++x)
        if (match_x[x] < 0) {
            in_s[x] = 1;
            queue.push_back(x);
        }
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        for (int y : g.neighbors(x)) {
            if (seen_y[y]) continue;
            seen_y[y] = 1;
            int x2 = match_y[y];
            if (x2 >= 0 && !in_s[x2]) {
                in_s[x2] = 1;
                queue.push_back(x2);
            }
        }
    }
    std::vector<int> out;
    for (int x = 0; x < g.nx(); ++x)
        if (in_s[x]) out.push_back(x);
    return out;
}

MatchingResult finish(const BipartiteGraph& g, std::vector<int> match_x,
                      std::vector<int> match_y) {
    MatchingResult result;
    result.match_of_x = std::move(match_x);
    result.perfect = g.nx() == g.ny() &&
                     std::none_of(result.match_of_x.begin(), result.match_of_x.end(),
                                  [](int y) { return y < 0; });
    if (!result.perfect) result.hall_violator = hall_violator_from(g, result.match_of_x, match_y);
    return result;
}

}  // namespace

MatchingResult perfect_matching(const BipartiteGraph& graph, Rng& rng) {
    int nx = graph.nx();
    std::vector<int> match_x(nx, -1), match_y(graph.ny(), -1);
    std::vector<int> order(nx);
    for (int x = 0; x < nx; ++x) order[x] = x;
    rng.shuffle(order);

    // Greedy seeding with randomized neighbor choice, then augmenting paths.
    for (int x : order) {
        const auto& nbrs = graph.neighbors(x);
        if (nbrs.empty()) continue;
        int start = rng.index(nbrs.size());
        for (size_t t = 0; t < nbrs.size(); ++t) {
            int y = nbrs[(start + t) % nbrs.size()];
            if (match_y[y] < 0) {
                match_x[x] = y;
                match_y[y] = x;
                break;
            }
        }
    }
    std::vector<int> visited(nx, -1);
    int stamp = 0;
    for (int x : order)
        if (match_x[x] < 0) augment(graph, x, order, match_x, match_y, visited, ++stamp);
    return finish(graph, std::move(match_x), std::move(match_y));
}

MatchingResult matching_through_edge(const BipartiteGraph& graph, int x, int y, Rng& rng) {
    if (!graph.regular_degree())
        throw std::invalid_argument("matching_through_edge requires a regular bipartite graph");
    if (!graph.has_edge(x, y)) throw std::invalid_argument("edge not present");
    // Match the graph minus {x, y}; in a regular graph the rest has a perfect
    // matching, so the forced edge always extends.
    BipartiteGraph rest(graph.nx(), graph.ny());
    for (int a = 0; a < graph.nx(); ++a) {
        if (a == x) continue;
        for (int b : graph.neighbors(a))
            if (b != y) rest.add_edge(a, b);
    }
    MatchingResult sub = perfect_matching(rest, rng);
    int unmatched = 0;
    for (int a = 0; a < graph.nx(); ++a)
        if (a != x && sub.match_of_x[a] < 0) ++unmatched;
    if (unmatched > 0) return sub;  // hall_violator already filled
    sub.match_of_x[x] = y;
    sub.perfect = true;
    sub.hall_violator.clear();
    return sub;
}

bool moon_moser_holds(const BipartiteGraph& graph) {
    if (graph.nx() != graph.ny()) throw std::invalid_argument("moon_moser needs balanced sides");
    int m = graph.nx();
    if (m == 0) return false;
    std::vector<int> dy = graph.degrees_y();
    for (int x = 0; x < m; ++x)
        if (2 * graph.degree_x(x) < m) return false;
    for (int y = 0; y < m; ++y)
        if (2 * dy[y] < m) return false;
    return true;
}

CellGraphs build_cell_graphs(const CellClasses& classes, int row_lo, int row_hi, int col_lo,
                             int col_hi) {
    int rows = row_hi - row_lo + 1, cols = col_hi - col_lo + 1;
    CellGraphs out{BipartiteGraph(rows, cols), BipartiteGraph(rows, cols)};
    for (int i = row_lo; i <= row_hi; ++i)
        for (int j = col_lo; j <= col_hi; ++j) {
            int c = classes.at(i, j);
            if (c == 0)
                out.zero.add_edge(i - row_lo, j - col_lo);
            else if (c == 1)
                out.half.add_edge(i - row_lo, j - col_lo);
        }
    return out;
}

BipartiteGraph random_regular_bipartite(int m, int d, Rng& rng) {
    if (d < 0 || d > m) throw std::invalid_argument("degree out of range");
    for (int attempt = 0; attempt < 10000; ++attempt) {
        BipartiteGraph g(m, m);
        bool clash = false;
        for (int round = 0; round < d && !clash; ++round) {
            std::vector<int> perm(m);
            for (int t = 0; t < m; ++t) perm[t] = t;
            rng.shuffle(perm);
            for (int x = 0; x < m; ++x)
                if (g.has_edge(x, perm[x])) {
                    clash = true;
                    break;
                }
            if (!clash)
                for (int x = 0; x < m; ++x) g.add_edge(x, perm[x]);
        }
        if (!clash) return g;
    }
    throw std::runtime_error("failed to sample a simple regular bipartite graph");
}

}  // namespace tristoch
