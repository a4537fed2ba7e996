#include "tristoch/hamilton.hpp"

#include <algorithm>
#include <stdexcept>

namespace tristoch {

namespace {

// Unified vertex ids: X = [0, m), Y = [m, 2m). Adjacency as bitset words.
struct Universe {
    int m = 0, total = 0, words = 0;
    std::vector<uint64_t> adj;  // total * words

    explicit Universe(const BipartiteGraph& g) {
        m = g.nx();
        total = 2 * m;
        words = (total + 63) / 64;
        adj.assign(static_cast<size_t>(total) * words, 0);
        for (int x = 0; x < m; ++x)
            for (int y : g.neighbors(x)) {
                set(x, m + y);
                set(m + y, x);
            }
    }
    void set(int a, int b) { adj[static_cast<size_t>(a) * words + (b >> 6)] |= 1ULL << (b & 63); }
    bool has(int a, int b) const {
        return (adj[static_cast<size_t>(a) * words + (b >> 6)] >> (b & 63)) & 1;
    }
    const uint64_t* row(int a) const { return &adj[static_cast<size_t>(a) * words]; }
};

struct PathState {
    const Universe& u;
    std::vector<int> path;
    std::vector<uint64_t> visited;

    explicit PathState(const Universe& universe) : u(universe), visited(universe.words, 0) {}

    void reset(int start) {
        path.assign(1, start);
        std::fill(visited.begin(), visited.end(), 0);
        mark(start);
    }
    void mark(int v) { visited[v >> 6] |= 1ULL << (v & 63); }
    bool is_visited(int v) const { return (visited[v >> 6] >> (v & 63)) & 1; }

    int random_unvisited_neighbor(int v, Rng& rng) const {
        const uint64_t* row = u.row(v);
        int count = 0;
        for (int w = 0; w < u.words; ++w) count += __builtin_popcountll(row[w] & ~visited[w]);
        if (count == 0) return -1;
        int pick = rng.index(count);
        for (int w = 0; w < u.words; ++w) {
            uint64_t bits = row[w] & ~visited[w];
            int c = __builtin_popcountll(bits);
            if (pick >= c) {
                pick -= c;
                continue;
            }
            while (pick--) bits &= bits - 1;
            return w * 64 + __builtin_ctzll(bits);
        }
        return -1;
    }
};

HamiltonianResult pack_cycle(const Universe& u, const std::vector<int>& cycle) {
    // cycle is an alternating closed sequence of 2m unified ids; rotate so it
    // starts at an X vertex.
    HamiltonianResult result;
    result.status = HamiltonianResult::Status::Found;
    int len = static_cast<int>(cycle.size());
    int start = 0;
    while (cycle[start] >= u.m) ++start;
    for (int t = 0; t < len; t += 2) {
        int x = cycle[(start + t) % len];
        int y = cycle[(start + t + 1) % len];
        result.xs.push_back(x);
        result.ys.push_back(y - u.m);
    }
    return result;
}

// Complete backtracking search anchored at vertex 0 (every Hamiltonian cycle
// passes it). Neighbor order is by ascending degree (fail-first);
// determinism is intentional so that NoneExists answers are reproducible.
struct Backtracker {
    const Universe& u;
    uint64_t budget;
    uint64_t nodes = 0;
    bool exhausted = false;
    std::vector<int> path;
    std::vector<uint64_t> visited;
    std::vector<std::vector<int>> order;

    Backtracker(const Universe& universe, uint64_t node_budget)
        : u(universe), budget(node_budget), visited(universe.words, 0) {
        order.resize(u.total);
        std::vector<int> degree(u.total, 0);
        for (int v = 0; v < u.total; ++v) {
            for (int w = 0; w < u.total; ++w)
                if (u.has(v, w)) order[v].push_back(w);
            degree[v] = static_cast<int>(order[v].size());
        }
        for (auto& nbrs : order)
            std::stable_sort(nbrs.begin(), nbrs.end(),
                             [&](int a, int b) { return degree[a] < degree[b]; });
    }

    bool prune() const {
        // Every unvisited vertex still needs two unvisited-or-endpoint
        // neighbors to be absorbed into the cycle.
        for (int v = 0; v < u.total; ++v) {
            if ((visited[v >> 6] >> (v & 63)) & 1) continue;
            int free_nbrs = 0;
            for (int w : order[v]) {
                bool vis = (visited[w >> 6] >> (w & 63)) & 1;
                if (!vis || w == path.back() || w == 0) ++free_nbrs;
                if (free_nbrs >= 2) break;
            }
            if (free_nbrs < 2) return false;
        }
        return true;
    }

    bool dfs(std::vector<int>& out) {
        if (++nodes > budget) {
            exhausted = true;
            return false;
        }
        if (static_cast<int>(path.size()) == u.total) {
            if (u.has(path.back(), 0)) {
                out = path;
                return true;
            }
            return false;
        }
        if (!prune()) return false;
        int v = path.back();
        for (int w : order[v]) {
            if ((visited[w >> 6] >> (w & 63)) & 1) continue;
            visited[w >> 6] |= 1ULL << (w & 63);
            path.push_back(w);
            if (dfs(out)) return true;
            if (exhausted) return false;
            path.pop_back();
            visited[w >> 6] &= ~(1ULL << (w & 63));
        }
        return false;
    }

    HamiltonianResult run() {
        HamiltonianResult result;
        path.assign(1, 0);
        visited[0] |= 1;
        std::vector<int> cycle;
        if (dfs(cycle)) return pack_cycle(u, cycle);
        result.status = exhausted ? HamiltonianResult::Status::BudgetExhausted
                                  : HamiltonianResult::Status::NoneExists;
        return result;
    }
};

}  // namespace

HamiltonianResult hamiltonian_cycle(const BipartiteGraph& graph, Rng& rng,
                                    const HamiltonianOptions& opts) {
    int m = graph.nx();
    HamiltonianResult none;
    none.status = HamiltonianResult::Status::NoneExists;
    if (graph.ny() != m) return none;
    if (m < 2) return none;
    for (int x = 0; x < m; ++x)
        if (graph.degree_x(x) == 0) return none;
    for (int dy : graph.degrees_y())
        if (dy == 0) return none;

    Universe u(graph);
    PathState state(u);

    for (int restart = 0; restart < opts.restarts; ++restart) {
        state.reset(rng.index(m));
        uint64_t steps = 0;
        while (steps++ < opts.rotation_steps) {
            int tail = state.path.back();
            int next = state.random_unvisited_neighbor(tail, rng);
            if (next >= 0) {
                state.mark(next);
                state.path.push_back(next);
                continue;
            }
            if (static_cast<int>(state.path.size()) == u.total) {
                if (u.has(tail, state.path.front())) return pack_cycle(u, state.path);
                // Crossing closure: front ~ path[i+1] and tail ~ path[i]
                // splice the full path into a cycle.
                int len = u.total;
                for (int i = 1; i + 2 < len; ++i) {
                    if (u.has(tail, state.path[i]) && u.has(state.path.front(), state.path[i + 1])) {
                        std::reverse(state.path.begin() + i + 1, state.path.end());
                        return pack_cycle(u, state.path);
                    }
                }
            }
            // Try the other endpoint before rotating.
            if (state.random_unvisited_neighbor(state.path.front(), rng) >= 0) {
                std::reverse(state.path.begin(), state.path.end());
                continue;
            }
            // Posa rotation around a random in-path neighbor of the tail.
            int len = static_cast<int>(state.path.size());
            if (len < 3) break;
            std::vector<int> pivots;
            for (int i = 0; i + 2 < len; ++i)
                if (u.has(tail, state.path[i])) pivots.push_back(i);
            if (pivots.empty()) break;
            int i = pivots[rng.index(pivots.size())];
            std::reverse(state.path.begin() + i + 1, state.path.end());
        }
    }
    return Backtracker(u, opts.backtrack_nodes).run();
}

bool verify_hamiltonian_cycle(const BipartiteGraph& graph, const HamiltonianResult& result) {
    if (result.status != HamiltonianResult::Status::Found) return false;
    int m = graph.nx();
    if (static_cast<int>(result.xs.size()) != m || static_cast<int>(result.ys.size()) != m)
        return false;
    std::vector<char> seen_x(m, 0), seen_y(m, 0);
    for (int t = 0; t < m; ++t) {
        int x = result.xs[t], y = result.ys[t], x2 = result.xs[(t + 1) % m];
        if (x < 0 || x >= m || y < 0 || y >= graph.ny()) return false;
        if (seen_x[x]++ || seen_y[y]++) return false;
        if (!graph.has_edge(x, y) || !graph.has_edge(x2, y)) return false;
    }
    return true;
}

uint64_t count_hamiltonian_cycles(const BipartiteGraph& graph) {
    int m = graph.nx();
    if (graph.ny() != m) return 0;
    if (m < 2) return 0;
    if (2 * m > 24) throw std::invalid_argument("count_hamiltonian_cycles budget is 24 vertices");

    // Common-neighbor counts restricted to a right subset W, combined by
    // inclusion-exclusion; the inner sum is a weighted Hamiltonian-cycle DP
    // over left subsets anchored at x0 = 0.
    std::vector<uint32_t> nbr(m, 0);
    for (int x = 0; x < m; ++x)
        for (int y : graph.neighbors(x)) nbr[x] |= 1u << y;

    int full = (1 << m) - 1;
    std::vector<unsigned __int128> dp(static_cast<size_t>(1 << m) * m);
    __int128 total = 0;
    std::vector<int> w(static_cast<size_t>(m) * m);
    for (int wset = 0; wset <= full; ++wset) {
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) {
                int common = __builtin_popcount(nbr[a] & nbr[b] & static_cast<uint32_t>(wset));
                w[a * m + b] = w[b * m + a] = common;
            }
        std::fill(dp.begin(), dp.end(), 0);
        dp[(1u << 0) * m + 0] = 1;
        for (int mask = 1; mask <= full; ++mask) {
            if (!(mask & 1)) continue;
            for (int v = 0; v < m; ++v) {
                unsigned __int128 paths = dp[static_cast<size_t>(mask) * m + v];
                if (paths == 0) continue;
                int rest = full & ~mask;
                while (rest) {
                    int nxt = __builtin_ctz(rest);
                    rest &= rest - 1;
                    int weight = w[v * m + nxt];
                    if (weight)
                        dp[(static_cast<size_t>(mask) | (1u << nxt)) * m + nxt] +=
                            paths * static_cast<unsigned>(weight);
                }
            }
        }
        unsigned __int128 closed = 0;
        for (int v = 1; v < m; ++v) {
            int weight = w[v * m + 0];
            if (weight) closed += dp[static_cast<size_t>(full) * m + v] * static_cast<unsigned>(weight);
        }
        int sign = ((m - __builtin_popcount(static_cast<uint32_t>(wset))) % 2 == 0) ? 1 : -1;
        total += sign * static_cast<__int128>(closed);
    }
    total /= 2;  // undirected
    if (total < 0) throw std::logic_error("negative hamiltonian count");
    return static_cast<uint64_t>(total);
}

}  // namespace tristoch
