#include "tristoch/construct.hpp"

#include <algorithm>
#include <deque>
#include <utility>

#include "tristoch/bipartite.hpp"

namespace tristoch {

FrobDecomposition frob_decompose(long n) {
    if (n < 12) throw std::invalid_argument("frob_decompose requires N >= 12");
    int fours = static_cast<int>((5 - n % 5) % 5);  // smallest b with 4b = N (mod 5)
    long fives = (n - 4L * fours) / 5;
    return FrobDecomposition{static_cast<int>(fives), fours};
}

MinorPlan minor_plan(int n) {
    int h = n / 2;
    if (h < 12)
        throw std::invalid_argument("minor_plan: floor(n/2) = " + std::to_string(h) +
                                    " is below the supported threshold 12");
    MinorPlan plan;
    plan.n = n;
    bool odd = n % 2 != 0;
    if (h % 5 == 0 && n >= 40) {
        // Divisibility override: five 4s for P, four 4s for Q, 5s elsewhere.
        plan.k = h / 5 + 1;
        plan.p_sizes.assign(plan.k, 5);
        std::fill_n(plan.p_sizes.begin(), 5, 4);
        plan.q_sizes.assign(plan.k, 5);
        std::fill_n(plan.q_sizes.begin(), 4, 4);
        if (!odd) {
            // The literal Q rule sums to floor(n/2)+1 and cannot tile an even
            // n's south-east diagonal; the even-n rule (equal size lists)
            // applies instead. Reported, not silent.
            plan.q_sizes = plan.p_sizes;
            plan.note =
                "override Q sizes (4,4,4,4,5,...) sum to " + std::to_string(5 * plan.k - 4) +
                " != " + std::to_string(n - h) + " for even n; using Q sizes = P sizes";
        }
    } else {
        FrobDecomposition f = frob_decompose(h);
        plan.k = f.fives + f.fours;
        plan.p_sizes.assign(plan.k, 5);
        std::fill_n(plan.p_sizes.begin(), f.fours, 4);
        plan.q_sizes = plan.p_sizes;
        if (odd) plan.q_sizes[0] += 1;
    }
    long p_sum = 0, q_sum = 0;
    for (int c : plan.p_sizes) p_sum += c;
    for (int c : plan.q_sizes) q_sum += c;
    if (p_sum != h || q_sum != n - h)
        throw std::logic_error("minor plan sums inconsistent at n=" + std::to_string(n));
    plan.p_offsets.resize(plan.k);
    plan.q_offsets.resize(plan.k);
    int at = 1;
    for (int t = 0; t < plan.k; ++t) {
        plan.p_offsets[t] = at;
        at += plan.p_sizes[t];
    }
    at = h + 1;
    for (int t = 0; t < plan.k; ++t) {
        plan.q_offsets[t] = at;
        at += plan.q_sizes[t];
    }
    return plan;
}

std::vector<std::pair<int, int>> standard_cycle(int t) {
    if (t < 3) throw std::invalid_argument("standard cycle needs t >= 3");
    std::vector<std::pair<int, int>> cells;
    cells.reserve(2 * t);
    for (int a = 1; a <= t; ++a) cells.emplace_back(a, a);
    for (int b = 1; b < t; ++b) cells.emplace_back(b, b + 1);
    cells.emplace_back(t, 1);
    return cells;
}

VertexBuilder::VertexBuilder(int n, uint64_t seed, ConstructOptions options)
    : n_(n), seed_(seed), options_(options), plan_(minor_plan(n)), rng_(Rng::derive_seed(seed, 0x7472u)) {
    d2_.assign(static_cast<size_t>(n) * n, 0);
    layers_.assign(n, {});
    shaft_layers_.assign(static_cast<size_t>(n) * n, {-1, -1});
    color_.assign(static_cast<size_t>(n) * n, -1);
    log_.n = n;
    log_.seed = seed;
    log_.plan = plan_;
    if (!plan_.note.empty())
        log_.events.push_back({0, 0, "plan-note", {}, {}});
    int k = plan_.k;
    if (n - 2 * k - 2 < 1)
        fail(0, true, "n too small for the stage layout (needs n - 2k - 2 >= 1)");
}

void VertexBuilder::fail(int stage, bool infeasible, const std::string& reason) const {
    throw ConstructError(stage, infeasible,
                         "stage " + std::to_string(stage) + ": " + reason);
}

void VertexBuilder::place(int layer, int i, int j) {
    int8_t& d = d2_[(i - 1) * n_ + (j - 1)];
    if (d >= 2) fail(0, false, "shaft overflow at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    auto& slots = shaft_layers_[(i - 1) * n_ + (j - 1)];
    slots[d] = static_cast<int16_t>(layer);
    ++d;
    layers_[layer - 1].emplace_back(i, j);
}

void VertexBuilder::remove(int layer, int i, int j) {
    auto& cells = layers_[layer - 1];
    auto it = std::find(cells.begin(), cells.end(), std::make_pair(i, j));
    if (it == cells.end()) fail(0, false, "removing a cell that is not present");
    cells.erase(it);
    int8_t& d = d2_[(i - 1) * n_ + (j - 1)];
    auto& slots = shaft_layers_[(i - 1) * n_ + (j - 1)];
    if (d == 2 && slots[1] == layer)
        slots[1] = -1;
    else if (slots[0] == layer)
        slots[0] = slots[1] == -1 ? -1 : std::exchange(slots[1], static_cast<int16_t>(-1));
    else
        fail(0, false, "shaft bookkeeping mismatch");
    --d;
}

int VertexBuilder::block_of(const Quadrant& q, int global) const {
    for (int t = 0; t < plan_.k; ++t) {
        int off = (*q.offsets)[t], size = (*q.sizes)[t];
        if (global >= off && global < off + size) return t;
    }
    return -1;
}

void VertexBuilder::assert_single_layer_cycle(int layer, int lo, int hi, int stage) {
    std::vector<std::array<int, 2>> row_cells(hi - lo + 1, {-1, -1}), col_cells(hi - lo + 1, {-1, -1});
    std::vector<std::pair<int, int>> cells;
    for (const auto& [i, j] : layers_[layer - 1])
        if (i >= lo && i <= hi && j >= lo && j <= hi) cells.emplace_back(i, j);
    for (int t = 0; t < static_cast<int>(cells.size()); ++t) {
        auto [i, j] = cells[t];
        auto& rc = row_cells[i - lo];
        auto& cc = col_cells[j - lo];
        if (rc[0] < 0)
            rc[0] = t;
        else if (rc[1] < 0)
            rc[1] = t;
        else
            fail(stage, false, "layer row holds more than two cells");
        if (cc[0] < 0)
            cc[0] = t;
        else if (cc[1] < 0)
            cc[1] = t;
        else
            fail(stage, false, "layer column holds more than two cells");
    }
    size_t expect = 2 * static_cast<size_t>(hi - lo + 1);
    if (cells.size() != expect) fail(stage, false, "layer cell count off");
    for (int t = 0; t < hi - lo + 1; ++t)
        if (row_cells[t][1] < 0 || col_cells[t][1] < 0)
            fail(stage, false, "layer row/column not fully covered");
    // Walk the co-line cycle: alternate row partner / column partner.
    size_t visited = 0;
    int cur = 0;
    bool via_row = true;
    std::vector<char> seen(cells.size(), 0);
    do {
        if (seen[cur]) fail(stage, false, "layer cycle revisits a cell");
        seen[cur] = 1;
        ++visited;
        auto [i, j] = cells[cur];
        if (via_row) {
            auto& rc = row_cells[i - lo];
            cur = rc[0] == cur ? rc[1] : rc[0];
        } else {
            auto& cc = col_cells[j - lo];
            cur = cc[0] == cur ? cc[1] : cc[0];
        }
        via_row = !via_row;
    } while (cur != 0 || !via_row);
    if (visited != cells.size()) fail(stage, false, "layer splits into several cycles");
}

void VertexBuilder::check_layer_complete(int layer) {
    std::vector<int> row_count(n_, 0), col_count(n_, 0);
    for (const auto& [i, j] : layers_[layer - 1]) {
        ++row_count[i - 1];
        ++col_count[j - 1];
    }
    for (int t = 0; t < n_; ++t)
        if (row_count[t] != 2 || col_count[t] != 2)
            fail(0, false, "layer " + std::to_string(layer) + " row/column counts are not 2");
    completed_ = std::max(completed_, layer);
}

void VertexBuilder::build_quadrant_layer(const Quadrant& q, int layer) {
    int c = (*q.sizes)[layer - 1];
    int off = (*q.offsets)[layer - 1];

    // Step 1: standard cycle in the reserved minor.
    std::vector<std::pair<int, int>> std_cells;
    for (auto [a, b] : standard_cycle(c)) std_cells.emplace_back(off + a - 1, off + b - 1);
    for (auto [i, j] : std_cells) {
        if (shaft_sum_doubled(i, j) != 0) fail(1, false, "reserved minor cell already occupied");
        place(layer, i, j);
    }
    log_.events.push_back({1, layer, std::string("standard-cycle-") + q.name, std_cells,
                           {off, c}});

    // Step 2: Hamiltonian cycle on the zero-cells of the sub-array that
    // drops the minor's walls; cells of reserved minors are not eligible.
    std::vector<int> srows;
    for (int r = q.lo; r <= q.hi; ++r)
        if (block_of(q, r) != layer - 1) srows.push_back(r);
    int m = static_cast<int>(srows.size());
    BipartiteGraph g(m, m);
    for (int xi = 0; xi < m; ++xi)
        for (int yi = 0; yi < m; ++yi)
            if (shaft_sum_doubled(srows[xi], srows[yi]) == 0 &&
                block_of(q, srows[xi]) != block_of(q, srows[yi]))
                g.add_edge(xi, yi);
    bool mm = moon_moser_holds(g);
    HamiltonianResult ham = hamiltonian_cycle(g, rng_, options_.hamiltonian);
    if (ham.status != HamiltonianResult::Status::Found) {
        const char* what = ham.status == HamiltonianResult::Status::NoneExists
                               ? "no Hamiltonian cycle exists"
                               : "Hamiltonian search exhausted its budget";
        fail(1, true,
             std::string(what) + " in layer " + std::to_string(layer) + " of " + q.name +
                 (mm ? " (Moon-Moser condition held; please report)"
                     : " (below the Moon-Moser guarantee)"));
    }
    std::vector<std::pair<int, int>> ham_cells;
    for (auto [x, y] : ham.cells()) ham_cells.emplace_back(srows[x], srows[y]);
    for (auto [i, j] : ham_cells) place(layer, i, j);
    log_.events.push_back({1, layer, std::string("hamiltonian-cycle-") + q.name, ham_cells,
                           {mm ? 1 : 0}});

    // Step 3: merge switch. Scan the minor's off-diagonal cells in row-major
    // order against the Hamiltonian cycle's cells in cycle order; take the
    // first pair whose cross cells are both zero.
    std::vector<std::pair<int, int>> offdiag;
    for (int b = 1; b < c; ++b) offdiag.emplace_back(off + b - 1, off + b);
    offdiag.emplace_back(off + c - 1, off);
    int x1 = -1, y1 = -1, x2 = -1, y2 = -1;
    for (auto [a1, b1] : offdiag) {
        for (auto [a2, b2] : ham_cells)
            if (shaft_sum_doubled(a1, b2) == 0 && shaft_sum_doubled(a2, b1) == 0) {
                x1 = a1;
                y1 = b1;
                x2 = a2;
                y2 = b2;
                break;
            }
        if (x1 >= 0) break;
    }
    if (x1 < 0) fail(1, false, "no merge-switch pair in layer " + std::to_string(layer));
    remove(layer, x1, y1);
    remove(layer, x2, y2);
    place(layer, x1, y2);
    place(layer, x2, y1);
    log_.events.push_back({1, layer, std::string("merge-switch-") + q.name, {}, {x1, y1, x2, y2}});

    assert_single_layer_cycle(layer, q.lo, q.hi, 1);
    for (int i = q.lo; i <= q.hi; ++i)
        for (int j = q.lo; j <= q.hi; ++j)
            if (shaft_sum_doubled(i, j) > 1) fail(1, false, "stage-1 shaft exceeded 1/2");
}

void VertexBuilder::build_stage1_layer(int layer) {
    int h = n_ / 2;
    Quadrant p{1, h, &plan_.p_sizes, &plan_.p_offsets, "P"};
    Quadrant q{h + 1, n_, &plan_.q_sizes, &plan_.q_offsets, "Q"};
    build_quadrant_layer(p, layer);
    build_quadrant_layer(q, layer);
    check_layer_complete(layer);
}

void VertexBuilder::run_stage1() {
    for (int layer = 1; layer <= plan_.k; ++layer) build_stage1_layer(layer);
    // Stage-1 exit invariant: both quadrants' shafts in {0, 1/2} with the
    // full main diagonal at 1/2; NE and SW untouched.
    for (int i = 1; i <= n_; ++i)
        if (shaft_sum_doubled(i, i) != 1) fail(1, false, "diagonal shaft not 1/2 after stage 1");
    int h = n_ / 2;
    for (int i = 1; i <= n_; ++i)
        for (int j = 1; j <= n_; ++j) {
            bool in_p = i <= h && j <= h, in_q = i > h && j > h;
            int d = shaft_sum_doubled(i, j);
            if (in_p || in_q) {
                if (d > 1) fail(1, false, "stage-1 shaft above 1/2");
            } else if (d != 0) {
                fail(1, false, "NE/SW touched during stage 1");
            }
        }
}

void VertexBuilder::run_stage2() {
    int k = plan_.k, h = n_ / 2, layer = k + 1;
    std::vector<std::pair<int, int>> cells;
    for (int i = 1; i <= n_; ++i) cells.emplace_back(i, i);
    long qr = 0, qc = 0;
    if (n_ % 2 == 0) {
        for (int i = 1; i <= h; ++i) cells.emplace_back(i, i + h);
        for (int i = 1; i <= h - 1; ++i) cells.emplace_back(h + i, i + 1);
        cells.emplace_back(n_, 1);
    } else {
        // One completion cell must come from the south-east quadrant; take
        // the lexicographically smallest off-diagonal zero-cell there.
        for (int r = h + 1; r <= n_ && qr == 0; ++r)
            for (int c2 = h + 1; c2 <= n_; ++c2)
                if (r != c2 && shaft_sum_doubled(r, c2) == 0) {
                    qr = r;
                    qc = c2;
                    break;
                }
        if (qr == 0) fail(2, true, "no available zero-cell in Q for the odd-n glue");
        std::vector<int> w;
        for (int u = h + 1; u <= n_; ++u)
            if (u != qr && u != qc) w.push_back(u);
        // Cycle 1 -> w_1 -> 2 -> w_2 -> ... -> h -> qr -> qc -> 1.
        for (int t = 1; t <= h - 1; ++t) {
            cells.emplace_back(t, w[t - 1]);
            cells.emplace_back(w[t - 1], t + 1);
        }
        cells.emplace_back(h, static_cast<int>(qr));
        cells.emplace_back(static_cast<int>(qr), static_cast<int>(qc));
        cells.emplace_back(static_cast<int>(qc), 1);
    }
    for (auto [i, j] : cells) {
        int expect = i == j ? 1 : 0;
        if (shaft_sum_doubled(i, j) != expect) fail(2, false, "glue cell not available");
        place(layer, i, j);
    }
    check_layer_complete(layer);
    assert_single_layer_cycle(layer, 1, n_, 2);
    log_.events.push_back({2, layer, "glue-cycle", cells, {qr, qc}});

    for (int i = 1; i <= n_; ++i)
        if (shaft_sum_doubled(i, i) != 2) fail(2, false, "diagonal shaft not 1 after gluing");
    for (int i = 1; i <= n_; ++i) {
        int ones = 0, halves = 0, zeros = 0;
        for (int j = 1; j <= n_; ++j) {
            int d = shaft_sum_doubled(i, j);
            ones += d == 2;
            halves += d == 1;
            zeros += d == 0;
        }
        if (ones != 1 || halves != 2 * k || zeros != n_ - 2 * k - 1)
            fail(2, false, "D row class counts off after stage 2");
    }
    LineGraph u = graph_through_layer(layer);
    if (connected_components(u).size() != 1) fail(2, false, "glue layer left the graph disconnected");
}

LineGraph VertexBuilder::graph_through_layer(int top) const {
    std::vector<uint32_t> keys;
    for (int layer = 1; layer <= top; ++layer)
        for (auto [i, j] : layers_[layer - 1]) keys.push_back(cell_key(n_, Cell{i, j, layer}));
    std::sort(keys.begin(), keys.end());
    return LineGraph::build(n_, keys);
}

void VertexBuilder::compute_coloring() {
    int k = plan_.k;
    LineGraph u = graph_through_layer(k + 1);
    auto components = connected_components(u);
    if (components.size() != 1) fail(3, false, "graph below layer k+2 is disconnected");
    TwoColorResult coloring = two_color(u, components[0]);
    if (!coloring.bipartite) fail(3, false, "graph below layer k+2 is unexpectedly non-bipartite");
    for (int v = 0; v < u.size(); ++v) {
        const Cell& cell = u.cell(v);
        if (shaft_sum_doubled(cell.i, cell.j) == 1)
            color_[(cell.i - 1) * n_ + (cell.j - 1)] = coloring.color[v];
    }
    for (int i = 1; i <= n_; ++i) {
        int row_red = 0, row_blue = 0, col_red = 0, col_blue = 0;
        for (int j = 1; j <= n_; ++j) {
            if (shaft_sum_doubled(i, j) == 1)
                (half_cell_color(i, j) == 0 ? row_red : row_blue)++;
            if (shaft_sum_doubled(j, i) == 1)
                (half_cell_color(j, i) == 0 ? col_red : col_blue)++;
        }
        if (row_red != k || row_blue != k || col_red != k || col_blue != k)
            fail(3, false, "half-cell coloring is not k/k balanced");
    }
    coloring_done_ = true;
}

void VertexBuilder::run_stage3() {
    int k = plan_.k, layer = k + 2;
    if (!coloring_done_) compute_coloring();

    BipartiteGraph half_graph(n_, n_), zero_graph(n_, n_);
    for (int i = 1; i <= n_; ++i)
        for (int j = 1; j <= n_; ++j) {
            int d = shaft_sum_doubled(i, j);
            if (d == 1) half_graph.add_edge(i - 1, j - 1);
            if (d == 0) zero_graph.add_edge(i - 1, j - 1);
        }
    if (half_graph.regular_degree() != 2 * k) fail(3, false, "half-cell graph is not 2k-regular");
    if (zero_graph.regular_degree() != n_ - 2 * k - 1)
        fail(3, false, "zero-cell graph is not (n-2k-1)-regular");

    // Bi-chromatic perfect matching on the half-cells: random matchings up to
    // the retry budget, then deterministic forced-edge fallbacks.
    std::vector<int> pbar;
    long retries = -1;
    auto colors_mixed = [&](const std::vector<int>& match) {
        int red = 0, blue = 0;
        for (int x = 0; x < n_; ++x) (half_cell_color(x + 1, match[x] + 1) == 0 ? red : blue)++;
        return std::make_pair(red, blue);
    };
    for (int attempt = 0; attempt < options_.matching_retries; ++attempt) {
        MatchingResult m = perfect_matching(half_graph, rng_);
        if (!m.perfect) fail(3, false, "half-cell matching failed on a regular graph");
        auto [red, blue] = colors_mixed(m.match_of_x);
        if (red > 0 && blue > 0) {
            pbar = m.match_of_x;
            retries = attempt;
            break;
        }
    }
    if (pbar.empty()) {
        for (int want_color = 0; want_color < 2 && pbar.empty(); ++want_color) {
            int fx = -1, fy = -1;
            for (int i = 1; i <= n_ && fx < 0; ++i)
                for (int j = 1; j <= n_; ++j)
                    if (shaft_sum_doubled(i, j) == 1 && half_cell_color(i, j) == want_color) {
                        fx = i - 1;
                        fy = j - 1;
                        break;
                    }
            if (fx < 0) continue;
            MatchingResult m = matching_through_edge(half_graph, fx, fy, rng_);
            if (!m.perfect) fail(3, false, "forced half-cell matching failed");
            auto [red, blue] = colors_mixed(m.match_of_x);
            if (red > 0 && blue > 0) {
                pbar = m.match_of_x;
                retries = options_.matching_retries + want_color;
            }
        }
        if (pbar.empty()) fail(3, false, "no bi-chromatic half-cell matching found");
    }

    auto [red, blue] = colors_mixed(pbar);
    int majority = red >= blue ? 0 : 1, minority = 1 - majority;
    std::vector<int> pbar_of_col(n_, -1);
    for (int x = 0; x < n_; ++x) pbar_of_col[pbar[x]] = x;

    // Crossing cell: row of a minority cell, column whose half-cell matching
    // partner carries the majority color.
    int cx = -1, cy = -1;
    for (int x = 0; x < n_ && cx < 0; ++x) {
        if (half_cell_color(x + 1, pbar[x] + 1) != minority) continue;
        for (int y = 0; y < n_; ++y) {
            if (shaft_sum_doubled(x + 1, y + 1) != 0) continue;
            int other = pbar_of_col[y];
            if (half_cell_color(other + 1, y + 1) == majority) {
                cx = x;
                cy = y;
                break;
            }
        }
    }
    if (cx < 0) fail(3, false, "no crossing zero-cell with oppositely colored neighbors");
    MatchingResult pm = matching_through_edge(zero_graph, cx, cy, rng_);
    if (!pm.perfect) fail(3, false, "zero-cell matching failed on a regular graph");

    std::vector<std::pair<int, int>> half_cells, zero_cells;
    for (int x = 0; x < n_; ++x) {
        half_cells.emplace_back(x + 1, pbar[x] + 1);
        zero_cells.emplace_back(x + 1, pm.match_of_x[x] + 1);
    }
    for (auto [i, j] : half_cells) place(layer, i, j);
    for (auto [i, j] : zero_cells) place(layer, i, j);
    check_layer_complete(layer);
    log_.events.push_back({3, layer, "half-matching", half_cells, {retries}});
    log_.events.push_back({3, layer, "zero-matching", zero_cells, {cx + 1, cy + 1}});

    // Odd closed walk through the crossing cell: down the two flanking
    // shafts and across the bipartite graph below.
    LineGraph u = graph_through_layer(layer);
    auto components = connected_components(u);
    if (components.size() != 1) fail(3, false, "graph through layer k+2 is disconnected");
    {
        auto key_of = [&](int i, int j, int l) { return cell_key(n_, Cell{i, j, l}); };
        std::vector<uint32_t> keys;
        keys.reserve(u.size());
        for (int v = 0; v < u.size(); ++v)
            keys.push_back(cell_key(n_, u.cell(v)));
        auto index_of = [&](uint32_t key) {
            auto it = std::lower_bound(keys.begin(), keys.end(), key);
            if (it == keys.end() || *it != key) fail(3, false, "witness cell missing from graph");
            return static_cast<int>(it - keys.begin());
        };
        int ypbar = pbar[cx];                 // minority cell column in row cx
        int xpbar = pbar_of_col[cy];          // majority cell row in column cy
        int w1_layer = shaft_layers_[cx * n_ + ypbar][0];
        int w2_layer = shaft_layers_[xpbar * n_ + cy][0];
        int v_cross = index_of(key_of(cx + 1, cy + 1, layer));
        int v_row = index_of(key_of(cx + 1, ypbar + 1, layer));
        int v_col = index_of(key_of(xpbar + 1, cy + 1, layer));
        int w1 = index_of(key_of(cx + 1, ypbar + 1, w1_layer));
        int w2 = index_of(key_of(xpbar + 1, cy + 1, w2_layer));
        // BFS path w1 -> w2 in the graph below layer k+2.
        std::vector<int> parent(u.size(), -2);
        std::deque<int> queue{w1};
        parent[w1] = -1;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            if (v == w2) break;
            u.for_each_neighbor(v, [&](int t) {
                if (parent[t] == -2 && u.cell(t).k <= plan_.k + 1) {
                    parent[t] = v;
                    queue.push_back(t);
                }
            });
        }
        if (parent[w2] == -2) fail(3, false, "no path between witness shafts");
        std::vector<int> path;
        for (int v = w2; v >= 0; v = parent[v]) path.push_back(v);
        std::reverse(path.begin(), path.end());  // w1 .. w2
        std::vector<int> walk{v_cross, v_row};
        walk.insert(walk.end(), path.begin(), path.end());
        walk.push_back(v_col);
        walk.push_back(v_cross);
        if (!is_odd_closed_walk(u, walk)) fail(3, false, "crossing walk is not an odd closed walk");
        odd_walk_.clear();
        std::vector<long> flat;
        for (int v : walk) {
            odd_walk_.push_back(u.cell(v));
            flat.push_back(u.cell(v).i);
            flat.push_back(u.cell(v).j);
            flat.push_back(u.cell(v).k);
        }
        log_.events.push_back({3, layer, "odd-walk", {}, flat});
    }
    TwoColorResult check = two_color(u, components[0]);
    if (check.bipartite) fail(3, false, "graph through layer k+2 is still bipartite");

    for (int i = 1; i <= n_; ++i) {
        int ones = 0, halves = 0, zeros = 0;
        for (int j = 1; j <= n_; ++j) {
            int d = shaft_sum_doubled(i, j);
            ones += d == 2;
            halves += d == 1;
            zeros += d == 0;
        }
        if (ones != 2 || halves != 2 * k || zeros != n_ - 2 * k - 2)
            fail(3, false, "D row class counts off after stage 3");
    }
}

void VertexBuilder::run_stage4() {
    int k = plan_.k;
    for (int layer = k + 3; layer <= n_ - k; ++layer) {
        BipartiteGraph half_graph(n_, n_), zero_graph(n_, n_);
        for (int i = 1; i <= n_; ++i)
            for (int j = 1; j <= n_; ++j) {
                int d = shaft_sum_doubled(i, j);
                if (d == 1) half_graph.add_edge(i - 1, j - 1);
                if (d == 0) zero_graph.add_edge(i - 1, j - 1);
            }
        int zero_degree = n_ - k - layer + 1;  // = n - 2k - 2 - (layer - k - 3)
        if (zero_graph.regular_degree() != zero_degree)
            fail(4, false, "zero-cell graph lost regularity at layer " + std::to_string(layer));
        if (half_graph.regular_degree() != 2 * k)
            fail(4, false, "half-cell graph lost regularity at layer " + std::to_string(layer));
        MatchingResult mz = perfect_matching(zero_graph, rng_);
        if (!mz.perfect) fail(4, false, "zero-cell matching failed at layer " + std::to_string(layer));
        MatchingResult mh = perfect_matching(half_graph, rng_);
        if (!mh.perfect) fail(4, false, "half-cell matching failed at layer " + std::to_string(layer));
        std::vector<std::pair<int, int>> zero_cells, half_cells;
        for (int x = 0; x < n_; ++x) {
            zero_cells.emplace_back(x + 1, mz.match_of_x[x] + 1);
            half_cells.emplace_back(x + 1, mh.match_of_x[x] + 1);
        }
        for (auto [i, j] : zero_cells) place(layer, i, j);
        for (auto [i, j] : half_cells) place(layer, i, j);
        check_layer_complete(layer);
        log_.events.push_back({4, layer, "zero-matching", zero_cells, {}});
        log_.events.push_back({4, layer, "half-matching", half_cells, {}});
    }
    for (int i = 1; i <= n_; ++i)
        for (int j = 1; j <= n_; ++j)
            if (shaft_sum_doubled(i, j) == 0) fail(4, false, "zero-cells remain after stage 4");
}

void VertexBuilder::run_stage5() {
    int k = plan_.k;
    for (int layer = n_ - k + 1; layer <= n_; ++layer) {
        BipartiteGraph half_graph(n_, n_);
        for (int i = 1; i <= n_; ++i)
            for (int j = 1; j <= n_; ++j)
                if (shaft_sum_doubled(i, j) == 1) half_graph.add_edge(i - 1, j - 1);
        int expect = 2 * (n_ - layer + 1);
        if (half_graph.regular_degree() != expect)
            fail(5, false, "half-cell graph lost regularity at layer " + std::to_string(layer));
        MatchingResult m1 = perfect_matching(half_graph, rng_);
        if (!m1.perfect) fail(5, false, "first matching failed at layer " + std::to_string(layer));
        for (int x = 0; x < n_; ++x) half_graph.remove_edge(x, m1.match_of_x[x]);
        MatchingResult m2 = perfect_matching(half_graph, rng_);
        if (!m2.perfect) fail(5, false, "second matching failed at layer " + std::to_string(layer));
        std::vector<std::pair<int, int>> first, second;
        for (int x = 0; x < n_; ++x) {
            first.emplace_back(x + 1, m1.match_of_x[x] + 1);
            second.emplace_back(x + 1, m2.match_of_x[x] + 1);
        }
        for (auto [i, j] : first) place(layer, i, j);
        for (auto [i, j] : second) place(layer, i, j);
        check_layer_complete(layer);
        log_.events.push_back({5, layer, "half-matching-1", first, {}});
        log_.events.push_back({5, layer, "half-matching-2", second, {}});
    }
}

HalfArray VertexBuilder::finish() {
    for (int i = 1; i <= n_; ++i)
        for (int j = 1; j <= n_; ++j)
            if (shaft_sum_doubled(i, j) != 2)
                fail(5, false, "final shaft sums are not all 1");
    std::vector<uint32_t> keys;
    for (int layer = 1; layer <= n_; ++layer)
        for (auto [i, j] : layers_[layer - 1]) keys.push_back(cell_key(n_, Cell{i, j, layer}));
    HalfArray h(n_, std::move(keys));
    ValidationReport report = validate_half_array(h);
    if (!report.ok) fail(5, false, "membership validation failed: " + report.violation->to_string());
    return h;
}

ConstructResult construct_vertex(int n, uint64_t seed, const ConstructOptions& options) {
    VertexBuilder builder = [&] {
        try {
            return VertexBuilder(n, seed, options);
        } catch (const std::invalid_argument& e) {
            throw ConstructError(0, true, e.what());
        }
    }();
    builder.run_stage1();
    builder.run_stage2();
    builder.compute_coloring();
    builder.run_stage3();
    builder.run_stage4();
    builder.run_stage5();
    ConstructResult result{builder.finish(), builder.take_log(), {}};
    result.certificate = certify_half_vertex(result.vertex);
    if (!result.certificate.is_vertex)
        throw ConstructError(5, false, "finished array failed the graph certificate");
    return result;
}

HalfArray replay(const StageLog& log) {
    int n = log.n;
    std::vector<int8_t> d2(static_cast<size_t>(n) * n, 0);
    std::vector<std::vector<std::pair<int, int>>> layers(n);
    auto place = [&](int layer, int i, int j) {
        int8_t& d = d2[(i - 1) * n + (j - 1)];
        if (d >= 2) throw std::runtime_error("replay: shaft overflow");
        ++d;
        layers[layer - 1].emplace_back(i, j);
    };
    for (const StageLogEvent& event : log.events) {
        if (event.choice == "plan-note" || event.choice == "odd-walk") continue;
        if (event.choice.rfind("merge-switch", 0) == 0) {
            if (event.numbers.size() != 4) throw std::runtime_error("replay: bad merge switch");
            int x1 = static_cast<int>(event.numbers[0]), y1 = static_cast<int>(event.numbers[1]);
            int x2 = static_cast<int>(event.numbers[2]), y2 = static_cast<int>(event.numbers[3]);
            auto& cells = layers[event.layer - 1];
            for (auto target : {std::make_pair(x1, y1), std::make_pair(x2, y2)}) {
                auto it = std::find(cells.begin(), cells.end(), target);
                if (it == cells.end()) throw std::runtime_error("replay: switch cell missing");
                cells.erase(it);
                --d2[(target.first - 1) * n + (target.second - 1)];
            }
            place(event.layer, x1, y2);
            place(event.layer, x2, y1);
            continue;
        }
        for (auto [i, j] : event.cells) place(event.layer, i, j);
    }
    std::vector<uint32_t> keys;
    for (int layer = 1; layer <= n; ++layer)
        for (auto [i, j] : layers[layer - 1]) keys.push_back(cell_key(n, Cell{i, j, layer}));
    HalfArray h(n, std::move(keys));
    ValidationReport report = validate_half_array(h);
    if (!report.ok)
        throw std::runtime_error("replay: invalid membership: " + report.violation->to_string());
    return h;
}

}  // namespace tristoch
