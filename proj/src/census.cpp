#include "tristoch/census.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "tristoch/exact_solve.hpp"

namespace tristoch {

ZeroOneMatrix ZeroOneMatrix::identity(int m) {
    ZeroOneMatrix out{m, std::vector<uint32_t>(m, 0)};
    for (int i = 0; i < m; ++i) out.rows[i] = 1u << i;
    return out;
}

ZeroOneMatrix ZeroOneMatrix::ones(int m) {
    return ZeroOneMatrix{m, std::vector<uint32_t>(m, (m == 32 ? ~0u : (1u << m) - 1))};
}

ZeroOneMatrix ZeroOneMatrix::from_graph(const BipartiteGraph& g) {
    if (g.nx() != g.ny()) throw std::invalid_argument("bi-adjacency needs balanced sides");
    ZeroOneMatrix out{g.nx(), std::vector<uint32_t>(g.nx(), 0)};
    for (int x = 0; x < g.nx(); ++x)
        for (int y : g.neighbors(x)) out.rows[x] |= 1u << y;
    return out;
}

std::optional<int> ZeroOneMatrix::regular_degree() const {
    if (m == 0) return std::nullopt;
    int d = __builtin_popcount(rows[0]);
    std::vector<int> col(m, 0);
    for (int i = 0; i < m; ++i) {
        if (__builtin_popcount(rows[i]) != d) return std::nullopt;
        for (int j = 0; j < m; ++j) col[j] += (rows[i] >> j) & 1;
    }
    for (int j = 0; j < m; ++j)
        if (col[j] != d) return std::nullopt;
    return d;
}

std::string PermanentValue::to_string() const {
    if (value == 0) return "0";
    std::string out;
    unsigned __int128 v = value;
    while (v > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

PermanentValue permanent(const ZeroOneMatrix& matrix) {
    int m = matrix.m;
    if (m > 24) throw std::invalid_argument("permanent budget is m <= 24");
    if (m == 0) return PermanentValue{1};
    // Ryser with Gray-code column-set updates:
    //   per(A) = (-1)^m sum_S (-1)^{|S|} prod_i rowsum_i(S).
    std::vector<int32_t> rowsum(m, 0);
    __int128 total = 0;
    uint32_t gray = 0;
    uint32_t limit = 1u << m;
    int bits = 0;
    for (uint32_t iter = 1; iter < limit; ++iter) {
        uint32_t next_gray = iter ^ (iter >> 1);
        uint32_t changed = gray ^ next_gray;
        int j = __builtin_ctz(changed);
        bool added = next_gray & changed;
        for (int i = 0; i < m; ++i)
            rowsum[i] += ((matrix.rows[i] >> j) & 1) ? (added ? 1 : -1) : 0;
        bits += added ? 1 : -1;
        gray = next_gray;
        __int128 product = 1;
        for (int i = 0; i < m; ++i) {
            product *= rowsum[i];
            if (product == 0) break;
        }
        total += (bits % 2 == 0) ? -product : product;  // (-1)^{|S|} folded with (-1)^m below
    }
    if (m % 2 == 0) total = -total;
    if (total < 0) throw std::logic_error("negative permanent");
    return PermanentValue{static_cast<unsigned __int128>(total)};
}

namespace {

// All n x n 0/1 matrices with every row and column sum 2, encoded as one
// row-bitmask vector each.
void two_regular_matrices(int n, std::vector<std::vector<uint32_t>>& out) {
    std::vector<uint32_t> rows(n, 0);
    std::vector<int> col_count(n, 0);
    std::vector<uint32_t> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pairs.push_back((1u << a) | (1u << b));
    auto rec = [&](auto&& self, int row) -> void {
        if (row == n) {
            out.push_back(rows);
            return;
        }
        for (uint32_t mask : pairs) {
            bool ok = true;
            for (int j = 0; j < n && ok; ++j)
                if ((mask >> j) & 1) ok = col_count[j] < 2;
            if (!ok) continue;
            // Feasibility: columns still needing 2 must fit the rows left.
            rows[row] = mask;
            for (int j = 0; j < n; ++j) col_count[j] += (mask >> j) & 1;
            int rows_left = n - row - 1;
            bool feasible = true;
            int demand = 0;
            for (int j = 0; j < n; ++j) {
                int need = 2 - col_count[j];
                if (need > rows_left) feasible = false;
                demand += need;
            }
            if (demand != 2 * rows_left) feasible = false;
            if (feasible) self(self, row + 1);
            for (int j = 0; j < n; ++j) col_count[j] -= (mask >> j) & 1;
            rows[row] = 0;
        }
    };
    rec(rec, 0);
}

}  // namespace

HEnumStats enumerate_H(int n, const std::function<void(const HalfArray&, bool is_vertex)>& visit) {
    if (n < 1 || n > 4) throw std::invalid_argument("enumerate_H budget is n <= 4");
    HEnumStats stats;
    stats.n = n;
    if (n == 1) return stats;  // a 1-cell line cannot hold two half entries

    std::vector<std::vector<uint32_t>> layer_choices;
    two_regular_matrices(n, layer_choices);

    // Layer-by-layer DFS under per-shaft capacity 2; the last layer is
    // forced and only checked.
    std::vector<const std::vector<uint32_t>*> chosen(n, nullptr);
    std::vector<int> shaft_count(n * n, 0);
    auto emit = [&] {
        std::vector<uint32_t> keys;
        keys.reserve(2 * n * n);
        for (int layer = 0; layer < n; ++layer)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (((*chosen[layer])[i] >> j) & 1)
                        keys.push_back(cell_key(n, Cell{i + 1, j + 1, layer + 1}));
        std::sort(keys.begin(), keys.end());
        HalfArray h(n, std::move(keys));
        VertexCertificate graph_cert = certify_half_vertex(h);
        VertexCertificate rank_cert = certify_support_rank(h.to_cube());
        if (graph_cert.is_vertex != rank_cert.is_vertex) stats.certifiers_agree = false;
        ++stats.total;
        if (graph_cert.is_vertex) ++stats.vertices;
        if (visit) visit(h, graph_cert.is_vertex);
    };
    auto rec = [&](auto&& self, int layer) -> void {
        if (layer == n - 1) {
            // Remaining demand must itself be a two-regular 0/1 matrix.
            std::vector<uint32_t> rest(n, 0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    int need = 2 - shaft_count[i * n + j];
                    if (need < 0 || need > 1) {
                        if (need != 0) return;
                    }
                    if (need == 1) rest[i] |= 1u << j;
                }
            for (int i = 0; i < n; ++i)
                if (__builtin_popcount(rest[i]) != 2) return;
            std::vector<int> col(n, 0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) col[j] += (rest[i] >> j) & 1;
            for (int j = 0; j < n; ++j)
                if (col[j] != 2) return;
            chosen[layer] = &rest;
            emit();
            chosen[layer] = nullptr;
            return;
        }
        for (const auto& candidate : layer_choices) {
            bool ok = true;
            for (int i = 0; i < n && ok; ++i)
                for (int j = 0; j < n && ok; ++j)
                    if ((candidate[i] >> j) & 1) ok = shaft_count[i * n + j] < 2;
            if (!ok) continue;
            chosen[layer] = &candidate;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) shaft_count[i * n + j] += (candidate[i] >> j) & 1;
            self(self, layer + 1);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) shaft_count[i * n + j] -= (candidate[i] >> j) & 1;
            chosen[layer] = nullptr;
        }
    };
    rec(rec, 0);
    return stats;
}

namespace {

// Exact incremental column rank by fraction-free (Bareiss) reduction. The
// incidence columns have three unit entries, so by Hadamard every minor is
// bounded by 3^{s/2} ~ 3.4e4 at s <= 19; all intermediates fit int64 with
// room to spare.
struct IncrementalRank {
    int rows;
    std::vector<std::vector<int64_t>> pivots;  // reduced (scaled) columns
    std::vector<int> pivot_rows;
    std::vector<int64_t> leads;  // pivot leading values; d_t chain

    explicit IncrementalRank(int rows_) : rows(rows_) {}

    // Tries to add a column; returns true (and keeps it) when independent.
    bool push(std::vector<int64_t> col) {
        int64_t prev = 1;
        for (size_t t = 0; t < pivots.size(); ++t) {
            int64_t a = col[pivot_rows[t]];
            int64_t lead = leads[t];
            const auto& p = pivots[t];
            for (int r = 0; r < rows; ++r) {
                int64_t v = lead * col[r] - a * p[r];
                col[r] = v / prev;  // exact by the fraction-free schedule
            }
            prev = lead;
        }
        int lead_row = -1;
        for (int r = 0; r < rows; ++r)
            if (col[r] != 0) {
                lead_row = r;
                break;
            }
        if (lead_row < 0) return false;
        pivot_rows.push_back(lead_row);
        leads.push_back(col[lead_row]);
        pivots.push_back(std::move(col));
        return true;
    }
    void pop() {
        pivots.pop_back();
        pivot_rows.pop_back();
        leads.pop_back();
    }
};

}  // namespace

VertexEnumeration enumerate_vertices_exhaustive(int n) {
    if (n < 1 || n > 3)
        throw std::invalid_argument("enumerate_vertices_exhaustive budget is n <= 3");
    VertexEnumeration out;
    out.n = n;
    if (n == 1) {
        Cube::Builder b(1);
        b.set(Cell{1, 1, 1}, Rational(1));
        out.vertices.push_back(std::move(b).build());
        return out;
    }

    const int cells = n * n * n, lines = 3 * n * n;
    const size_t upper = 3 * static_cast<size_t>(n - 1) * (n - 1) + 3 * (n - 1) + 1;
    std::vector<std::array<int, 3>> cell_lines(cells);
    for (int c = 0; c < cells; ++c) {
        Cell cell = cell_from_key(n, static_cast<uint32_t>(c));
        auto through = lines_through(cell);
        for (int t = 0; t < 3; ++t) cell_lines[c][t] = line_index(n, through[t]);
    }
    std::vector<int> line_remaining(lines, n), line_chosen(lines, 0);
    std::vector<int> chosen;
    IncrementalRank basis(lines);

    auto solve_leaf = [&] {
        ++out.supports_solved;
        SparseSystem sys;
        sys.ncols = static_cast<int>(chosen.size());
        sys.rows.assign(lines, {});
        for (auto& row : sys.rows) row.rhs = 1;
        for (int col = 0; col < sys.ncols; ++col)
            for (int line : cell_lines[chosen[col]])
                sys.rows[line].terms.emplace_back(col, Rational(1));
        for (auto& row : sys.rows)
            std::sort(row.terms.begin(), row.terms.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
        EliminationOutcome sol = eliminate(std::move(sys), true, false);
        if (!sol.consistent || sol.rank != static_cast<int>(chosen.size())) return;
        for (const Rational& v : sol.solution)
            if (v <= 0) return;  // zero entries belong to a smaller support
        Cube::Builder b(n);
        for (int col = 0; col < static_cast<int>(chosen.size()); ++col)
            b.set(cell_from_key(n, static_cast<uint32_t>(chosen[col])), sol.solution[col]);
        Cube cube = std::move(b).build();
        if (!validate_tristochastic(cube).ok) return;
        out.vertices.push_back(std::move(cube));
    };

    auto rec = [&](auto&& self, int cell) -> void {
        if (cell == cells) {
            for (int l = 0; l < lines; ++l)
                if (line_chosen[l] == 0) return;
            if (chosen.size() >= static_cast<size_t>(n) * n) solve_leaf();
            return;
        }
        // Window prune: each new cell covers at most 3 uncovered lines.
        int uncovered = 0;
        for (int l = 0; l < lines; ++l) uncovered += line_chosen[l] == 0;
        if (chosen.size() + (uncovered + 2) / 3 > upper) return;

        // Include branch, only while the support columns stay independent.
        // A dependent column can never sit inside a vertex support (the
        // dependency survives in every superset), so that subtree is dead.
        if (chosen.size() < upper) {
            std::vector<int64_t> col(lines, 0);
            for (int line : cell_lines[cell]) col[line] = 1;
            if (basis.push(std::move(col))) {
                chosen.push_back(cell);
                for (int line : cell_lines[cell]) {
                    --line_remaining[line];
                    ++line_chosen[line];
                }
                self(self, cell + 1);
                for (int line : cell_lines[cell]) {
                    ++line_remaining[line];
                    --line_chosen[line];
                }
                chosen.pop_back();
                basis.pop();
            }
        }
        // Exclude branch, unless that kills a line for good.
        bool line_dies = false;
        for (int line : cell_lines[cell])
            if (line_chosen[line] == 0 && line_remaining[line] == 1) line_dies = true;
        for (int line : cell_lines[cell]) --line_remaining[line];
        if (!line_dies) self(self, cell + 1);
        for (int line : cell_lines[cell]) ++line_remaining[line];
    };
    rec(rec, 0);
    std::sort(out.vertices.begin(), out.vertices.end(),
              [](const Cube& a, const Cube& b) { return a.entries() < b.entries(); });
    return out;
}

uint64_t latin_square_count(int n) {
    if (n < 1 || n > 5) throw std::invalid_argument("latin_square_count budget is n <= 5");
    std::vector<uint32_t> row_used(n, 0), col_used(n, 0);
    uint64_t count = 0;
    auto rec = [&](auto&& self, int cell) -> void {
        if (cell == n * n) {
            ++count;
            return;
        }
        int i = cell / n, j = cell % n;
        uint32_t free = ~(row_used[i] | col_used[j]) & ((1u << n) - 1);
        while (free) {
            int s = __builtin_ctz(free);
            free &= free - 1;
            row_used[i] |= 1u << s;
            col_used[j] |= 1u << s;
            self(self, cell + 1);
            row_used[i] &= ~(1u << s);
            col_used[j] &= ~(1u << s);
        }
    };
    rec(rec, 0);
    return count;
}

std::vector<std::vector<int>> random_latin_square(int n, Rng& rng) {
    std::vector<int> row_perm(n), col_perm(n), sym_perm(n);
    for (int t = 0; t < n; ++t) row_perm[t] = col_perm[t] = sym_perm[t] = t;
    rng.shuffle(row_perm);
    rng.shuffle(col_perm);
    rng.shuffle(sym_perm);
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            table[i][j] = sym_perm[(row_perm[i] + col_perm[j]) % n];
    return table;
}

Cube latin_square_cube(const std::vector<std::vector<int>>& table) {
    int n = static_cast<int>(table.size());
    Cube::Builder b(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b.set(Cell{i + 1, j + 1, table[i][j] + 1}, Rational(1));
    return std::move(b).build();
}

std::vector<CucklerKahnCheck> cuckler_kahn_sweep(int max_m, int instances_per_m, uint64_t seed) {
    if (max_m > 8) throw std::invalid_argument("cuckler_kahn_sweep budget is m <= 8");
    std::vector<CucklerKahnCheck> checks;
    Rng rng(Rng::derive_seed(seed, 0xCC01));
    const double e_plus_1 = std::exp(1.0) + 1.0;
    for (int m = 4; m <= max_m; ++m) {
        int made = 0, attempts = 0;
        while (made < instances_per_m && attempts < 200 * instances_per_m) {
            ++attempts;
            double p = 0.45 + 0.12 * static_cast<double>(rng.below(5));
            BipartiteGraph g(m, m);
            for (int x = 0; x < m; ++x)
                for (int y = 0; y < m; ++y)
                    if (rng.uniform01() < p) g.add_edge(x, y);
            int min_degree = m;
            for (int x = 0; x < m; ++x) min_degree = std::min(min_degree, g.degree_x(x));
            for (int dy : g.degrees_y()) min_degree = std::min(min_degree, dy);
            if (2 * min_degree < m) continue;  // outside the theorem's shape
            uint64_t count = count_hamiltonian_cycles(g);
            double bound = std::pow(min_degree / e_plus_1, 2.0 * m);
            checks.push_back(
                {m, min_degree, count, bound, static_cast<double>(count) >= bound});
            ++made;
        }
        if (made < instances_per_m)
            throw std::runtime_error("cuckler_kahn_sweep could not sample enough graphs");
    }
    return checks;
}

ChoiceLedger choice_ledger(int n, const StageLog* log) {
    MinorPlan plan = log ? log->plan : minor_plan(n);
    if (log && log->n != n) throw std::invalid_argument("choice_ledger: log is for a different n");
    ChoiceLedger ledger;
    ledger.n = n;
    ledger.k = plan.k;
    int k = plan.k, h = n / 2, hq = n - h;
    double norm = static_cast<double>(n) * n * std::log(static_cast<double>(n));

    double stage1 = 0;
    for (int i = 1; i <= k; ++i) {
        auto quadrant = [&](int side, int c) {
            double degree = side - c - 5 - 2 * (i - 1);
            if (degree < 2) degree = 2;  // keep the log finite at tiny n
            return 2.0 * (side - c) * (std::log(degree) - 1.0);
        };
        stage1 += quadrant(h, plan.p_sizes[i - 1]) + quadrant(hq, plan.q_sizes[i - 1]);
    }
    double stage4 = 0;
    for (int layer = k + 3; layer <= n - k; ++layer) {
        double zero_degree = n - k - layer + 1;
        stage4 += n * (std::log(zero_degree) - 1.0 + std::log(2.0 * k) - 1.0);
    }
    double stage5 = n * (std::lgamma(2.0 * k + 1.0) - 2.0 * k);

    ledger.stages = {{"stage1-hamiltonian-cycles", stage1, stage1 / norm, 0.2},
                     {"stage4-matching-permanents", stage4, stage4 / norm, 1.6},
                     {"stage5-matching-permanents", stage5, stage5 / norm, 0.2}};
    ledger.total_exponent = (stage1 + stage4 + stage5) / norm;
    return ledger;
}

}  // namespace tristoch
