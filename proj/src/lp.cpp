#include "tristoch/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <set>

#include "tristoch/census.hpp"
#include "tristoch/exact_solve.hpp"

namespace tristoch {

DeltaModel build_delta_model(int n) {
    if (n < 1) throw std::invalid_argument("build_delta_model needs n >= 1");
    return DeltaModel{n, 3 * n * n, n * n * n};
}

ModelRankReport delta_model_rank(int n) {
    if (n > 12) throw std::invalid_argument("exact model rank budget is n <= 12");
    DeltaModel model = build_delta_model(n);
    SparseSystem sys;
    sys.ncols = model.cells;
    sys.rows.assign(model.rows, {});
    for (int cell = 0; cell < model.cells; ++cell)
        for (int line : model.column_lines(cell))
            sys.rows[line].terms.emplace_back(cell, Rational(1));
    for (auto& row : sys.rows)
        std::sort(row.terms.begin(), row.terms.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    ModelRankReport report;
    report.n = n;
    report.rows = model.rows;
    report.cols = model.cells;
    report.rank = sparse_rank(std::move(sys));
    report.expected = model.expected_rank();
    report.matches = report.rank == report.expected;
    return report;
}

namespace {

// ---------------------------------------------------------------------------
// Basis factorization: left-looking sparse LU with partial pivoting plus a
// product-form eta file between refactorizations. Basis columns are either
// structural cells (>= 0) or artificial unit rows (encoded as -1 - row).
// ---------------------------------------------------------------------------

constexpr int artificial(int row) { return -1 - row; }
constexpr bool is_artificial(int col) { return col < 0; }
constexpr int artificial_row(int col) { return -1 - col; }

class BasisLU {
  public:
    explicit BasisLU(const DeltaModel& model) : model_(&model), m_(model.rows) {}

    // Factors the basis in place (reorders it: artificials first). Returns
    // false on numerical singularity.
    bool factor(std::vector<int>& basis) {
        std::stable_partition(basis.begin(), basis.end(), is_artificial);
        lcols_.assign(m_, {});
        ucols_.assign(m_, {});
        udiag_.assign(m_, 0.0);
        prow_.assign(m_, -1);
        row_pivoted_.assign(m_, 0);
        etas_.clear();
        std::vector<double> x(m_, 0.0);
        std::vector<int> touched;
        for (int j = 0; j < m_; ++j) {
            // Scatter column j.
            touched.clear();
            if (is_artificial(basis[j])) {
                x[artificial_row(basis[j])] = 1.0;
                touched.push_back(artificial_row(basis[j]));
            } else {
                for (int line : model_->column_lines(basis[j])) {
                    x[line] = 1.0;
                    touched.push_back(line);
                }
            }
            // Apply earlier eliminations.
            for (int t = 0; t < j; ++t) {
                double v = x[prow_[t]];
                if (v == 0.0) continue;
                for (const auto& [r, mult] : lcols_[t]) {
                    if (x[r] == 0.0) touched.push_back(r);
                    x[r] -= v * mult;
                }
            }
            // Pivot among unpivoted rows.
            int pivot = -1;
            double best = 0.0;
            for (int r : touched)
                if (!row_pivoted_[r] && std::abs(x[r]) > best) {
                    best = std::abs(x[r]);
                    pivot = r;
                }
            if (pivot < 0 || best < 1e-10) {
                for (int r : touched) x[r] = 0.0;
                return false;
            }
            for (int t = 0; t < j; ++t)
                if (x[prow_[t]] != 0.0) ucols_[j].emplace_back(t, x[prow_[t]]);
            udiag_[j] = x[pivot];
            for (int r : touched)
                if (!row_pivoted_[r] && r != pivot && x[r] != 0.0)
                    lcols_[j].emplace_back(r, x[r] / x[pivot]);
            prow_[j] = pivot;
            row_pivoted_[pivot] = 1;
            for (int r : touched) x[r] = 0.0;
            for (int t = 0; t < j; ++t) x[prow_[t]] = 0.0;
        }
        return true;
    }

    // Builds a basis from candidate structural columns: accepted columns
    // pivot, rows left unpivoted get artificials.
    std::vector<int> select_basis(const std::vector<int>& structural) {
        std::vector<int> basis;
        std::vector<int> accepted;
        lcols_.clear();
        ucols_.clear();
        udiag_.clear();
        prow_.clear();
        row_pivoted_.assign(m_, 0);
        std::vector<double> x(m_, 0.0);
        std::vector<int> touched;
        for (int cell : structural) {
            touched.clear();
            for (int line : model_->column_lines(cell)) {
                x[line] = 1.0;
                touched.push_back(line);
            }
            int j = static_cast<int>(accepted.size());
            for (int t = 0; t < j; ++t) {
                double v = x[prow_[t]];
                if (v == 0.0) continue;
                for (const auto& [r, mult] : lcols_[t]) {
                    if (x[r] == 0.0) touched.push_back(r);
                    x[r] -= v * mult;
                }
            }
            int pivot = -1;
            double best = 0.0;
            for (int r : touched)
                if (!row_pivoted_[r] && std::abs(x[r]) > best) {
                    best = std::abs(x[r]);
                    pivot = r;
                }
            if (pivot >= 0 && best > 1e-8) {
                lcols_.push_back({});
                ucols_.push_back({});
                for (int t = 0; t < j; ++t)
                    if (x[prow_[t]] != 0.0) ucols_[j].emplace_back(t, x[prow_[t]]);
                udiag_.push_back(x[pivot]);
                for (int r : touched)
                    if (!row_pivoted_[r] && r != pivot && x[r] != 0.0)
                        lcols_[j].emplace_back(r, x[r] / x[pivot]);
                prow_.push_back(pivot);
                row_pivoted_[pivot] = 1;
                accepted.push_back(cell);
            }
            for (int r : touched) x[r] = 0.0;
            for (size_t t = 0; t < prow_.size(); ++t) x[prow_[t]] = 0.0;
        }
        basis = accepted;
        for (int r = 0; r < m_; ++r)
            if (!row_pivoted_[r]) basis.push_back(artificial(r));
        return basis;
    }

    // Solve B z = rhs; rhs indexed by row, z by basis slot.
    void ftran(std::vector<double>& x) const {
        for (int j = 0; j < m_; ++j) {
            double v = x[prow_[j]];
            if (v != 0.0)
                for (const auto& [r, mult] : lcols_[j]) x[r] -= v * mult;
        }
        std::vector<double> z(m_, 0.0);
        for (int j = m_ - 1; j >= 0; --j) {
            double v = x[prow_[j]] / udiag_[j];
            z[j] = v;
            if (v != 0.0)
                for (const auto& [t, val] : ucols_[j]) x[prow_[t]] -= val * v;
        }
        x = std::move(z);
        for (const Eta& eta : etas_) {
            double t = x[eta.slot] / eta.diag;
            if (t != 0.0)
                for (const auto& [s, v] : eta.terms) x[s] -= v * t;
            x[eta.slot] = t;
        }
    }

    // Solve B^T y = c; c indexed by slot, y by row.
    void btran(std::vector<double>& c) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double dot = 0.0;
            for (const auto& [s, v] : it->terms) dot += v * c[s];
            c[it->slot] = (c[it->slot] - dot) / it->diag;
        }
        std::vector<double> w(m_, 0.0);
        for (int j = 0; j < m_; ++j) {
            double acc = c[j];
            for (const auto& [t, val] : ucols_[j]) acc -= val * w[t];
            w[j] = acc / udiag_[j];
        }
        std::vector<double> y(m_, 0.0);
        for (int j = 0; j < m_; ++j) y[prow_[j]] = w[j];
        for (int j = m_ - 1; j >= 0; --j) {
            double acc = y[prow_[j]];
            for (const auto& [r, mult] : lcols_[j]) acc -= mult * y[r];
            y[prow_[j]] = acc;
        }
        c = std::move(y);
    }

    void push_eta(int slot, const std::vector<double>& w) {
        Eta eta;
        eta.slot = slot;
        eta.diag = w[slot];
        for (int s = 0; s < m_; ++s)
            if (s != slot && w[s] != 0.0) eta.terms.emplace_back(s, w[s]);
        etas_.push_back(std::move(eta));
    }
    size_t eta_count() const { return etas_.size(); }

  private:
    struct Eta {
        int slot = 0;
        double diag = 1.0;
        std::vector<std::pair<int, double>> terms;
    };
    const DeltaModel* model_;
    int m_;
    std::vector<std::vector<std::pair<int, double>>> lcols_, ucols_;
    std::vector<double> udiag_;
    std::vector<int> prow_;
    std::vector<char> row_pivoted_;
    std::vector<Eta> etas_;
};

struct SimplexOutcome {
    bool optimal = false;
    long iterations = 0;
    double objective = 0.0;
    std::vector<int> support;  // structural cells with positive basic value
};

// Maximizing revised simplex over the equality model, warm-started from a
// basic feasible point. Dantzig pricing with a Bland fallback on stalls.
SimplexOutcome run_simplex(const DeltaModel& model, const std::vector<double>& objective,
                           std::vector<int> basis, long iteration_cap) {
    const int m = model.rows;
    BasisLU lu(model);
    if (!lu.factor(basis)) return {};

    std::vector<char> basic(model.cells, 0);
    for (int col : basis)
        if (!is_artificial(col)) basic[col] = 1;

    std::vector<double> xb(m, 1.0);
    lu.ftran(xb);

    auto slot_cost = [&](int slot) {
        int col = basis[slot];
        return is_artificial(col) ? 0.0 : objective[col];
    };

    SimplexOutcome out;
    const double rd_tol = 1e-9, pivot_tol = 1e-9;
    int degen_streak = 0;
    bool bland = false;
    for (long iter = 0; iter < iteration_cap; ++iter) {
        if (lu.eta_count() >= 48) {
            if (!lu.factor(basis)) return {};
            std::fill(xb.begin(), xb.end(), 1.0);
            lu.ftran(xb);
        }
        std::vector<double> y(m);
        for (int slot = 0; slot < m; ++slot) y[slot] = slot_cost(slot);
        lu.btran(y);

        int entering = -1;
        double best_rd = rd_tol;
        for (int cell = 0; cell < model.cells; ++cell) {
            if (basic[cell]) continue;
            auto lines = model.column_lines(cell);
            double rd = objective[cell] - y[lines[0]] - y[lines[1]] - y[lines[2]];
            if (bland) {
                if (rd > rd_tol) {
                    entering = cell;
                    break;
                }
            } else if (rd > best_rd) {
                best_rd = rd;
                entering = cell;
            }
        }
        if (entering < 0) {
            out.optimal = true;
            out.iterations = iter;
            break;
        }

        std::vector<double> w(m, 0.0);
        for (int line : model.column_lines(entering)) w[line] = 1.0;
        lu.ftran(w);

        int leaving = -1;
        double theta = 0.0;
        for (int slot = 0; slot < m; ++slot) {
            if (w[slot] <= pivot_tol) continue;
            double ratio = std::max(xb[slot], 0.0) / w[slot];
            if (leaving < 0 || ratio < theta - 1e-12 ||
                (ratio < theta + 1e-12 && is_artificial(basis[slot]) &&
                 !is_artificial(basis[leaving]))) {
                leaving = slot;
                theta = ratio;
            }
        }
        if (leaving < 0) return {};  // numerically unbounded: fail the attempt

        for (int slot = 0; slot < m; ++slot) xb[slot] -= theta * w[slot];
        xb[leaving] = theta;
        lu.push_eta(leaving, w);
        if (!is_artificial(basis[leaving])) basic[basis[leaving]] = 0;
        basis[leaving] = entering;
        basic[entering] = 1;

        degen_streak = theta < 1e-10 ? degen_streak + 1 : 0;
        if (degen_streak > 400) bland = true;
    }
    if (!out.optimal) return {};

    for (int slot = 0; slot < m; ++slot)
        if (!is_artificial(basis[slot]) && xb[slot] > 1e-7) out.support.push_back(basis[slot]);
    std::sort(out.support.begin(), out.support.end());
    double obj = 0.0;
    for (int slot = 0; slot < m; ++slot)
        if (!is_artificial(basis[slot])) obj += slot_cost(slot) * xb[slot];
    out.objective = obj;
    return out;
}

std::string hash_doubles(const std::vector<double>& values) {
    uint64_t h = 1469598103934665603ULL;
    for (double v : values) {
        uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        for (int shift = 0; shift < 64; shift += 8) {
            h ^= (bits >> shift) & 0xff;
            h *= 1099511628211ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

std::array<std::vector<int>, 3> line_support_profile(const Cube& cube) {
    int n = cube.n();
    std::array<std::vector<int>, 3> counts;
    for (auto& c : counts) c.assign(n, 0);
    std::vector<int> per_line(static_cast<size_t>(3) * n * n, 0);
    for (const auto& [key, v] : cube.entries()) {
        Cell c = cell_from_key(n, key);
        for (const LineSpec& spec : lines_through(c)) ++per_line[line_index(n, spec)];
    }
    for (int idx = 0; idx < 3 * n * n; ++idx) {
        int size = per_line[idx];
        if (size >= 1 && size <= n) ++counts[idx / (n * n)][size - 1];
    }
    return counts;
}

SampleRecord sample_vertex(int n, uint64_t seed, const SampleOptions& options) {
    DeltaModel model = build_delta_model(n);
    long cap = options.iteration_cap > 0 ? options.iteration_cap : 2000 + 40L * model.rows;

    for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
        Rng rng(Rng::derive_seed(seed, 0x5A3Cu + attempt));
        std::vector<double> objective(model.cells);
        for (double& v : objective) v = rng.uniform01();

        // Basic feasible warm start on a random Latin-square vertex.
        auto latin = random_latin_square(n, rng);
        std::vector<int> structural;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                structural.push_back(
                    static_cast<int>(cell_key(n, Cell{i + 1, j + 1, latin[i][j] + 1})));
        std::sort(structural.begin(), structural.end());
        BasisLU selector(model);
        std::vector<int> basis = selector.select_basis(structural);
        if (static_cast<int>(basis.size()) != model.rows) continue;

        SimplexOutcome lp = run_simplex(model, objective, std::move(basis), cap);
        if (!lp.optimal || lp.support.empty()) continue;

        // Exact snap: solve the line-sum system on the floating support.
        SparseSystem sys;
        sys.ncols = static_cast<int>(lp.support.size());
        sys.rows.assign(model.rows, {});
        for (auto& row : sys.rows) row.rhs = 1;
        for (int col = 0; col < sys.ncols; ++col)
            for (int line : model.column_lines(lp.support[col]))
                sys.rows[line].terms.emplace_back(col, Rational(1));
        EliminationOutcome exact = eliminate(std::move(sys), true, false);
        if (!exact.consistent || exact.rank != static_cast<int>(lp.support.size())) continue;
        bool negative = false;
        for (const Rational& v : exact.solution) negative |= v < 0;
        if (negative) continue;

        Cube::Builder builder(n);
        for (int col = 0; col < static_cast<int>(lp.support.size()); ++col)
            if (exact.solution[col] > 0)
                builder.set(cell_from_key(n, static_cast<uint32_t>(lp.support[col])),
                            exact.solution[col]);
        Cube vertex = std::move(builder).build();
        if (!validate_tristochastic(vertex).ok) continue;
        VertexCertificate cert = certify_support_rank(vertex);
        if (!cert.is_vertex) continue;

        SampleRecord record;
        record.n = n;
        record.seed = seed;
        record.vertex = std::move(vertex);
        record.objective_hash = hash_doubles(objective);
        record.attempts = attempt + 1;
        record.simplex_iterations = lp.iterations;
        record.lp_objective = lp.objective;
        record.support_size = record.vertex.support_size();
        record.line_support = line_support_profile(record.vertex);
        std::set<Rational> values;
        for (const auto& [key, v] : record.vertex.entries()) values.insert(v);
        record.distinct_values = static_cast<int>(values.size());
        return record;
    }
    throw SampleError("sample_vertex: no certified vertex within the attempt budget (n=" +
                      std::to_string(n) + ", seed=" + std::to_string(seed) + ")");
}

std::vector<HistogramRow> line_support_histogram(const std::vector<SampleRecord>& records,
                                                 Axis axis) {
    if (records.empty()) throw std::invalid_argument("histogram needs at least one record");
    int n = records.front().n;
    std::vector<uint64_t> counts(n, 0);
    for (const SampleRecord& record : records) {
        if (record.n != n) throw std::invalid_argument("histogram records mix sizes");
        const auto& per_axis = record.line_support[static_cast<int>(axis)];
        for (int s = 0; s < n; ++s) counts[s] += per_axis[s];
    }
    std::vector<HistogramRow> rows;
    for (int s = 1; s <= n; ++s) rows.push_back({n, axis, s, counts[s - 1]});
    return rows;
}

}  // namespace tristoch
