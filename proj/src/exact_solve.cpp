#include "tristoch/exact_solve.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace tristoch {

namespace {

using Row = SparseSystem::Row;

void axpy(Row& target, const Rational& factor, const Row& source) {
    // target -= factor * source, keeping terms sorted and dropping zeros.
    std::vector<std::pair<int, Rational>> merged;
    merged.reserve(target.terms.size() + source.terms.size());
    auto a = target.terms.begin(), ae = target.terms.end();
    auto b = source.terms.begin(), be = source.terms.end();
    while (a != ae || b != be) {
        if (b == be || (a != ae && a->first < b->first)) {
            merged.push_back(*a++);
        } else if (a == ae || b->first < a->first) {
            Rational v = -factor * b->second;
            if (v != 0) merged.emplace_back(b->first, std::move(v));
            ++b;
        } else {
            Rational v = a->second - factor * b->second;
            if (v != 0) merged.emplace_back(a->first, std::move(v));
            ++a;
            ++b;
        }
    }
    target.terms = std::move(merged);
    target.rhs -= factor * source.rhs;
}

size_t coeff_size(const Rational& q) {
    return mpz_sizeinbase(q.get_num().get_mpz_t(), 2) +
           mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
}

}  // namespace

EliminationOutcome eliminate(SparseSystem system, bool want_solution, bool want_kernel) {
    const int ncols = system.ncols;
    auto& rows = system.rows;
    const int nrows = static_cast<int>(rows.size());

    std::vector<std::vector<int>> col_rows(ncols);  // lazy: may hold stale ids
    for (int r = 0; r < nrows; ++r)
        for (const auto& [c, v] : rows[r].terms) col_rows[c].push_back(r);

    std::vector<int> pivot_col(nrows, -1);  // per pivoted row
    std::vector<int> col_pivot_row(ncols, -1);

    // (nnz, row) min-queue with lazy revalidation.
    using Entry = std::pair<size_t, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    for (int r = 0; r < nrows; ++r)
        if (!rows[r].terms.empty()) queue.emplace(rows[r].terms.size(), r);

    EliminationOutcome out;
    while (!queue.empty()) {
        auto [nnz, r] = queue.top();
        queue.pop();
        if (pivot_col[r] >= 0 || rows[r].terms.empty() || rows[r].terms.size() != nnz) {
            if (pivot_col[r] < 0 && !rows[r].terms.empty())
                queue.emplace(rows[r].terms.size(), r);
            continue;
        }
        // Pivot column: sparsest column of the row, then smallest coefficient
        // encoding, then smallest column id.
        auto row_has_col = [&](int s, int c) {
            auto it = std::lower_bound(rows[s].terms.begin(), rows[s].terms.end(), c,
                                       [](const auto& term, int col) { return term.first < col; });
            return it != rows[s].terms.end() && it->first == c;
        };
        int best_col = -1;
        size_t best_count = 0, best_size = 0;
        for (const auto& [c, v] : rows[r].terms) {
            size_t count = 0;
            for (int s : col_rows[c])
                if (s == r || row_has_col(s, c)) ++count;
            size_t size = coeff_size(v);
            if (best_col < 0 || count < best_count ||
                (count == best_count && size < best_size)) {
                best_col = c;
                best_count = count;
                best_size = size;
            }
        }
        int c = best_col;
        const Rational pivot_value = [&] {
            for (const auto& [col, v] : rows[r].terms)
                if (col == c) return v;
            throw std::logic_error("pivot column vanished");
        }();

        // Gauss-Jordan: clear column c from every other row, pivoted or not.
        std::vector<int> holders = std::move(col_rows[c]);
        std::sort(holders.begin(), holders.end());
        holders.erase(std::unique(holders.begin(), holders.end()), holders.end());
        col_rows[c] = {r};
        for (int s : holders) {
            if (s == r) continue;
            auto it = std::lower_bound(rows[s].terms.begin(), rows[s].terms.end(), c,
                                       [](const auto& term, int col) { return term.first < col; });
            if (it == rows[s].terms.end() || it->first != c) continue;  // stale
            Rational factor = it->second / pivot_value;
            axpy(rows[s], factor, rows[r]);
            for (const auto& [nc, nv] : rows[s].terms)
                if (nc != c) col_rows[nc].push_back(s);
            if (pivot_col[s] < 0 && !rows[s].terms.empty())
                queue.emplace(rows[s].terms.size(), s);
        }
        pivot_col[r] = c;
        col_pivot_row[c] = r;
        ++out.rank;
    }

    for (int r = 0; r < nrows; ++r)
        if (pivot_col[r] < 0 && rows[r].terms.empty() && rows[r].rhs != 0) {
            out.consistent = false;
            break;
        }

    if (want_solution && out.consistent && out.rank == ncols) {
        out.solution.assign(ncols, Rational(0));
        for (int c = 0; c < ncols; ++c) {
            int r = col_pivot_row[c];
            if (r < 0) throw std::logic_error("missing pivot at full rank");
            // After Gauss-Jordan at full column rank each pivot row holds a
            // single term.
            out.solution[c] = rows[r].rhs / rows[r].terms.front().second;
        }
    }
    if (want_kernel && out.rank < ncols) {
        int free_col = -1;
        for (int c = 0; c < ncols && free_col < 0; ++c)
            if (col_pivot_row[c] < 0) free_col = c;
        out.kernel.assign(ncols, Rational(0));
        out.kernel[free_col] = 1;
        for (int r = 0; r < nrows; ++r) {
            if (pivot_col[r] < 0) continue;
            Rational at_free(0), at_pivot(0);
            for (const auto& [c, v] : rows[r].terms) {
                if (c == free_col) at_free = v;
                if (c == pivot_col[r]) at_pivot = v;
            }
            if (at_free != 0) out.kernel[pivot_col[r]] = -at_free / at_pivot;
        }
    }
    return out;
}

int sparse_rank(SparseSystem system) {
    for (auto& row : system.rows) row.rhs = 0;
    return eliminate(std::move(system), false, false).rank;
}

}  // namespace tristoch
