#include "tristoch/cube.hpp"

namespace tristoch {

std::string Violation::to_string() const {
    switch (kind) {
        case Kind::NegativeEntry:
            return "negative entry at (" + std::to_string(cell.i) + "," + std::to_string(cell.j) +
                   "," + std::to_string(cell.k) + ")";
        case Kind::LineSum:
            return "line " + line_to_string(line) + " sums to " + rat_to_string(sum);
        case Kind::LineSupportCount:
            return "line " + line_to_string(line) + " holds " + std::to_string(support_count) +
                   " support cells (want 2)";
    }
    return "?";
}

ShaftView shaft_view(const Cube& cube, int top) {
    int n = cube.n();
    check_index(n, top, "layer");
    ShaftView view{n, top, std::vector<Rational>(static_cast<size_t>(n) * n, Rational(0))};
    for (const auto& [key, v] : cube.entries()) {
        Cell c = cell_from_key(n, key);
        if (c.k <= top) view.entries[(c.i - 1) * n + (c.j - 1)] += v;
    }
    return view;
}

ShaftView shaft_view(const HalfArray& h, int top) {
    int n = h.n();
    check_index(n, top, "layer");
    ShaftView view{n, top, std::vector<Rational>(static_cast<size_t>(n) * n, Rational(0))};
    Rational half = rat_half();
    for (uint32_t key : h.support_keys()) {
        Cell c = cell_from_key(n, key);
        if (c.k <= top) view.entries[(c.i - 1) * n + (c.j - 1)] += half;
    }
    return view;
}

std::optional<std::pair<int, int>> classify_cells(const ShaftView& view, CellClasses& out) {
    int n = view.n;
    out.n = n;
    out.doubled.assign(static_cast<size_t>(n) * n, 0);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            const Rational& v = view.at(i, j);
            Rational doubled = v * 2;
            if (doubled.get_den() != 1 || doubled < 0 || doubled > 2)
                return std::make_pair(i, j);
            out.doubled[(i - 1) * n + (j - 1)] = static_cast<int8_t>(doubled.get_num().get_si());
        }
    return std::nullopt;
}

namespace {

// Accumulates per-line totals in one pass over the support; each cell lies on
// exactly three lines.
template <typename Value, typename Add>
std::vector<Value> line_totals(int n, const std::vector<uint32_t>& keys, Add add) {
    std::vector<Value> totals(static_cast<size_t>(3) * n * n, Value{});
    for (uint32_t key : keys) {
        Cell c = cell_from_key(n, key);
        for (const LineSpec& spec : lines_through(c)) add(totals[line_index(n, spec)]);
    }
    return totals;
}

}  // namespace

ValidationReport validate_tristochastic(const Cube& cube) {
    int n = cube.n();
    for (const auto& [key, v] : cube.entries())
        if (v < 0)
            return {false, Violation{Violation::Kind::NegativeEntry, {}, cell_from_key(n, key),
                                     Rational(0), 0}};
    std::vector<Rational> sums(static_cast<size_t>(3) * n * n, Rational(0));
    for (const auto& [key, v] : cube.entries()) {
        Cell c = cell_from_key(n, key);
        for (const LineSpec& spec : lines_through(c)) sums[line_index(n, spec)] += v;
    }
    for (int idx = 0; idx < 3 * n * n; ++idx)
        if (sums[idx] != 1)
            return {false,
                    Violation{Violation::Kind::LineSum, line_from_index(n, idx), {}, sums[idx], 0}};
    return {};
}

ValidationReport validate_half_array(const HalfArray& h) {
    int n = h.n();
    auto counts = line_totals<int>(n, h.support_keys(), [](int& c) { ++c; });
    for (int idx = 0; idx < 3 * n * n; ++idx)
        if (counts[idx] != 2)
            return {false, Violation{Violation::Kind::LineSupportCount, line_from_index(n, idx),
                                     {}, Rational(0), counts[idx]}};
    return {};
}

}  // namespace tristoch
