#include "tristoch/certify.hpp"

#include <algorithm>
#include <stdexcept>

#include "tristoch/exact_solve.hpp"

namespace tristoch {

VertexCertificate certify_half_vertex(const HalfArray& h) {
    ValidationReport valid = validate_half_array(h);
    if (!valid.ok)
        throw std::invalid_argument("certify_half_vertex: " + valid.violation->to_string());

    VertexCertificate cert;
    cert.method = VertexCertificate::Method::HalfGraph;
    LineGraph graph = LineGraph::build(h);
    auto components = connected_components(graph);

    for (const auto& component : components) {
        TwoColorResult coloring = two_color(graph, component);
        if (!coloring.bipartite) {
            std::vector<Cell> walk;
            walk.reserve(coloring.odd_walk.size());
            for (int v : coloring.odd_walk) walk.push_back(graph.cell(v));
            cert.odd_walks.push_back(std::move(walk));
            continue;
        }
        // Bipartite component (T, R): T cells become 1 in A / 0 in B, R cells
        // 0 in A / 1 in B, everything else keeps its value.
        cert.is_vertex = false;
        cert.odd_walks.clear();
        int n = h.n();
        Cube::Builder a(n), b(n);
        std::vector<int8_t> in_component(graph.size(), -1);
        for (int v : component) in_component[v] = coloring.color[v];
        for (int v = 0; v < graph.size(); ++v) {
            const Cell& c = graph.cell(v);
            if (in_component[v] < 0) {
                a.set(c, rat_half());
                b.set(c, rat_half());
            } else if (in_component[v] == 0) {
                a.set(c, Rational(1));
            } else {
                b.set(c, Rational(1));
            }
        }
        cert.decomposition = HalfDecomposition{std::move(a).build(), std::move(b).build()};
        return cert;
    }
    cert.is_vertex = true;
    return cert;
}

namespace {

SparseSystem support_system(const Cube& cube) {
    int n = cube.n();
    SparseSystem sys;
    sys.ncols = static_cast<int>(cube.support_size());
    sys.rows.assign(static_cast<size_t>(3) * n * n, {});
    for (auto& row : sys.rows) row.rhs = 1;
    int col = 0;
    for (const auto& [key, v] : cube.entries()) {
        Cell c = cell_from_key(n, key);
        for (const LineSpec& spec : lines_through(c))
            sys.rows[line_index(n, spec)].terms.emplace_back(col, Rational(1));
        ++col;
    }
    // Terms were appended in increasing column order already (entries are
    // key-sorted), so every row is sorted.
    return sys;
}

}  // namespace

VertexCertificate certify_support_rank(const Cube& cube) {
    ValidationReport valid = validate_tristochastic(cube);
    if (!valid.ok)
        throw std::invalid_argument("certify_support_rank: " + valid.violation->to_string());

    VertexCertificate cert;
    cert.method = VertexCertificate::Method::SupportRank;
    SparseSystem sys = support_system(cube);
    EliminationOutcome outcome = eliminate(std::move(sys), false, true);
    if (outcome.rank == static_cast<int>(cube.support_size())) {
        cert.is_vertex = true;
        return cert;
    }
    cert.is_vertex = false;
    Cube::Builder f(cube.n());
    int col = 0;
    for (const auto& [key, v] : cube.entries()) {
        if (outcome.kernel[col] != 0) f.set(cell_from_key(cube.n(), key), outcome.kernel[col]);
        ++col;
    }
    cert.kernel_direction = std::move(f).build();
    return cert;
}

namespace {

bool zero_line_sums(const Cube& f) {
    int n = f.n();
    std::vector<Rational> sums(static_cast<size_t>(3) * n * n, Rational(0));
    for (const auto& [key, v] : f.entries()) {
        Cell c = cell_from_key(n, key);
        for (const LineSpec& spec : lines_through(c)) sums[line_index(n, spec)] += v;
    }
    for (const Rational& s : sums)
        if (s != 0) return false;
    return true;
}

bool support_subset(const Cube& inner, const Cube& outer) {
    for (const auto& [key, v] : inner.entries())
        if (outer.value(cell_from_key(inner.n(), key)) == 0) return false;
    return true;
}

}  // namespace

bool reverify_certificate(const HalfArray& h, const VertexCertificate& cert) {
    if (cert.method != VertexCertificate::Method::HalfGraph) return false;
    LineGraph graph = LineGraph::build(h);
    if (cert.is_vertex) {
        auto components = connected_components(graph);
        if (cert.odd_walks.size() != components.size()) return false;
        for (const auto& walk : cert.odd_walks) {
            if (walk.size() < 4 || !(walk.front() == walk.back())) return false;
            if ((walk.size() - 1) % 2 == 0) return false;
            for (size_t t = 0; t + 1 < walk.size(); ++t) {
                const Cell &a = walk[t], &b = walk[t + 1];
                if (!h.contains(a) || !h.contains(b)) return false;
                int shared = (a.i == b.i && a.k == b.k) + (a.j == b.j && a.k == b.k) +
                             (a.i == b.i && a.j == b.j);
                if (shared == 0 || a == b) return false;
            }
        }
        return true;
    }
    if (!cert.decomposition) return false;
    const Cube &a = cert.decomposition->a, &b = cert.decomposition->b;
    if (a == b) return false;
    if (!validate_tristochastic(a).ok || !validate_tristochastic(b).ok) return false;
    Cube half = h.to_cube();
    // (a + b) / 2 == h
    Cube::Builder avg(h.n());
    std::vector<std::pair<uint32_t, Rational>> sums;
    for (const auto& [key, v] : a.entries()) sums.emplace_back(key, v);
    for (const auto& [key, v] : b.entries()) sums.emplace_back(key, v);
    std::sort(sums.begin(), sums.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (size_t t = 0; t < sums.size();) {
        uint32_t key = sums[t].first;
        Rational total(0);
        while (t < sums.size() && sums[t].first == key) total += sums[t++].second;
        total /= 2;
        if (total != 0) avg.set(cell_from_key(h.n(), key), total);
    }
    return std::move(avg).build() == half;
}

bool reverify_certificate(const Cube& cube, const VertexCertificate& cert) {
    if (cert.method != VertexCertificate::Method::SupportRank) return false;
    if (cert.is_vertex) return true;  // the refutation carries the witness
    if (!cert.kernel_direction) return false;
    const Cube& f = *cert.kernel_direction;
    if (f.support_size() == 0) return false;
    return support_subset(f, cube) && zero_line_sums(f);
}

SupportBounds support_bounds(const Cube& cube) {
    ValidationReport valid = validate_tristochastic(cube);
    if (!valid.ok) throw std::invalid_argument("support_bounds: " + valid.violation->to_string());
    size_t n = static_cast<size_t>(cube.n());
    SupportBounds bounds;
    bounds.support_size = cube.support_size();
    bounds.lower = n * n;
    bounds.upper = 3 * (n - 1) * (n - 1) + 3 * (n - 1) + 1;
    bounds.within = bounds.lower <= bounds.support_size && bounds.support_size <= bounds.upper;
    return bounds;
}

}  // namespace tristoch
