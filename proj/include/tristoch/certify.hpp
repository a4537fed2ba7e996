#ifndef TRISTOCH_CERTIFY_HPP
#define TRISTOCH_CERTIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "tristoch/cube.hpp"
#include "tristoch/line_graph.hpp"

namespace tristoch {

// Decomposition H = (A + B) / 2 with A != B tristochastic; the witness
// returned when the half-array graph test refutes vertexhood.
struct HalfDecomposition {
    Cube a, b;
};

struct VertexCertificate {
    enum class Method { HalfGraph, SupportRank };
    Method method = Method::HalfGraph;
    bool is_vertex = false;

    // HalfGraph vertex verdicts: one odd closed cell walk per connected
    // component of the co-line graph.
    std::vector<std::vector<Cell>> odd_walks;
    // HalfGraph non-vertex verdicts.
    std::optional<HalfDecomposition> decomposition;
    // SupportRank non-vertex verdicts: nonzero direction with zero line sums
    // supported inside the support (entries may be negative).
    std::optional<Cube> kernel_direction;
};

// Graph certifier for half-entry arrays: vertex iff no connected component
// of the co-line graph is bipartite. Witnesses are constructive both ways.
// Throws std::invalid_argument when validate_half_array fails.
VertexCertificate certify_half_vertex(const HalfArray& h);

// Exact support-rank certifier for arbitrary members: vertex iff the array
// is the unique solution of its line-sum system restricted to its support
// (decided by exact rational elimination). Throws when
// validate_tristochastic fails.
VertexCertificate certify_support_rank(const Cube& cube);

// Re-verify a certificate against the array it talks about (odd walks are
// odd, closed, and co-linear; decompositions average back; kernel directions
// have zero line sums inside the support).
bool reverify_certificate(const HalfArray& h, const VertexCertificate& cert);
bool reverify_certificate(const Cube& cube, const VertexCertificate& cert);

struct SupportBounds {
    size_t support_size = 0;
    size_t lower = 0;  // n^2
    size_t upper = 0;  // 3(n-1)^2 + 3(n-1) + 1
    bool within = false;
};

// Support-size window every vertex must satisfy (n^2 from per-row coverage,
// the upper value from counting non-tight inequalities).
SupportBounds support_bounds(const Cube& cube);

}  // namespace tristoch

#endif
