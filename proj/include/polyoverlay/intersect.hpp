#pragma once

// Pairwise simplex intersection by an active-set walk over restricted KKT
// systems, and the cell complex spanned by the resulting inactive sets.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "polyoverlay/complex_core.hpp"
#include "polyoverlay/tolerances.hpp"

namespace polyoverlay {

using VertexId = std::int64_t;

/// Simplex with explicit coordinates; ids must be distinct.
struct GeometricSimplex {
    std::vector<VertexId> ids;
    std::vector<Point> points;

    int dimension() const { return static_cast<int>(ids.size()) - 1; }
};

/// Sorted vertex ids drawn from both simplices.
using InactiveSet = std::vector<VertexId>;

InactiveSet make_inactive_set(std::vector<VertexId> ids);

/// Dotted id list, "1.3.4.5".
std::string set_name(const InactiveSet& set);

/// Rows 0..n hold simplex a, rows n+1..n+m+1 simplex b, the last two rows the
/// affine constraints whose multipliers are Lambda_a and Lambda_b.
struct KKTSystem {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
    std::vector<VertexId> ids;
    std::size_t a_count = 0;
    std::size_t b_count = 0;

    std::size_t vertex_count() const { return a_count + b_count; }
    std::size_t size() const { return vertex_count() + 2; }
    /// Row of a vertex id; throws std::out_of_range.
    std::size_t index_of(VertexId id) const;
    bool in_a(std::size_t row) const { return row < a_count; }

    /// x G x^T for a concatenated barycentric vector, i.e. |p(x) - q(x)|^2.
    double quadratic_form(const Eigen::VectorXd& x) const;
};

KKTSystem assemble_kkt(const GeometricSimplex& a, const GeometricSimplex& b);

struct KKTSolution {
    Eigen::VectorXd x; ///< barycentric coordinates, zero outside the set
    double lambda_a = 0.0;
    double lambda_b = 0.0;
    bool feasible = false;
};

/// Solves the system restricted to `set` plus both multiplier rows. nullopt
/// means Singular.
std::optional<KKTSolution> solve_restricted(const KKTSystem& system, const InactiveSet& set,
                                            const Tolerances& tolerances = {});

/// The restricted matrix (rows and columns of `set`, then the two multiplier rows).
Eigen::MatrixXd restricted_matrix(const KKTSystem& system, const InactiveSet& set);

/// Dimension of the solution space of the restricted system.
int solution_dimension(const KKTSystem& system, const InactiveSet& set, const Tolerances& tolerances = {});

struct IntersectionVertex {
    InactiveSet set;
    Point point;                ///< in the input coordinates
    Eigen::VectorXd barycentric;
};

/// Every vertex of a intersect b, keyed by its minimal inactive set, in set
/// order. Throws DegenerateIntersection on a singular restricted solve or
/// when an accepted point cannot be reduced to a regular support.
std::vector<IntersectionVertex> intersection_vertices(const GeometricSimplex& a, const GeometricSimplex& b,
                                                      const Tolerances& tolerances = {});

/// Smallest union-closed family containing `sets`.
std::set<InactiveSet> union_closure(const std::set<InactiveSet>& sets);

/// Simplicial boundary of the sorted id sequence with terms outside `family`
/// struck. Throws std::invalid_argument when `cell` is not in `family`.
std::map<InactiveSet, Coefficient> restricted_boundary(const std::set<InactiveSet>& family, const InactiveSet& cell);

struct IntersectionComplex {
    int embedding_dimension = 0;
    std::vector<std::set<InactiveSet>> cells; ///< cells[k]: k-dimensional cells
    std::map<InactiveSet, int> dimension_of;
    std::map<InactiveSet, Point> points; ///< 0-cells
    std::map<InactiveSet, std::map<InactiveSet, Coefficient>> restricted;
    std::map<InactiveSet, std::map<InactiveSet, Coefficient>> oriented;
    std::vector<std::string> orientation_issues;

    /// -1 for an empty intersection.
    int dimension() const { return static_cast<int>(cells.size()) - 1; }
    bool empty() const { return cells.empty(); }
    bool is_oriented() const { return orientation_issues.empty(); }

    /// Oriented boundary as a relational complex; cells named by set_name.
    RelationalComplex to_relational_complex() const;
};

using BoundaryTable = std::map<InactiveSet, std::map<InactiveSet, Coefficient>>;

/// Orients `cell` from its facets (already oriented in `table` when k >= 2):
/// +1 on the smallest facet, remaining signs propagated across shared ridges
/// so the boundary is a cycle. Failures are appended to `issues`.
bool orient_from_facets(const InactiveSet& cell, const std::vector<InactiveSet>& facets, int k, BoundaryTable& table,
                        std::vector<std::string>& issues);

/// X = union closure of the intersection vertices, cell dimensions from the
/// restricted solution spaces, boundaries from the Hasse diagram of X oriented
/// by seed propagation. A full-dimensional top cell is oriented to
/// sign_a * sign_b.
IntersectionComplex build_intersection_complex(const GeometricSimplex& a, const GeometricSimplex& b, int sign_a,
                                               int sign_b, const Tolerances& tolerances = {});

} // namespace polyoverlay
