#pragma once

// Intersection overlay of two full-dimensional complexes: every pair of
// top simplices of their decompositions is intersected, the signed pieces are
// summed per pair of source cells, and the sums are merged into one complex.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "polyoverlay/complex_core.hpp"
#include "polyoverlay/decomposition.hpp"
#include "polyoverlay/intersect.hpp"
#include "polyoverlay/tolerances.hpp"

namespace polyoverlay {

struct OverlayOptions {
    bool split_components = true;
    unsigned threads = 0; ///< 0 picks the hardware concurrency
    Tolerances tolerances;
};

/// (cell of the first complex, cell of the second complex)
using SourcePair = std::pair<std::string, std::string>;

/// Full-dimensional intersection of two top simplices.
struct SignedPiece {
    SourcePair sources;
    GeometricSimplex simplex_a;
    GeometricSimplex simplex_b; ///< ids shifted past the labels of the first complex
    Coefficient coefficient = 0; ///< alpha_i * beta_j
    int orientation = 1;         ///< sign det(sigma_i) * sign det(zeta_j)
    IntersectionComplex complex;
    SimplicialChain chain; ///< decomposition of the oriented top cell
    LabelCoordinates coordinates;
    BoundingBox box;

    /// Signed contribution to the summed winding inside the piece.
    Coefficient weight() const { return coefficient * orientation; }
};

class OverlayJob {
public:
    OverlayJob(std::shared_ptr<const RelationalComplex> a, std::shared_ptr<const RelationalComplex> b,
               const OverlayOptions& options = {});

    const RelationalComplex& complex_a() const { return *a_; }
    const RelationalComplex& complex_b() const { return *b_; }
    const DecompositionMorphism& decomposition_a() const { return mu_a_; }
    const DecompositionMorphism& decomposition_b() const { return mu_b_; }
    const std::vector<SignedPiece>& pieces() const { return pieces_; }
    const OverlayOptions& options() const { return options_; }
    int dimension() const { return a_->dimension(); }
    /// Diagonal of the joint bounding box; scales every absolute tolerance.
    double diagonal() const { return diagonal_; }
    /// Simplex pairs that survived the bounding-box filter.
    std::size_t candidate_pairs() const { return candidates_; }
    /// Source pairs whose decompositions overlap with mixed signs.
    const std::set<SourcePair>& mixed_pairs() const { return mixed_; }

private:
    std::shared_ptr<const RelationalComplex> a_;
    std::shared_ptr<const RelationalComplex> b_;
    OverlayOptions options_;
    DecompositionMorphism mu_a_;
    DecompositionMorphism mu_b_;
    std::vector<SignedPiece> pieces_;
    std::set<SourcePair> mixed_;
    double diagonal_ = 0.0;
    std::size_t candidates_ = 0;
};

/// sum over pieces of alpha_i beta_j w(p, sigma_i cap zeta_j). Throws
/// BoundaryPoint when p is within the boundary tolerance of a piece facet.
int summed_winding(const Point& p, const OverlayJob& job);

/// Cell key: sorted ids of the merged vertices spanning the cell.
using CellKey = std::vector<VertexId>;

/// Pieces merged into one table of convex cells.
struct MergedCells {
    int dimension = 0;
    std::vector<Point> vertices;                ///< indexed by merged vertex id
    std::map<CellKey, int> dimension_of;
    BoundaryTable boundary;                     ///< oriented boundary of every cell of dimension >= 1
    std::map<CellKey, double> volume;           ///< positive volume of each top cell
    std::map<SourcePair, std::map<CellKey, Coefficient>> top; ///< summed coefficients, zero sums removed

    /// sum of coefficient * boundary over the top cells of one source pair.
    std::map<CellKey, Coefficient> pair_boundary(const SourcePair& pair) const;
    /// sum of coefficient * volume over the top cells of one source pair.
    double pair_volume(const SourcePair& pair) const;
};

/// Identifies vertices within the merge tolerance (times `diagonal`) and
/// higher cells by their vertex sets, and sums top-cell coefficients per
/// source pair. Pieces of pairs listed in `refine` are first cut along every
/// facet hyperplane of the pair's simplices so overlapping pieces coincide
/// cell by cell. Throws AmbiguousMerge.
MergedCells merge_cells(const std::vector<SignedPiece>& pieces, int dimension, double diagonal,
                        const Tolerances& tolerances, const std::set<SourcePair>& refine = {});

/// Partition of a pair's top cells into classes connected through shared facets.
std::vector<std::vector<CellKey>> connected_components(const MergedCells& cells, const SourcePair& pair);

struct CellProvenance {
    SourcePair sources;
    int component = 0;
};

struct OverlayComplex {
    RelationalComplex complex;
    std::map<std::string, CellProvenance> provenance; ///< per top cell
    std::map<std::string, double> volume;             ///< per top cell, signed
};

OverlayComplex overlay_intersection(const OverlayJob& job);
OverlayComplex overlay_intersection(const RelationalComplex& a, const RelationalComplex& b,
                                    const OverlayOptions& options = {});

} // namespace polyoverlay
