#pragma once

// Relational chain complexes: cells stored per dimension, boundaries stored as
// sparse signed incidence matrices D_k : X_k x X_{k-1}.

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "polyoverlay/tolerances.hpp"

namespace polyoverlay {

using Coefficient = std::int64_t;

/// Checked 64-bit arithmetic; throws CoefficientOverflow.
Coefficient checked_add(Coefficient a, Coefficient b);
Coefficient checked_mul(Coefficient a, Coefficient b);

struct CellId {
    int dimension = 0;
    std::string name;

    auto operator<=>(const CellId&) const = default;
};

std::string to_string(const CellId& id);

/// Sparse integer combination of cells of one dimension. Zero terms are never stored.
class Chain {
public:
    explicit Chain(int dimension = 0) : dimension_(dimension) {}

    int dimension() const { return dimension_; }
    const std::map<std::string, Coefficient>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    Coefficient coefficient(const std::string& name) const;

    /// Adds `value` to the coefficient of `name`, dropping the term when it cancels.
    void add(const std::string& name, Coefficient value);

    Chain& operator+=(const Chain& other);
    Chain operator-() const;
    friend Chain operator+(Chain a, const Chain& b) { return a += b; }
    friend Chain operator*(Coefficient s, const Chain& c);

    bool operator==(const Chain&) const = default;

private:
    int dimension_;
    std::map<std::string, Coefficient> terms_;
};

/// Sparse matrix with rows keyed by cells of `row_dimension` and columns by
/// cells of `col_dimension`. Zero entries are never stored.
class SparseIncidenceMatrix {
public:
    using Key = std::pair<std::string, std::string>;

    SparseIncidenceMatrix(int row_dimension = 0, int col_dimension = 0)
        : row_dimension_(row_dimension), col_dimension_(col_dimension)
    {
    }

    int row_dimension() const { return row_dimension_; }
    int col_dimension() const { return col_dimension_; }
    const std::map<Key, Coefficient>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    Coefficient at(const std::string& row, const std::string& col) const;
    void add(const std::string& row, const std::string& col, Coefficient value);

    /// Row `name` as a chain of column cells.
    Chain row(const std::string& name) const;

    SparseIncidenceMatrix operator-(const SparseIncidenceMatrix& other) const;
    bool operator==(const SparseIncidenceMatrix&) const = default;

private:
    int row_dimension_;
    int col_dimension_;
    std::map<Key, Coefficient> entries_;
};

/// Sparse product; entry (x,z) = sum_y M1(x,y) M2(y,z). Throws DimensionMismatch
/// when M1.col_dimension != M2.row_dimension.
SparseIncidenceMatrix multiply(const SparseIncidenceMatrix& m1, const SparseIncidenceMatrix& m2);

class ComplexBuilder;

/// Immutable relational complex (X_n..X_0, D_n..D_1, vertex coordinates).
/// Cell names are unique across all dimensions.
class RelationalComplex {
public:
    RelationalComplex() = default;

    int dimension() const { return dimension_; }
    int embedding_dimension() const { return embedding_dimension_; }

    const std::set<std::string>& cells(int k) const;
    std::size_t cell_count() const;
    bool contains(const CellId& id) const;

    /// D_k for 1 <= k <= dimension().
    const SparseIncidenceMatrix& boundary_matrix(int k) const;
    Chain boundary(const CellId& cell) const;

    const std::map<std::string, Point>& coordinates() const { return coordinates_; }
    const Point* coordinate(const std::string& vertex) const;

    BoundingBox bounding_box() const;

    bool operator==(const RelationalComplex&) const = default;

private:
    friend class ComplexBuilder;

    int dimension_ = 0;
    int embedding_dimension_ = 0;
    std::vector<std::set<std::string>> cells_{1};
    std::vector<SparseIncidenceMatrix> boundaries_{1}; // index k holds D_k, index 0 unused
    std::map<std::string, Point> coordinates_;
};

/// Incremental construction with structural checks (declared cells, name
/// uniqueness, dimensions, non-zero signs). Algebraic validity is checked
/// separately by validate_complex.
class ComplexBuilder {
public:
    ComplexBuilder(int dimension, int embedding_dimension);

    ComplexBuilder& add_vertex(const std::string& name, Point coordinates);
    ComplexBuilder& add_cell(int dimension, const std::string& name);
    ComplexBuilder& set_coordinates(const std::string& vertex, Point coordinates);
    ComplexBuilder& add_incidence(const std::string& cell, const std::string& boundary, Coefficient sigma);

    bool has_cell(const std::string& name) const { return dimension_of_.count(name) != 0; }
    int dimension_of(const std::string& name) const;

    RelationalComplex build() const;

private:
    RelationalComplex complex_;
    std::map<std::string, int> dimension_of_;
};

struct ValidationIssue {
    enum class Kind { ChainCondition, EdgeBoundary, MissingCoordinates, MorphismResidue };

    Kind kind;
    int dimension = 0; ///< matrix index the issue refers to
    std::string row;
    std::string col;
    Coefficient value = 0;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

/// Reports every nonzero entry of D_{k+1} D_k, every edge without exactly two
/// opposite boundary vertices, and every 0-cell lacking coordinates.
ValidationReport validate_complex(const RelationalComplex& complex);

/// Linear extension of the boundary rows. Throws InvalidComplex for 0-chains.
Chain chain_boundary(const RelationalComplex& complex, const Chain& chain);

/// Finite topological space given by a directed incidence relation.
struct TopologicalDataType {
    using Relation = std::set<std::pair<CellId, CellId>>;

    std::set<CellId> points;
    Relation incidence;

    /// Incidence = support of the boundary matrices (cell -> boundary cell).
    static TopologicalDataType from_complex(const RelationalComplex& complex);
};

/// Reflexive-transitive closure of the incidence relation.
TopologicalDataType::Relation closure(const TopologicalDataType& space);

/// A is open iff every x with x R a, a in A, is itself in A. Throws
/// std::invalid_argument when A is not a subset of the points.
bool is_open(const std::set<CellId>& subset, const TopologicalDataType& space);

/// f is continuous iff (f(a), f(b)) is in the closure of the target relation for
/// every incidence (a, b) of the source. Throws std::invalid_argument when f is
/// not total on the source points or leaves the target points.
bool is_continuous(const std::map<CellId, CellId>& map,
                   const TopologicalDataType& source,
                   const TopologicalDataType& target);

/// Per-dimension integer maps F_k : X_k x Y_k between two complexes.
struct ComplexMorphism {
    std::shared_ptr<const RelationalComplex> source;
    std::shared_ptr<const RelationalComplex> target;
    std::vector<SparseIncidenceMatrix> maps; ///< maps[k] = F_k

    static ComplexMorphism identity(std::shared_ptr<const RelationalComplex> complex);
};

/// Lists every nonzero entry of D_k F_{k-1} - F_k B_k. Throws DimensionMismatch
/// when source and target dimensions differ.
ValidationReport validate_morphism(const ComplexMorphism& morphism);

} // namespace polyoverlay
