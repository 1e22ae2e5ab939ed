#pragma once

// Signed simplicial decomposition of relational complexes. A decomposition is
// a chain morphism mu from the complex to a complex of (possibly overlapping)
// simplices over integer vertex labels: delta o mu_k = mu_{k-1} o boundary.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polyoverlay/complex_core.hpp"

namespace polyoverlay {

/// Vertex labels are 1..#X_0 for complex vertices. Apex vertices get labels
/// 0, -1, -2, ... in creation order, so they sort before every complex vertex
/// and an apex of a higher-dimensional cell sorts before apexes of its faces.
using VertexLabel = std::int64_t;

class Simplex {
public:
    Simplex() = default;
    Simplex(std::initializer_list<VertexLabel> vertices) : vertices_(vertices) {}
    explicit Simplex(std::vector<VertexLabel> vertices) : vertices_(std::move(vertices)) {}

    const std::vector<VertexLabel>& vertices() const { return vertices_; }
    int dimension() const { return static_cast<int>(vertices_.size()) - 1; }

    /// True when some label repeats (e.g. the cone <a,a,...>).
    bool is_degenerate() const;
    bool is_ascending() const;
    bool contains(VertexLabel v) const;

    /// Dotted label list, "1.2.3"; usable as a cell name.
    std::string name() const;

    auto operator<=>(const Simplex&) const = default;

private:
    std::vector<VertexLabel> vertices_;
};

/// Integer combination of simplices of one dimension; zero terms never stored.
class SimplicialChain {
public:
    explicit SimplicialChain(int dimension = 0) : dimension_(dimension) {}

    int dimension() const { return dimension_; }
    const std::map<Simplex, Coefficient>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    Coefficient coefficient(const Simplex& s) const;

    void add(const Simplex& s, Coefficient value);

    SimplicialChain& operator+=(const SimplicialChain& other);
    SimplicialChain operator-() const;
    friend SimplicialChain operator+(SimplicialChain a, const SimplicialChain& b) { return a += b; }
    friend SimplicialChain operator*(Coefficient s, const SimplicialChain& c);

    bool operator==(const SimplicialChain&) const = default;

private:
    int dimension_;
    std::map<Simplex, Coefficient> terms_;
};

std::string to_string(const SimplicialChain& chain);

/// delta<v0..vn> = sum_i (-1)^i <.., v_{i-1}, v_{i+1}, ..>, extended linearly.
SimplicialChain simplicial_boundary(const SimplicialChain& chain);

/// Prepends `apex` to every simplex. Simplices already containing the apex are
/// kept as degenerate terms.
SimplicialChain cone(VertexLabel apex, const SimplicialChain& chain);

using LabelCoordinates = std::map<VertexLabel, Point>;

struct Apex {
    VertexLabel label;
    Point position;
};

/// A top-dimensional simplex of a decomposition with the cell it came from.
struct SourcedSimplex {
    Simplex simplex;
    Coefficient coefficient;
    std::string source;
};

class DecompositionMorphism {
public:
    DecompositionMorphism() = default;
    DecompositionMorphism(std::vector<std::map<std::string, SimplicialChain>> images,
                          std::map<std::string, VertexLabel> labels,
                          std::map<std::string, Apex> apexes,
                          LabelCoordinates coordinates);

    int dimension() const { return static_cast<int>(images_.size()) - 1; }

    /// mu_k(cell) for a cell of dimension k.
    const SimplicialChain& image(const CellId& cell) const;
    const std::map<std::string, SimplicialChain>& images(int k) const { return images_.at(k); }

    VertexLabel label(const std::string& vertex) const { return labels_.at(vertex); }
    const std::map<std::string, VertexLabel>& labels() const { return labels_; }
    /// Inverse of the vertex labelling; apex labels map to nothing.
    std::optional<std::string> vertex_of(VertexLabel label) const;

    const std::map<std::string, Apex>& apexes() const { return apexes_; }
    const LabelCoordinates& coordinates() const { return coordinates_; }

    /// Simplices of mu_n with back-pointers to their n-cells, in cell order.
    std::vector<SourcedSimplex> top_simplices() const;

    /// The morphism as relational maps into the complex spanned by all image
    /// simplices and their faces (cells named by Simplex::name()).
    ComplexMorphism as_complex_morphism(std::shared_ptr<const RelationalComplex> source) const;

private:
    std::vector<std::map<std::string, SimplicialChain>> images_;
    std::map<std::string, VertexLabel> labels_;
    std::map<VertexLabel, std::string> vertices_;
    std::map<std::string, Apex> apexes_;
    LabelCoordinates coordinates_;
};

/// Labels 0-cells 1..#X_0 in lexicographic name order.
std::map<std::string, VertexLabel> lexicographic_labelling(const RelationalComplex& complex);

/// Cone decomposition: every cell of dimension >= 2 gets a fresh apex at the
/// centroid of its vertices; mu_{k+1}(c) = apex_c (x) mu_k(boundary c).
DecompositionMorphism apex_triangulate(const RelationalComplex& complex);

/// Cohen-Hickey style decomposition reusing the minimal boundary vertex of each
/// cell as its apex and dropping the simplices through it. `labelling`
/// overrides the lexicographic vertex order.
DecompositionMorphism cohen_hickey(const RelationalComplex& complex,
                                   const std::optional<std::map<std::string, VertexLabel>>& labelling = std::nullopt);

enum class DecompositionMethod { Apex, CohenHickey };

DecompositionMorphism decompose(const RelationalComplex& complex, DecompositionMethod method);

/// Determinant of the edge-vector matrix (n! times the signed volume).
/// Throws DimensionMismatch unless the simplex dimension equals the embedding dimension.
double simplex_det(const Simplex& simplex, const LabelCoordinates& coordinates);

/// sum alpha_i det(sigma_i) / n!
double chain_volume(const SimplicialChain& chain, const LabelCoordinates& coordinates);

/// Signed count sum alpha_i sign(det sigma_i) [p strictly inside sigma_i].
/// Throws BoundaryPoint when p lies within `boundary_tolerance` of a facet of a
/// non-flat simplex of the chain.
int winding_number(const Point& p, const SimplicialChain& chain, const LabelCoordinates& coordinates,
                   double boundary_tolerance);

/// Bounding box of the labelled points referenced by the chain.
BoundingBox chain_bounding_box(const SimplicialChain& chain, const LabelCoordinates& coordinates);

} // namespace polyoverlay
