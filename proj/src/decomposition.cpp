#include "polyoverlay/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "polyoverlay/errors.hpp"

namespace polyoverlay {

// ---------------------------------------------------------------------------
// Simplex and SimplicialChain

bool Simplex::is_degenerate() const
{
    std::vector<VertexLabel> sorted = vertices_;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

bool Simplex::is_ascending() const
{
    return std::adjacent_find(vertices_.begin(), vertices_.end(),
                              [](VertexLabel a, VertexLabel b) { return a >= b; }) == vertices_.end();
}

bool Simplex::contains(VertexLabel v) const
{
    return std::find(vertices_.begin(), vertices_.end(), v) != vertices_.end();
}

std::string Simplex::name() const
{
    std::string out;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (i)
            out += '.';
        out += std::to_string(vertices_[i]);
    }
    return out;
}

Coefficient SimplicialChain::coefficient(const Simplex& s) const
{
    auto it = terms_.find(s);
    return it == terms_.end() ? 0 : it->second;
}

void SimplicialChain::add(const Simplex& s, Coefficient value)
{
    if (value == 0)
        return;
    if (s.dimension() != dimension_)
        throw DimensionMismatch("adding a " + std::to_string(s.dimension()) + "-simplex to a " +
                                std::to_string(dimension_) + "-chain");
    auto [it, inserted] = terms_.try_emplace(s, value);
    if (inserted)
        return;
    it->second = checked_add(it->second, value);
    if (it->second == 0)
        terms_.erase(it);
}

SimplicialChain& SimplicialChain::operator+=(const SimplicialChain& other)
{
    if (empty() && other.dimension_ != dimension_)
        dimension_ = other.dimension_;
    for (const auto& [s, value] : other.terms_)
        add(s, value);
    return *this;
}

SimplicialChain SimplicialChain::operator-() const
{
    return Coefficient{-1} * *this;
}

SimplicialChain operator*(Coefficient s, const SimplicialChain& c)
{
    SimplicialChain result(c.dimension_);
    if (s == 0)
        return result;
    for (const auto& [simplex, value] : c.terms_)
        result.terms_.emplace(simplex, checked_mul(s, value));
    return result;
}

std::string to_string(const SimplicialChain& chain)
{
    if (chain.empty())
        return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [s, value] : chain.terms()) {
        if (!first || value < 0)
            out << (value < 0 ? "-" : "+");
        if (std::abs(value) != 1)
            out << std::abs(value);
        out << '<';
        for (std::size_t i = 0; i < s.vertices().size(); ++i)
            out << (i ? "," : "") << s.vertices()[i];
        out << '>';
        first = false;
    }
    return out.str();
}

SimplicialChain simplicial_boundary(const SimplicialChain& chain)
{
    if (chain.dimension() < 1)
        throw DimensionMismatch("simplicial boundary of a 0-chain");
    SimplicialChain result(chain.dimension() - 1);
    for (const auto& [s, value] : chain.terms()) {
        const auto& v = s.vertices();
        for (std::size_t i = 0; i < v.size(); ++i) {
            std::vector<VertexLabel> face;
            face.reserve(v.size() - 1);
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (j != i)
                    face.push_back(v[j]);
            }
            result.add(Simplex(std::move(face)), i % 2 == 0 ? value : checked_mul(-1, value));
        }
    }
    return result;
}

SimplicialChain cone(VertexLabel apex, const SimplicialChain& chain)
{
    SimplicialChain result(chain.dimension() + 1);
    for (const auto& [s, value] : chain.terms()) {
        std::vector<VertexLabel> v;
        v.reserve(s.vertices().size() + 1);
        v.push_back(apex);
        v.insert(v.end(), s.vertices().begin(), s.vertices().end());
        result.add(Simplex(std::move(v)), value);
    }
    return result;
}

// ---------------------------------------------------------------------------
// DecompositionMorphism

DecompositionMorphism::DecompositionMorphism(std::vector<std::map<std::string, SimplicialChain>> images,
                                             std::map<std::string, VertexLabel> labels,
                                             std::map<std::string, Apex> apexes,
                                             LabelCoordinates coordinates)
    : images_(std::move(images)), labels_(std::move(labels)), apexes_(std::move(apexes)),
      coordinates_(std::move(coordinates))
{
    for (const auto& [name, label] : labels_)
        vertices_.emplace(label, name);
}

const SimplicialChain& DecompositionMorphism::image(const CellId& cell) const
{
    if (cell.dimension < 0 || cell.dimension > dimension())
        throw DimensionMismatch("no image for " + to_string(cell));
    const auto& layer = images_[cell.dimension];
    auto it = layer.find(cell.name);
    if (it == layer.end())
        throw InvalidComplex("no image for " + to_string(cell));
    return it->second;
}

std::optional<std::string> DecompositionMorphism::vertex_of(VertexLabel label) const
{
    auto it = vertices_.find(label);
    if (it == vertices_.end())
        return std::nullopt;
    return it->second;
}

std::vector<SourcedSimplex> DecompositionMorphism::top_simplices() const
{
    std::vector<SourcedSimplex> out;
    if (images_.empty())
        return out;
    for (const auto& [cell, chain] : images_.back()) {
        for (const auto& [s, value] : chain.terms())
            out.push_back({s, value, cell});
    }
    return out;
}

ComplexMorphism DecompositionMorphism::as_complex_morphism(std::shared_ptr<const RelationalComplex> source) const
{
    const int n = dimension();
    // Collect every simplex of the images together with all of its faces.
    std::vector<std::set<Simplex>> simplices(n + 1);
    for (int k = 0; k <= n; ++k) {
        for (const auto& [cell, chain] : images_[k]) {
            for (const auto& [s, value] : chain.terms())
                simplices[k].insert(s);
        }
    }
    for (int k = n; k >= 1; --k) {
        for (const auto& s : simplices[k]) {
            SimplicialChain single(k);
            single.add(s, 1);
            const SimplicialChain faces = simplicial_boundary(single);
            for (const auto& [face, value] : faces.terms())
                simplices[k - 1].insert(face);
        }
    }

    ComplexBuilder builder(n, source->embedding_dimension());
    for (const auto& s : simplices[0]) {
        builder.add_cell(0, s.name());
        auto it = coordinates_.find(s.vertices().front());
        if (it != coordinates_.end())
            builder.set_coordinates(s.name(), it->second);
    }
    for (int k = 1; k <= n; ++k) {
        for (const auto& s : simplices[k])
            builder.add_cell(k, s.name());
        for (const auto& s : simplices[k]) {
            SimplicialChain single(k);
            single.add(s, 1);
            const SimplicialChain faces = simplicial_boundary(single);
            for (const auto& [face, value] : faces.terms())
                builder.add_incidence(s.name(), face.name(), value);
        }
    }

    ComplexMorphism m;
    m.source = std::move(source);
    m.target = std::make_shared<const RelationalComplex>(builder.build());
    for (int k = 0; k <= n; ++k) {
        SparseIncidenceMatrix f(k, k);
        for (const auto& [cell, chain] : images_[k]) {
            for (const auto& [s, value] : chain.terms())
                f.add(cell, s.name(), value);
        }
        m.maps.push_back(std::move(f));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Decomposition algorithms

std::map<std::string, VertexLabel> lexicographic_labelling(const RelationalComplex& complex)
{
    std::map<std::string, VertexLabel> labels;
    VertexLabel next = 1;
    for (const auto& v : complex.cells(0))
        labels.emplace(v, next++);
    return labels;
}

namespace {

void require_valid(const RelationalComplex& complex)
{
    const auto report = validate_complex(complex);
    if (!report.ok())
        throw InvalidComplex("invalid complex:\n" + report.to_string());
}

using Images = std::vector<std::map<std::string, SimplicialChain>>;

// mu_0 and mu_1 are shared by both methods. An edge e with boundary vertices
// a, b maps to D_1(e, max) <min, max>.
Images low_images(const RelationalComplex& complex, const std::map<std::string, VertexLabel>& labels)
{
    Images images(complex.dimension() + 1);
    for (const auto& v : complex.cells(0)) {
        SimplicialChain chain(0);
        chain.add(Simplex{labels.at(v)}, 1);
        images[0].emplace(v, std::move(chain));
    }
    if (complex.dimension() < 1)
        return images;
    for (const auto& e : complex.cells(1)) {
        const Chain b = complex.boundary({1, e});
        if (b.terms().size() != 2)
            throw InvalidComplex("edge '" + e + "' is a loop or lacks two boundary vertices");
        auto first = b.terms().begin();
        auto second = std::next(first);
        const VertexLabel la = labels.at(first->first);
        const VertexLabel lb = labels.at(second->first);
        SimplicialChain chain(1);
        if (la < lb)
            chain.add(Simplex{la, lb}, second->second);
        else
            chain.add(Simplex{lb, la}, first->second);
        images[1].emplace(e, std::move(chain));
    }
    return images;
}

SimplicialChain image_of_boundary(const RelationalComplex& complex, const Images& images, const CellId& cell)
{
    SimplicialChain result(cell.dimension - 1);
    const Chain boundary = complex.boundary(cell);
    for (const auto& [d, alpha] : boundary.terms())
        result += alpha * images[cell.dimension - 1].at(d);
    return result;
}

LabelCoordinates vertex_coordinates(const RelationalComplex& complex, const std::map<std::string, VertexLabel>& labels)
{
    LabelCoordinates coords;
    for (const auto& [name, label] : labels) {
        if (const Point* p = complex.coordinate(name))
            coords.emplace(label, *p);
    }
    return coords;
}

} // namespace

DecompositionMorphism apex_triangulate(const RelationalComplex& complex)
{
    require_valid(complex);
    const auto labels = lexicographic_labelling(complex);
    Images images = low_images(complex, labels);
    LabelCoordinates coords = vertex_coordinates(complex, labels);
    std::map<std::string, Apex> apexes;

    // Vertex closure per cell, for the apex centroids.
    std::vector<std::map<std::string, std::set<std::string>>> vertices(complex.dimension() + 1);
    for (const auto& v : complex.cells(0))
        vertices[0][v] = {v};

    VertexLabel next_apex = 0;
    for (int k = 1; k <= complex.dimension(); ++k) {
        for (const auto& c : complex.cells(k)) {
            auto& closure = vertices[k][c];
            const Chain boundary = complex.boundary({k, c});
            for (const auto& [d, alpha] : boundary.terms())
                closure.insert(vertices[k - 1][d].begin(), vertices[k - 1][d].end());
            if (k < 2)
                continue;

            Point centroid(complex.embedding_dimension(), 0.0);
            for (const auto& v : closure) {
                const Point& p = *complex.coordinate(v);
                for (std::size_t i = 0; i < p.size(); ++i)
                    centroid[i] += p[i];
            }
            for (double& x : centroid)
                x /= static_cast<double>(std::max<std::size_t>(closure.size(), 1));

            const VertexLabel apex = next_apex--;
            apexes.emplace(c, Apex{apex, centroid});
            coords.emplace(apex, centroid);
            images[k].emplace(c, cone(apex, image_of_boundary(complex, images, {k, c})));
        }
    }
    return DecompositionMorphism(std::move(images), labels, std::move(apexes), std::move(coords));
}

DecompositionMorphism cohen_hickey(const RelationalComplex& complex,
                                   const std::optional<std::map<std::string, VertexLabel>>& labelling)
{
    require_valid(complex);
    std::map<std::string, VertexLabel> labels = labelling ? *labelling : lexicographic_labelling(complex);
    {
        std::set<VertexLabel> used;
        for (const auto& v : complex.cells(0)) {
            auto it = labels.find(v);
            if (it == labels.end() || it->second < 1 || !used.insert(it->second).second)
                throw InvalidComplex("vertex labelling must map every vertex to a distinct positive integer");
        }
    }

    Images images = low_images(complex, labels);
    for (int k = 2; k <= complex.dimension(); ++k) {
        for (const auto& c : complex.cells(k)) {
            const SimplicialChain boundary_image = image_of_boundary(complex, images, {k, c});
            SimplicialChain image(k);
            if (!boundary_image.empty()) {
                // Every simplex is ascending, so its first label is its minimum.
                VertexLabel apex = boundary_image.terms().begin()->first.vertices().front();
                for (const auto& [s, value] : boundary_image.terms())
                    apex = std::min(apex, s.vertices().front());
                SimplicialChain kept(k - 1);
                for (const auto& [s, value] : boundary_image.terms()) {
                    if (!s.contains(apex))
                        kept.add(s, value);
                }
                image = cone(apex, kept);
            }
            images[k].emplace(c, std::move(image));
        }
    }
    LabelCoordinates coords = vertex_coordinates(complex, labels);
    return DecompositionMorphism(std::move(images), std::move(labels), {}, std::move(coords));
}

DecompositionMorphism decompose(const RelationalComplex& complex, DecompositionMethod method)
{
    return method == DecompositionMethod::Apex ? apex_triangulate(complex) : cohen_hickey(complex);
}

// ---------------------------------------------------------------------------
// Geometry of simplices

namespace {

const Point& coordinate_of(VertexLabel label, const LabelCoordinates& coordinates)
{
    auto it = coordinates.find(label);
    if (it == coordinates.end())
        throw InvalidComplex("no coordinates for vertex label " + std::to_string(label));
    return it->second;
}

Eigen::MatrixXd edge_matrix(const Simplex& simplex, const LabelCoordinates& coordinates)
{
    const int n = simplex.dimension();
    const Point& origin = coordinate_of(simplex.vertices().front(), coordinates);
    if (static_cast<int>(origin.size()) != n)
        throw DimensionMismatch("simplex of dimension " + std::to_string(n) + " embedded in dimension " +
                                std::to_string(origin.size()));
    Eigen::MatrixXd edges(n, n);
    for (int j = 0; j < n; ++j) {
        const Point& p = coordinate_of(simplex.vertices()[j + 1], coordinates);
        if (static_cast<int>(p.size()) != n)
            throw DimensionMismatch("inconsistent coordinate dimensions");
        for (int i = 0; i < n; ++i)
            edges(i, j) = p[i] - origin[i];
    }
    return edges;
}

double factorial(int n)
{
    double f = 1.0;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

} // namespace

double simplex_det(const Simplex& simplex, const LabelCoordinates& coordinates)
{
    if (simplex.dimension() < 1)
        throw DimensionMismatch("determinant of a 0-simplex");
    return edge_matrix(simplex, coordinates).determinant();
}

double chain_volume(const SimplicialChain& chain, const LabelCoordinates& coordinates)
{
    double volume = 0.0;
    for (const auto& [s, value] : chain.terms())
        volume += static_cast<double>(value) * simplex_det(s, coordinates);
    return volume / factorial(chain.dimension());
}

int winding_number(const Point& p, const SimplicialChain& chain, const LabelCoordinates& coordinates,
                   double boundary_tolerance)
{
    long long winding = 0;
    for (const auto& [s, value] : chain.terms()) {
        const int n = s.dimension();
        if (static_cast<int>(p.size()) != n)
            throw DimensionMismatch("winding number of a point in dimension " + std::to_string(p.size()) +
                                    " against " + std::to_string(n) + "-simplices");
        const Eigen::MatrixXd edges = edge_matrix(s, coordinates);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(edges);
        const double det = lu.determinant();
        double scale = 1.0;
        for (int j = 0; j < n; ++j)
            scale *= edges.col(j).norm();
        if (scale == 0.0 || std::abs(det) <= 1e-12 * scale)
            continue; // flat simplex: winding zero off a null set

        const Point& origin = coordinate_of(s.vertices().front(), coordinates);
        Eigen::VectorXd offset(n);
        for (int i = 0; i < n; ++i)
            offset(i) = p[i] - origin[i];
        const Eigen::MatrixXd inverse = lu.inverse();
        const Eigen::VectorXd lambda = inverse * offset;

        // Signed distance of p to each facet: lambda_i / |grad lambda_i|.
        double nearest = (1.0 - lambda.sum()) / inverse.colwise().sum().norm();
        for (int i = 0; i < n; ++i)
            nearest = std::min(nearest, lambda(i) / inverse.row(i).norm());

        if (std::abs(nearest) <= boundary_tolerance)
            throw BoundaryPoint("point lies within tolerance of a facet of simplex <" + s.name() + ">");
        if (nearest > 0.0)
            winding += value * (det > 0.0 ? 1 : -1);
    }
    return static_cast<int>(winding);
}

BoundingBox chain_bounding_box(const SimplicialChain& chain, const LabelCoordinates& coordinates)
{
    BoundingBox box;
    for (const auto& [s, value] : chain.terms()) {
        for (VertexLabel v : s.vertices())
            box.extend(coordinate_of(v, coordinates));
    }
    return box;
}

} // namespace polyoverlay
