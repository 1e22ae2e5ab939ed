#include "polyoverlay/complex_core.hpp"

#include <cctype>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "polyoverlay/errors.hpp"

namespace polyoverlay {

Coefficient checked_add(Coefficient a, Coefficient b)
{
    Coefficient result = 0;
    if (__builtin_add_overflow(a, b, &result))
        throw CoefficientOverflow("coefficient overflow in addition");
    return result;
}

Coefficient checked_mul(Coefficient a, Coefficient b)
{
    Coefficient result = 0;
    if (__builtin_mul_overflow(a, b, &result))
        throw CoefficientOverflow("coefficient overflow in multiplication");
    return result;
}

std::string to_string(const CellId& id)
{
    return id.name + "/" + std::to_string(id.dimension);
}

// ---------------------------------------------------------------------------
// Chain

Coefficient Chain::coefficient(const std::string& name) const
{
    auto it = terms_.find(name);
    return it == terms_.end() ? 0 : it->second;
}

void Chain::add(const std::string& name, Coefficient value)
{
    if (value == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(name, value);
    if (inserted)
        return;
    it->second = checked_add(it->second, value);
    if (it->second == 0)
        terms_.erase(it);
}

Chain& Chain::operator+=(const Chain& other)
{
    if (other.dimension_ != dimension_ && !other.empty() && !empty())
        throw DimensionMismatch("adding chains of dimension " + std::to_string(dimension_) +
                                " and " + std::to_string(other.dimension_));
    if (empty())
        dimension_ = other.dimension_;
    for (const auto& [name, value] : other.terms_)
        add(name, value);
    return *this;
}

Chain Chain::operator-() const
{
    return Coefficient{-1} * *this;
}

Chain operator*(Coefficient s, const Chain& c)
{
    Chain result(c.dimension_);
    if (s == 0)
        return result;
    for (const auto& [name, value] : c.terms_)
        result.terms_.emplace(name, checked_mul(s, value));
    return result;
}

// ---------------------------------------------------------------------------
// SparseIncidenceMatrix

Coefficient SparseIncidenceMatrix::at(const std::string& row, const std::string& col) const
{
    auto it = entries_.find({row, col});
    return it == entries_.end() ? 0 : it->second;
}

void SparseIncidenceMatrix::add(const std::string& row, const std::string& col, Coefficient value)
{
    if (value == 0)
        return;
    auto [it, inserted] = entries_.try_emplace({row, col}, value);
    if (inserted)
        return;
    it->second = checked_add(it->second, value);
    if (it->second == 0)
        entries_.erase(it);
}

Chain SparseIncidenceMatrix::row(const std::string& name) const
{
    Chain chain(col_dimension_);
    for (auto it = entries_.lower_bound({name, std::string()}); it != entries_.end() && it->first.first == name; ++it)
        chain.add(it->first.second, it->second);
    return chain;
}

SparseIncidenceMatrix SparseIncidenceMatrix::operator-(const SparseIncidenceMatrix& other) const
{
    if (row_dimension_ != other.row_dimension_ || col_dimension_ != other.col_dimension_)
        throw DimensionMismatch("subtracting matrices of different shape");
    SparseIncidenceMatrix result = *this;
    for (const auto& [key, value] : other.entries_)
        result.add(key.first, key.second, checked_mul(-1, value));
    return result;
}

SparseIncidenceMatrix multiply(const SparseIncidenceMatrix& m1, const SparseIncidenceMatrix& m2)
{
    if (m1.col_dimension() != m2.row_dimension())
        throw DimensionMismatch("multiply: column dimension " + std::to_string(m1.col_dimension()) +
                                " does not match row dimension " + std::to_string(m2.row_dimension()));

    // Index M2 by row, the join attribute of the SQL product.
    std::map<std::string, std::vector<std::pair<std::string, Coefficient>>> rows;
    for (const auto& [key, value] : m2.entries())
        rows[key.first].emplace_back(key.second, value);

    SparseIncidenceMatrix result(m1.row_dimension(), m2.col_dimension());
    for (const auto& [key, sigma1] : m1.entries()) {
        auto it = rows.find(key.second);
        if (it == rows.end())
            continue;
        for (const auto& [col, sigma2] : it->second)
            result.add(key.first, col, checked_mul(sigma1, sigma2));
    }
    return result;
}

// ---------------------------------------------------------------------------
// RelationalComplex

const std::set<std::string>& RelationalComplex::cells(int k) const
{
    static const std::set<std::string> none;
    if (k < 0 || k >= static_cast<int>(cells_.size()))
        return none;
    return cells_[k];
}

std::size_t RelationalComplex::cell_count() const
{
    std::size_t count = 0;
    for (const auto& layer : cells_)
        count += layer.size();
    return count;
}

bool RelationalComplex::contains(const CellId& id) const
{
    return cells(id.dimension).count(id.name) != 0;
}

const SparseIncidenceMatrix& RelationalComplex::boundary_matrix(int k) const
{
    if (k < 1 || k > dimension_)
        throw DimensionMismatch("no boundary matrix D_" + std::to_string(k) + " in a complex of dimension " +
                                std::to_string(dimension_));
    return boundaries_[k];
}

Chain RelationalComplex::boundary(const CellId& cell) const
{
    if (cell.dimension == 0)
        return Chain(-1);
    return boundary_matrix(cell.dimension).row(cell.name);
}

const Point* RelationalComplex::coordinate(const std::string& vertex) const
{
    auto it = coordinates_.find(vertex);
    return it == coordinates_.end() ? nullptr : &it->second;
}

BoundingBox RelationalComplex::bounding_box() const
{
    BoundingBox box;
    for (const auto& [name, p] : coordinates_)
        box.extend(p);
    return box;
}

// ---------------------------------------------------------------------------
// ComplexBuilder

ComplexBuilder::ComplexBuilder(int dimension, int embedding_dimension)
{
    if (dimension < 0 || embedding_dimension < dimension)
        throw InvalidComplex("complex dimension " + std::to_string(dimension) + " with embedding dimension " +
                             std::to_string(embedding_dimension));
    complex_.dimension_ = dimension;
    complex_.embedding_dimension_ = embedding_dimension;
    complex_.cells_.assign(dimension + 1, {});
    complex_.boundaries_.clear();
    complex_.boundaries_.emplace_back(0, 0);
    for (int k = 1; k <= dimension; ++k)
        complex_.boundaries_.emplace_back(k, k - 1);
}

ComplexBuilder& ComplexBuilder::add_vertex(const std::string& name, Point coordinates)
{
    add_cell(0, name);
    return set_coordinates(name, std::move(coordinates));
}

ComplexBuilder& ComplexBuilder::add_cell(int dimension, const std::string& name)
{
    if (name.empty())
        throw InvalidComplex("empty cell name");
    for (char ch : name) {
        if (std::isspace(static_cast<unsigned char>(ch)))
            throw InvalidComplex("cell name '" + name + "' contains whitespace");
    }
    if (dimension < 0 || dimension > complex_.dimension_)
        throw InvalidComplex("cell '" + name + "' has dimension " + std::to_string(dimension) +
                             " outside 0.." + std::to_string(complex_.dimension_));
    if (!dimension_of_.emplace(name, dimension).second)
        throw InvalidComplex("duplicate cell name '" + name + "'");
    complex_.cells_[dimension].insert(name);
    return *this;
}

ComplexBuilder& ComplexBuilder::set_coordinates(const std::string& vertex, Point coordinates)
{
    if (dimension_of(vertex) != 0)
        throw InvalidComplex("coordinates given for non-vertex '" + vertex + "'");
    if (static_cast<int>(coordinates.size()) != complex_.embedding_dimension_)
        throw DimensionMismatch("vertex '" + vertex + "' has " + std::to_string(coordinates.size()) +
                                " coordinates, expected " + std::to_string(complex_.embedding_dimension_));
    complex_.coordinates_[vertex] = std::move(coordinates);
    return *this;
}

int ComplexBuilder::dimension_of(const std::string& name) const
{
    auto it = dimension_of_.find(name);
    if (it == dimension_of_.end())
        throw InvalidComplex("undeclared cell '" + name + "'");
    return it->second;
}

ComplexBuilder& ComplexBuilder::add_incidence(const std::string& cell, const std::string& boundary, Coefficient sigma)
{
    if (sigma == 0)
        throw InvalidComplex("zero incidence " + cell + " -> " + boundary + " cannot be stored");
    const int k = dimension_of(cell);
    const int j = dimension_of(boundary);
    if (k == 0 || j != k - 1)
        throw InvalidComplex("incidence " + cell + " -> " + boundary + " does not lower the dimension by one");
    auto& matrix = complex_.boundaries_[k];
    if (matrix.at(cell, boundary) != 0)
        throw InvalidComplex("duplicate incidence " + cell + " -> " + boundary);
    matrix.add(cell, boundary, sigma);
    return *this;
}

RelationalComplex ComplexBuilder::build() const
{
    return complex_;
}

// ---------------------------------------------------------------------------
// Validation

std::string ValidationReport::to_string() const
{
    std::ostringstream out;
    for (const auto& issue : issues)
        out << issue.message << '\n';
    return out.str();
}

ValidationReport validate_complex(const RelationalComplex& complex)
{
    ValidationReport report;
    const int n = complex.dimension();

    for (int k = 1; k < n; ++k) {
        const auto product = multiply(complex.boundary_matrix(k + 1), complex.boundary_matrix(k));
        for (const auto& [key, value] : product.entries()) {
            report.issues.push_back({ValidationIssue::Kind::ChainCondition, k + 1, key.first, key.second, value,
                                     "D" + std::to_string(k + 1) + "*D" + std::to_string(k) + " has entry (" +
                                         key.first + ", " + key.second + ") = " + std::to_string(value)});
        }
    }

    if (n >= 1) {
        const auto& d1 = complex.boundary_matrix(1);
        for (const auto& edge : complex.cells(1)) {
            const Chain b = d1.row(edge);
            bool good = b.terms().size() == 2;
            if (good) {
                auto first = b.terms().begin();
                auto second = std::next(first);
                good = first->second == -second->second;
            }
            if (!good) {
                report.issues.push_back({ValidationIssue::Kind::EdgeBoundary, 1, edge, "", 0,
                                         "edge '" + edge + "' does not have exactly two opposite boundary vertices"});
            }
        }
    }

    for (const auto& vertex : complex.cells(0)) {
        if (complex.coordinate(vertex) == nullptr) {
            report.issues.push_back({ValidationIssue::Kind::MissingCoordinates, 0, vertex, "", 0,
                                     "vertex '" + vertex + "' has no coordinates"});
        }
    }
    return report;
}

Chain chain_boundary(const RelationalComplex& complex, const Chain& chain)
{
    if (chain.dimension() < 1)
        throw InvalidComplex("boundary of a 0-chain is undefined");
    const auto& matrix = complex.boundary_matrix(chain.dimension());
    Chain result(chain.dimension() - 1);
    for (const auto& [name, value] : chain.terms())
        result += value * matrix.row(name);
    return result;
}

// ---------------------------------------------------------------------------
// Topological data types

TopologicalDataType TopologicalDataType::from_complex(const RelationalComplex& complex)
{
    TopologicalDataType space;
    for (int k = 0; k <= complex.dimension(); ++k) {
        for (const auto& name : complex.cells(k))
            space.points.insert({k, name});
    }
    for (int k = 1; k <= complex.dimension(); ++k) {
        for (const auto& [key, value] : complex.boundary_matrix(k).entries())
            space.incidence.insert({{k, key.first}, {k - 1, key.second}});
    }
    return space;
}

TopologicalDataType::Relation closure(const TopologicalDataType& space)
{
    std::map<CellId, std::vector<CellId>> successors;
    for (const auto& [from, to] : space.incidence)
        successors[from].push_back(to);

    TopologicalDataType::Relation result;
    std::set<CellId> nodes = space.points;
    for (const auto& [from, to] : space.incidence) {
        nodes.insert(from);
        nodes.insert(to);
    }
    for (const auto& start : nodes) {
        std::set<CellId> seen{start};
        std::deque<CellId> queue{start};
        while (!queue.empty()) {
            const CellId current = queue.front();
            queue.pop_front();
            auto it = successors.find(current);
            if (it == successors.end())
                continue;
            for (const auto& next : it->second) {
                if (seen.insert(next).second)
                    queue.push_back(next);
            }
        }
        for (const auto& reached : seen)
            result.insert({start, reached});
    }
    return result;
}

bool is_open(const std::set<CellId>& subset, const TopologicalDataType& space)
{
    for (const auto& a : subset) {
        if (space.points.count(a) == 0)
            throw std::invalid_argument("is_open: " + to_string(a) + " is not a point of the space");
    }
    for (const auto& [x, a] : space.incidence) {
        if (subset.count(a) != 0 && subset.count(x) == 0)
            return false;
    }
    return true;
}

bool is_continuous(const std::map<CellId, CellId>& map,
                   const TopologicalDataType& source,
                   const TopologicalDataType& target)
{
    for (const auto& p : source.points) {
        auto it = map.find(p);
        if (it == map.end())
            throw std::invalid_argument("is_continuous: map is undefined at " + to_string(p));
        if (target.points.count(it->second) == 0)
            throw std::invalid_argument("is_continuous: image of " + to_string(p) + " is not a target point");
    }
    const auto reach = closure(target);
    for (const auto& [a, b] : source.incidence) {
        if (reach.count({map.at(a), map.at(b)}) == 0)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Morphisms

ComplexMorphism ComplexMorphism::identity(std::shared_ptr<const RelationalComplex> complex)
{
    ComplexMorphism m;
    m.source = complex;
    m.target = complex;
    for (int k = 0; k <= complex->dimension(); ++k) {
        SparseIncidenceMatrix f(k, k);
        for (const auto& name : complex->cells(k))
            f.add(name, name, 1);
        m.maps.push_back(std::move(f));
    }
    return m;
}

ValidationReport validate_morphism(const ComplexMorphism& morphism)
{
    if (!morphism.source || !morphism.target)
        throw InvalidComplex("morphism without source or target");
    const int n = morphism.source->dimension();
    if (n != morphism.target->dimension())
        throw DimensionMismatch("morphism between complexes of dimension " + std::to_string(n) + " and " +
                                std::to_string(morphism.target->dimension()));
    if (static_cast<int>(morphism.maps.size()) != n + 1)
        throw DimensionMismatch("morphism needs one map per dimension");

    ValidationReport report;
    for (int k = 1; k <= n; ++k) {
        const auto lhs = multiply(morphism.source->boundary_matrix(k), morphism.maps[k - 1]);
        const auto rhs = multiply(morphism.maps[k], morphism.target->boundary_matrix(k));
        const auto residue = lhs - rhs;
        for (const auto& [key, value] : residue.entries()) {
            report.issues.push_back({ValidationIssue::Kind::MorphismResidue, k, key.first, key.second, value,
                                     "D" + std::to_string(k) + "*F" + std::to_string(k - 1) + " - F" +
                                         std::to_string(k) + "*B" + std::to_string(k) + " has entry (" + key.first +
                                         ", " + key.second + ") = " + std::to_string(value)});
        }
    }
    return report;
}

} // namespace polyoverlay
