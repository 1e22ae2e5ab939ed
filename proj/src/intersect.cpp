#include "polyoverlay/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "polyoverlay/decomposition.hpp"
#include "polyoverlay/dense_solver.hpp"
#include "polyoverlay/errors.hpp"

namespace polyoverlay {

InactiveSet make_inactive_set(std::vector<VertexId> ids)
{
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::string set_name(const InactiveSet& set)
{
    std::string out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i)
            out += '.';
        out += std::to_string(set[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// KKT assembly and restricted solves

std::size_t KKTSystem::index_of(VertexId id) const
{
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end())
        throw std::out_of_range("vertex id " + std::to_string(id) + " is not part of the system");
    return static_cast<std::size_t>(it - ids.begin());
}

double KKTSystem::quadratic_form(const Eigen::VectorXd& x) const
{
    const auto n = static_cast<Eigen::Index>(vertex_count());
    return x.head(n).dot(matrix.topLeftCorner(n, n) * x.head(n));
}

namespace {

void check_simplex(const GeometricSimplex& s, const char* which)
{
    if (s.ids.empty())
        throw std::invalid_argument(std::string("simplex ") + which + " has no vertices");
    if (s.ids.size() != s.points.size())
        throw std::invalid_argument(std::string("simplex ") + which + " has mismatched ids and points");
}

Eigen::VectorXd as_vector(const Point& p)
{
    return Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
}

} // namespace

KKTSystem assemble_kkt(const GeometricSimplex& a, const GeometricSimplex& b)
{
    check_simplex(a, "a");
    check_simplex(b, "b");
    const std::size_t d = a.points.front().size();
    for (const auto* s : {&a, &b}) {
        for (const auto& p : s->points) {
            if (p.size() != d)
                throw DimensionMismatch("simplices must share one embedding dimension");
        }
    }

    KKTSystem k;
    k.a_count = a.ids.size();
    k.b_count = b.ids.size();
    k.ids = a.ids;
    k.ids.insert(k.ids.end(), b.ids.begin(), b.ids.end());
    if (make_inactive_set(k.ids).size() != k.ids.size())
        throw std::invalid_argument("vertex ids of the two simplices must be distinct");

    std::vector<Eigen::VectorXd> v;
    for (const auto& p : a.points)
        v.push_back(as_vector(p));
    for (const auto& p : b.points)
        v.push_back(as_vector(p));

    const auto n = static_cast<Eigen::Index>(k.vertex_count());
    k.matrix = Eigen::MatrixXd::Zero(n + 2, n + 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const bool same = k.in_a(i) == k.in_a(j);
            k.matrix(i, j) = (same ? 1.0 : -1.0) * v[i].dot(v[j]);
        }
        const Eigen::Index lagrangian = k.in_a(i) ? n : n + 1;
        k.matrix(i, lagrangian) = 1.0;
        k.matrix(lagrangian, i) = 1.0;
    }
    k.rhs = Eigen::VectorXd::Zero(n + 2);
    k.rhs(n) = 1.0;
    k.rhs(n + 1) = 1.0;
    return k;
}

namespace {

std::vector<Eigen::Index> restricted_rows(const KKTSystem& system, const InactiveSet& set)
{
    std::vector<Eigen::Index> rows;
    bool has_a = false, has_b = false;
    for (VertexId id : set) {
        const std::size_t row = system.index_of(id);
        (system.in_a(row) ? has_a : has_b) = true;
        rows.push_back(static_cast<Eigen::Index>(row));
    }
    if (!has_a || !has_b)
        throw std::invalid_argument("inactive set " + set_name(set) + " must hold vertices of both simplices");
    std::sort(rows.begin(), rows.end());
    const auto n = static_cast<Eigen::Index>(system.vertex_count());
    rows.push_back(n);
    rows.push_back(n + 1);
    return rows;
}

} // namespace

Eigen::MatrixXd restricted_matrix(const KKTSystem& system, const InactiveSet& set)
{
    const auto rows = restricted_rows(system, set);
    const auto m = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd r(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j)
            r(i, j) = system.matrix(rows[i], rows[j]);
    }
    return r;
}

std::optional<KKTSolution> solve_restricted(const KKTSystem& system, const InactiveSet& set,
                                            const Tolerances& tolerances)
{
    const auto rows = restricted_rows(system, set);
    const auto m = static_cast<Eigen::Index>(rows.size());
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i)
        rhs(i) = system.rhs(rows[i]);
    auto y = solve_partial_pivot(restricted_matrix(system, set), rhs, tolerances.pivot);
    if (!y)
        return std::nullopt;

    KKTSolution s;
    s.x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(system.vertex_count()));
    s.feasible = true;
    for (Eigen::Index i = 0; i + 2 < m; ++i) {
        s.x(rows[i]) = (*y)(i);
        if ((*y)(i) < -tolerances.feasibility)
            s.feasible = false;
    }
    s.lambda_a = (*y)(m - 2);
    s.lambda_b = (*y)(m - 1);
    return s;
}

int solution_dimension(const KKTSystem& system, const InactiveSet& set, const Tolerances& tolerances)
{
    const Eigen::MatrixXd r = restricted_matrix(system, set);
    return static_cast<int>(r.rows()) - pivoted_rank(r, tolerances.pivot);
}

// ---------------------------------------------------------------------------
// Active-set enumeration

namespace {

/// Translates to the joint centroid of the bounding box and scales by the
/// inverse diagonal, so the Gram entries are of order one.
struct Normalized {
    GeometricSimplex a;
    GeometricSimplex b;
};

Normalized normalize(const GeometricSimplex& a, const GeometricSimplex& b)
{
    check_simplex(a, "a");
    check_simplex(b, "b");
    BoundingBox box;
    for (const auto* s : {&a, &b}) {
        for (const auto& p : s->points) {
            if (p.size() != a.points.front().size())
                throw DimensionMismatch("simplices must share one embedding dimension");
            box.extend(p);
        }
    }
    const double diagonal = box.diagonal();
    const double scale = diagonal > 0.0 ? 1.0 / diagonal : 1.0;
    Normalized out{a, b};
    for (auto* s : {&out.a, &out.b}) {
        for (auto& p : s->points) {
            for (std::size_t i = 0; i < p.size(); ++i)
                p[i] = (p[i] - 0.5 * (box.lower[i] + box.upper[i])) * scale;
        }
    }
    return out;
}

InactiveSet support_of(const KKTSystem& system, const InactiveSet& set, const KKTSolution& s, double eps)
{
    InactiveSet support;
    for (VertexId id : set) {
        if (s.x(static_cast<Eigen::Index>(system.index_of(id))) > eps)
            support.push_back(id);
    }
    return support;
}

bool lagrangians_vanish(const KKTSolution& s, double eps)
{
    return std::abs(s.lambda_a) <= eps && std::abs(s.lambda_b) <= eps;
}

std::map<InactiveSet, KKTSolution> enumerate_vertices(const KKTSystem& system, const Tolerances& tol)
{
    const double scale = max_norm(system.matrix);
    const double eps_lambda = tol.lagrangian * scale;
    const double eps_gradient = tol.feasibility * scale;
    const auto n = static_cast<Eigen::Index>(system.vertex_count());

    std::map<InactiveSet, KKTSolution> result;
    std::deque<InactiveSet> pending;
    std::set<InactiveSet> visited;
    for (std::size_t i = 0; i < system.a_count; ++i) {
        for (std::size_t j = system.a_count; j < system.vertex_count(); ++j) {
            InactiveSet seed = make_inactive_set({system.ids[i], system.ids[j]});
            visited.insert(seed);
            pending.push_back(std::move(seed));
        }
    }

    while (!pending.empty()) {
        InactiveSet set = std::move(pending.front());
        pending.pop_front();
        auto solution = solve_restricted(system, set, tol);
        if (!solution)
            throw DegenerateIntersection("singular restricted KKT system for inactive set " + set_name(set));
        if (!solution->feasible)
            continue;

        if (lagrangians_vanish(*solution, eps_lambda)) {
            // A zero coordinate inside the set means the point is already a
            // vertex of a smaller side pair; record it under that support.
            InactiveSet support = support_of(system, set, *solution, tol.feasibility);
            while (support != set) {
                set = support;
                solution = solve_restricted(system, set, tol);
                if (!solution || !solution->feasible || !lagrangians_vanish(*solution, eps_lambda))
                    throw DegenerateIntersection("intersection point of inactive set " + set_name(set) +
                                                 " is not a regular vertex");
                support = support_of(system, set, *solution, tol.feasibility);
            }
            result.emplace(set, *solution);
            continue;
        }

        Eigen::VectorXd padded(n + 2);
        padded << solution->x, solution->lambda_a, solution->lambda_b;
        const Eigen::VectorXd gradient = system.matrix * padded;
        for (Eigen::Index v = 0; v < n; ++v) {
            const VertexId id = system.ids[v];
            if (std::binary_search(set.begin(), set.end(), id) || !(gradient(v) < -eps_gradient))
                continue;
            InactiveSet grown = set;
            grown.insert(std::upper_bound(grown.begin(), grown.end(), id), id);
            if (visited.insert(grown).second)
                pending.push_back(std::move(grown));
        }
    }
    return result;
}

Point point_of(const GeometricSimplex& a, const KKTSolution& s)
{
    Point p(a.points.front().size(), 0.0);
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        for (std::size_t j = 0; j < p.size(); ++j)
            p[j] += s.x(static_cast<Eigen::Index>(i)) * a.points[i][j];
    }
    return p;
}

} // namespace

std::vector<IntersectionVertex> intersection_vertices(const GeometricSimplex& a, const GeometricSimplex& b,
                                                      const Tolerances& tolerances)
{
    const Normalized normalized = normalize(a, b);
    const KKTSystem system = assemble_kkt(normalized.a, normalized.b);
    std::vector<IntersectionVertex> out;
    for (const auto& [set, solution] : enumerate_vertices(system, tolerances))
        out.push_back({set, point_of(a, solution), solution.x});
    return out;
}

std::set<InactiveSet> union_closure(const std::set<InactiveSet>& sets)
{
    std::set<InactiveSet> family = sets;
    std::deque<InactiveSet> fresh(sets.begin(), sets.end());
    while (!fresh.empty()) {
        const InactiveSet s = std::move(fresh.front());
        fresh.pop_front();
        std::vector<InactiveSet> found;
        for (const auto& t : family) {
            InactiveSet u;
            std::set_union(s.begin(), s.end(), t.begin(), t.end(), std::back_inserter(u));
            if (!family.count(u))
                found.push_back(std::move(u));
        }
        for (auto& u : found) {
            if (family.insert(u).second)
                fresh.push_back(std::move(u));
        }
    }
    return family;
}

std::map<InactiveSet, Coefficient> restricted_boundary(const std::set<InactiveSet>& family, const InactiveSet& cell)
{
    if (!family.count(cell))
        throw std::invalid_argument("set " + set_name(cell) + " is not a member of the family");
    std::map<InactiveSet, Coefficient> chain;
    for (std::size_t i = 0; i < cell.size(); ++i) {
        InactiveSet face = cell;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
        if (family.count(face))
            chain[face] += i % 2 == 0 ? 1 : -1;
    }
    std::erase_if(chain, [](const auto& term) { return term.second == 0; });
    return chain;
}

// ---------------------------------------------------------------------------
// Intersection complex

namespace {

int affine_dimension(const std::vector<const Point*>& points)
{
    if (points.size() < 2)
        return 0;
    const auto d = static_cast<Eigen::Index>(points.front()->size());
    Eigen::MatrixXd diff(static_cast<Eigen::Index>(points.size()) - 1, d);
    for (std::size_t i = 1; i < points.size(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j)
            diff(static_cast<Eigen::Index>(i) - 1, j) = (*points[i])[j] - (*points[0])[j];
    }
    return pivoted_rank(diff, 1e-9);
}

} // namespace

bool orient_from_facets(const InactiveSet& cell, const std::vector<InactiveSet>& unsorted, int k,
                        BoundaryTable& oriented, std::vector<std::string>& issues)
{
    std::vector<InactiveSet> facets = unsorted;
    std::sort(facets.begin(), facets.end());
    auto& row = oriented[cell];
    if (facets.empty()) {
        issues.push_back("cell " + set_name(cell) + " has no facets");
        return false;
    }
    if (k == 1) {
        if (facets.size() != 2) {
            issues.push_back("edge " + set_name(cell) + " has " + std::to_string(facets.size()) + " end points");
            return false;
        }
        row[facets[0]] = 1;
        row[facets[1]] = -1;
        return true;
    }

    std::map<InactiveSet, Coefficient> sign;
    std::deque<InactiveSet> queue{facets.front()};
    sign[facets.front()] = 1;
    bool ok = true;
    while (!queue.empty()) {
        const InactiveSet t = queue.front();
        queue.pop_front();
        for (const auto& [ridge, st] : oriented[t]) {
            for (const auto& other : facets) {
                if (other == t)
                    continue;
                auto it = oriented[other].find(ridge);
                if (it == oriented[other].end())
                    continue;
                const Coefficient wanted = -sign[t] * st * it->second;
                auto [pos, inserted] = sign.emplace(other, wanted);
                if (inserted)
                    queue.push_back(other);
                else if (pos->second != wanted && ok) {
                    issues.push_back("conflicting orientation of " + set_name(other) + " in " + set_name(cell));
                    ok = false;
                }
            }
        }
    }
    if (sign.size() != facets.size()) {
        issues.push_back("facets of " + set_name(cell) + " are not connected through ridges");
        return false;
    }
    std::map<InactiveSet, Coefficient> cycle;
    for (const auto& [t, s] : sign) {
        row[t] = s;
        for (const auto& [ridge, st] : oriented[t])
            cycle[ridge] += s * st;
    }
    for (const auto& [ridge, value] : cycle) {
        if (value != 0 && ok) {
            issues.push_back("boundary of " + set_name(cell) + " is not a cycle");
            ok = false;
        }
    }
    return ok;
}

RelationalComplex IntersectionComplex::to_relational_complex() const
{
    ComplexBuilder builder(std::max(dimension(), 0), embedding_dimension);
    for (const auto& [set, p] : points)
        builder.add_vertex(set_name(set), p);
    for (int k = 1; k <= dimension(); ++k) {
        for (const auto& cell : cells[k])
            builder.add_cell(k, set_name(cell));
    }
    for (int k = 1; k <= dimension(); ++k) {
        for (const auto& cell : cells[k]) {
            auto it = oriented.find(cell);
            if (it == oriented.end())
                continue;
            for (const auto& [face, sigma] : it->second)
                builder.add_incidence(set_name(cell), set_name(face), sigma);
        }
    }
    return builder.build();
}

IntersectionComplex build_intersection_complex(const GeometricSimplex& a, const GeometricSimplex& b, int sign_a,
                                               int sign_b, const Tolerances& tolerances)
{
    const Normalized normalized = normalize(a, b);
    const KKTSystem system = assemble_kkt(normalized.a, normalized.b);
    const auto vertices = enumerate_vertices(system, tolerances);

    IntersectionComplex complex;
    complex.embedding_dimension = static_cast<int>(a.points.front().size());
    if (vertices.empty())
        return complex;

    std::set<InactiveSet> roots;
    std::map<InactiveSet, Point> normalized_points;
    for (const auto& [set, solution] : vertices) {
        roots.insert(set);
        complex.points.emplace(set, point_of(a, solution));
        normalized_points.emplace(set, point_of(normalized.a, solution));
    }
    const std::set<InactiveSet> family = union_closure(roots);

    for (const auto& cell : family) {
        const int nullity = solution_dimension(system, cell, tolerances);
        std::vector<const Point*> contained;
        for (const auto& [set, p] : normalized_points) {
            if (std::includes(cell.begin(), cell.end(), set.begin(), set.end()))
                contained.push_back(&p);
        }
        const int spanned = affine_dimension(contained);
        if (nullity != spanned)
            throw DegenerateIntersection("cell " + set_name(cell) + " has solution space of dimension " +
                                         std::to_string(nullity) + " but spans " + std::to_string(spanned));
        complex.dimension_of[cell] = nullity;
        if (static_cast<int>(complex.cells.size()) <= nullity)
            complex.cells.resize(nullity + 1);
        complex.cells[nullity].insert(cell);
    }

    for (int k = 1; k <= complex.dimension(); ++k) {
        for (const auto& cell : complex.cells[k]) {
            complex.restricted[cell] = restricted_boundary(family, cell);
            std::vector<InactiveSet> facets;
            for (const auto& t : complex.cells[k - 1]) {
                if (std::includes(cell.begin(), cell.end(), t.begin(), t.end()))
                    facets.push_back(t);
            }
            orient_from_facets(cell, facets, k, complex.oriented, complex.orientation_issues);
        }
    }

    const int n = complex.dimension();
    if (n >= 1 && n == complex.embedding_dimension && complex.is_oriented()) {
        const RelationalComplex relational = complex.to_relational_complex();
        const DecompositionMorphism mu = cohen_hickey(relational);
        const int wanted = sign_a * sign_b;
        for (const auto& cell : complex.cells[n]) {
            const double volume = chain_volume(mu.image({n, set_name(cell)}), mu.coordinates());
            if ((volume > 0.0 ? 1 : -1) != wanted) {
                for (auto& [face, sigma] : complex.oriented[cell])
                    sigma = -sigma;
            }
        }
    }
    return complex;
}

} // namespace polyoverlay
