#include "polyoverlay/overlay.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "polyoverlay/dense_solver.hpp"
#include "polyoverlay/errors.hpp"

namespace polyoverlay {

namespace {

struct TopSimplex {
    GeometricSimplex simplex;
    std::string source;
    Coefficient coefficient;
    int sign; ///< sign of the determinant
    BoundingBox box;
};

std::vector<TopSimplex> top_simplices(const DecompositionMorphism& mu, VertexId offset)
{
    std::vector<TopSimplex> out;
    for (const auto& sourced : mu.top_simplices()) {
        const double det = simplex_det(sourced.simplex, mu.coordinates());
        TopSimplex t;
        double scale = 1.0;
        for (VertexLabel v : sourced.simplex.vertices()) {
            t.simplex.ids.push_back(v + offset);
            t.simplex.points.push_back(mu.coordinates().at(v));
        }
        for (std::size_t j = 1; j < t.simplex.points.size(); ++j) {
            double norm = 0.0;
            for (std::size_t i = 0; i < t.simplex.points[j].size(); ++i)
                norm += std::pow(t.simplex.points[j][i] - t.simplex.points[0][i], 2);
            scale *= std::sqrt(norm);
        }
        if (scale == 0.0 || std::abs(det) <= 1e-12 * scale)
            continue; // flat: contributes nothing
        for (const auto& p : t.simplex.points)
            t.box.extend(p);
        t.source = sourced.source;
        t.coefficient = sourced.coefficient;
        t.sign = det > 0.0 ? 1 : -1;
        out.push_back(std::move(t));
    }
    return out;
}

std::set<std::string> mixed_cells(const std::vector<TopSimplex>& tops)
{
    std::map<std::string, std::set<Coefficient>> signs;
    for (const auto& t : tops)
        signs[t.source].insert(t.coefficient * t.sign > 0 ? 1 : -1);
    std::set<std::string> mixed;
    for (const auto& [cell, s] : signs) {
        if (s.size() > 1)
            mixed.insert(cell);
    }
    return mixed;
}

std::string describe(const GeometricSimplex& s)
{
    std::ostringstream out;
    out << '<';
    for (std::size_t i = 0; i < s.ids.size(); ++i)
        out << (i ? "," : "") << s.ids[i];
    out << '>';
    return out.str();
}

} // namespace

OverlayJob::OverlayJob(std::shared_ptr<const RelationalComplex> a, std::shared_ptr<const RelationalComplex> b,
                       const OverlayOptions& options)
    : a_(std::move(a)), b_(std::move(b)), options_(options)
{
    const int n = a_->dimension();
    if (b_->dimension() != n)
        throw DimensionMismatch("overlay of complexes of dimension " + std::to_string(n) + " and " +
                                std::to_string(b_->dimension()));
    if (a_->embedding_dimension() != n || b_->embedding_dimension() != n)
        throw DimensionMismatch("overlay needs complexes embedded in their own dimension");
    if (n < 1)
        throw DimensionMismatch("overlay needs complexes of dimension at least 1");

    mu_a_ = cohen_hickey(*a_);
    mu_b_ = cohen_hickey(*b_);

    BoundingBox joint = a_->bounding_box();
    joint.extend(b_->bounding_box());
    diagonal_ = joint.diagonal();

    VertexId offset = 0;
    for (const auto& [name, label] : mu_a_.labels())
        offset = std::max(offset, label);
    const auto tops_a = top_simplices(mu_a_, 0);
    const auto tops_b = top_simplices(mu_b_, offset);
    const auto mixed_a = mixed_cells(tops_a);
    const auto mixed_b = mixed_cells(tops_b);

    const double slack = options_.tolerances.boundary * diagonal_;
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t i = 0; i < tops_a.size(); ++i) {
        for (std::size_t j = 0; j < tops_b.size(); ++j) {
            if (tops_a[i].box.overlaps(tops_b[j].box, slack))
                candidates.emplace_back(i, j);
        }
    }
    candidates_ = candidates.size();

    std::vector<std::optional<SignedPiece>> results(candidates.size());
    std::vector<std::exception_ptr> errors(candidates.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < candidates.size(); k = next++) {
            const TopSimplex& sa = tops_a[candidates[k].first];
            const TopSimplex& sb = tops_b[candidates[k].second];
            try {
                IntersectionComplex piece;
                try {
                    piece = build_intersection_complex(sa.simplex, sb.simplex, sa.sign, sb.sign, options_.tolerances);
                } catch (const DegenerateIntersection& e) {
                    throw DegenerateIntersection("cells " + sa.source + " and " + sb.source + ", simplices " +
                                                 describe(sa.simplex) + " and " + describe(sb.simplex) + ": " +
                                                 e.what());
                }
                if (piece.dimension() != n)
                    continue;
                if (!piece.is_oriented())
                    throw DegenerateIntersection("cannot orient the intersection of " + describe(sa.simplex) +
                                                 " and " + describe(sb.simplex) + ": " +
                                                 piece.orientation_issues.front());
                SignedPiece out;
                out.sources = {sa.source, sb.source};
                out.simplex_a = sa.simplex;
                out.simplex_b = sb.simplex;
                out.coefficient = checked_mul(sa.coefficient, sb.coefficient);
                out.orientation = sa.sign * sb.sign;
                const DecompositionMorphism mu = cohen_hickey(piece.to_relational_complex());
                out.chain = SimplicialChain(n);
                for (const auto& top : piece.cells[n])
                    out.chain += mu.image({n, set_name(top)});
                out.coordinates = mu.coordinates();
                for (const auto& [set, p] : piece.points)
                    out.box.extend(p);
                out.complex = std::move(piece);
                results[k] = std::move(out);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };

    unsigned threads = options_.threads ? options_.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(candidates.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();

    for (const auto& e : errors) {
        if (e)
            std::rethrow_exception(e);
    }
    for (auto& r : results) {
        if (!r)
            continue;
        if (mixed_a.count(r->sources.first) || mixed_b.count(r->sources.second))
            mixed_.insert(r->sources);
        pieces_.push_back(std::move(*r));
    }
}

int summed_winding(const Point& p, const OverlayJob& job)
{
    const double eps = job.options().tolerances.boundary * job.diagonal();
    BoundingBox at;
    at.extend(p);
    long long total = 0;
    for (const auto& piece : job.pieces()) {
        if (!piece.box.overlaps(at, eps))
            continue;
        total += piece.coefficient * winding_number(p, piece.chain, piece.coordinates, eps);
    }
    return static_cast<int>(total);
}

// ---------------------------------------------------------------------------
// Merging

namespace {

/// Vertex identification on a hash grid with cell size tau.
class VertexRegistry {
public:
    explicit VertexRegistry(double tau) : tau_(tau > 0.0 ? tau : 1e-300) {}

    VertexId find_or_add(const Point& p)
    {
        const auto home = cell_of(p);
        std::vector<VertexId> near;
        std::vector<long long> offset(p.size(), -1);
        while (true) {
            std::vector<long long> key = home;
            for (std::size_t i = 0; i < key.size(); ++i)
                key[i] += offset[i];
            auto it = grid_.find(key);
            if (it != grid_.end()) {
                for (VertexId id : it->second) {
                    if (distance(points_[id], p) <= tau_)
                        near.push_back(id);
                }
            }
            std::size_t i = 0;
            while (i < offset.size() && offset[i] == 1)
                offset[i++] = -1;
            if (i == offset.size())
                break;
            ++offset[i];
        }
        if (near.size() > 1) {
            std::ostringstream msg;
            msg << "point";
            for (double x : p)
                msg << ' ' << x;
            msg << " lies within the merge tolerance of vertices";
            for (VertexId id : near)
                msg << ' ' << id;
            throw AmbiguousMerge(msg.str());
        }
        if (near.size() == 1)
            return near.front();
        const auto id = static_cast<VertexId>(points_.size());
        points_.push_back(p);
        grid_[home].push_back(id);
        return id;
    }

    const std::vector<Point>& points() const { return points_; }

private:
    std::vector<long long> cell_of(const Point& p) const
    {
        std::vector<long long> key(p.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            key[i] = static_cast<long long>(std::floor(p[i] / tau_));
        return key;
    }

    static double distance(const Point& a, const Point& b)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(s);
    }

    double tau_;
    std::vector<Point> points_;
    std::map<std::vector<long long>, std::vector<VertexId>> grid_;
};

/// Convex cell given by its vertices and, per vertex, the indices of the
/// bounding hyperplanes it does not lie on.
struct Polytope {
    std::vector<Point> points;
    std::vector<InactiveSet> inactive;
    SourcePair sources;
    Coefficient weight = 0;
};

struct Hyperplane {
    Eigen::VectorXd normal; ///< unit length
    double offset = 0.0;
};

std::vector<Hyperplane> facet_hyperplanes(const GeometricSimplex& s)
{
    const auto n = static_cast<Eigen::Index>(s.points.size()) - 1;
    Eigen::MatrixXd edges(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i)
            edges(i, j) = s.points[j + 1][i] - s.points[0][i];
    }
    const Eigen::MatrixXd inverse = edges.inverse();
    const Eigen::VectorXd origin = Eigen::Map<const Eigen::VectorXd>(s.points[0].data(), n);
    std::vector<Hyperplane> out;
    for (Eigen::Index k = 0; k <= n; ++k) {
        // barycentric coordinate k as an affine function g.x - c
        Eigen::VectorXd g = k == 0 ? Eigen::VectorXd(-inverse.colwise().sum().transpose())
                                   : Eigen::VectorXd(inverse.row(k - 1).transpose());
        double c = g.dot(origin) - (k == 0 ? 1.0 : 0.0);
        const double norm = g.norm();
        g /= norm;
        c /= norm;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(g(i)) > 1e-9) {
                if (g(i) < 0) {
                    g = -g;
                    c = -c;
                }
                break;
            }
        }
        out.push_back({g, c});
    }
    return out;
}

void add_unique(std::vector<Hyperplane>& planes, const Hyperplane& h, double tol)
{
    for (const auto& q : planes) {
        if ((q.normal - h.normal).cwiseAbs().maxCoeff() <= 1e-9 && std::abs(q.offset - h.offset) <= tol)
            return;
    }
    planes.push_back(h);
}

bool subset(const InactiveSet& a, const InactiveSet& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

InactiveSet merged(const InactiveSet& a, const InactiveSet& b)
{
    InactiveSet u;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
    return u;
}

InactiveSet with(InactiveSet s, VertexId v)
{
    s.insert(std::upper_bound(s.begin(), s.end(), v), v);
    return s;
}

/// Splits p along h; returns p unchanged when h does not cross its interior.
std::vector<Polytope> cut(const Polytope& p, const Hyperplane& h, VertexId index, double tol)
{
    const std::size_t count = p.points.size();
    std::vector<double> side(count);
    bool below = false, above = false;
    for (std::size_t i = 0; i < count; ++i) {
        const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(p.points[i].data(), h.normal.size());
        side[i] = h.normal.dot(x) - h.offset;
        below = below || side[i] < -tol;
        above = above || side[i] > tol;
    }
    if (!below || !above)
        return {p};

    Polytope lower{{}, {}, p.sources, p.weight};
    Polytope upper = lower;
    for (std::size_t i = 0; i < count; ++i) {
        if (side[i] <= tol) {
            lower.points.push_back(p.points[i]);
            lower.inactive.push_back(side[i] < -tol ? with(p.inactive[i], index) : p.inactive[i]);
        }
        if (side[i] >= -tol) {
            upper.points.push_back(p.points[i]);
            upper.inactive.push_back(side[i] > tol ? with(p.inactive[i], index) : p.inactive[i]);
        }
    }
    for (std::size_t u = 0; u < count; ++u) {
        for (std::size_t v = u + 1; v < count; ++v) {
            if (!((side[u] < -tol && side[v] > tol) || (side[u] > tol && side[v] < -tol)))
                continue;
            const InactiveSet joint = merged(p.inactive[u], p.inactive[v]);
            std::size_t spanned = 0;
            for (std::size_t w = 0; w < count && spanned <= 2; ++w) {
                if (subset(p.inactive[w], joint))
                    ++spanned;
            }
            if (spanned != 2)
                continue; // not an edge
            const double t = side[u] / (side[u] - side[v]);
            Point x(p.points[u].size());
            for (std::size_t i = 0; i < x.size(); ++i)
                x[i] = p.points[u][i] + t * (p.points[v][i] - p.points[u][i]);
            lower.points.push_back(x);
            lower.inactive.push_back(joint);
            upper.points.push_back(x);
            upper.inactive.push_back(joint);
        }
    }
    return {std::move(lower), std::move(upper)};
}

int affine_dimension(const std::vector<Point>& points, const CellKey& key)
{
    if (key.size() < 2)
        return 0;
    const auto d = static_cast<Eigen::Index>(points[key.front()].size());
    Eigen::MatrixXd diff(static_cast<Eigen::Index>(key.size()) - 1, d);
    for (std::size_t i = 1; i < key.size(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j)
            diff(static_cast<Eigen::Index>(i) - 1, j) = points[key[i]][j] - points[key.front()][j];
    }
    return pivoted_rank(diff, 1e-9);
}

} // namespace

std::map<CellKey, Coefficient> MergedCells::pair_boundary(const SourcePair& pair) const
{
    std::map<CellKey, Coefficient> chain;
    auto it = top.find(pair);
    if (it == top.end())
        return chain;
    for (const auto& [cell, coefficient] : it->second) {
        for (const auto& [face, sigma] : boundary.at(cell))
            chain[face] = checked_add(chain[face], checked_mul(coefficient, sigma));
    }
    std::erase_if(chain, [](const auto& term) { return term.second == 0; });
    return chain;
}

double MergedCells::pair_volume(const SourcePair& pair) const
{
    double total = 0.0;
    auto it = top.find(pair);
    if (it == top.end())
        return total;
    for (const auto& [cell, coefficient] : it->second)
        total += static_cast<double>(coefficient) * volume.at(cell);
    return total;
}

MergedCells merge_cells(const std::vector<SignedPiece>& pieces, int dimension, double diagonal,
                        const Tolerances& tolerances, const std::set<SourcePair>& refine)
{
    const double side_tol = tolerances.boundary * diagonal;

    // Convex cells of every piece, in the halfspace indexing of its two simplices.
    std::vector<Polytope> polytopes;
    std::map<SourcePair, std::vector<Hyperplane>> planes;
    for (const auto& piece : pieces) {
        std::vector<VertexId> order = piece.simplex_a.ids;
        order.insert(order.end(), piece.simplex_b.ids.begin(), piece.simplex_b.ids.end());
        Polytope p{{}, {}, piece.sources, piece.weight()};
        for (const auto& [set, point] : piece.complex.points) {
            InactiveSet inactive;
            for (VertexId id : set)
                inactive.push_back(std::find(order.begin(), order.end(), id) - order.begin());
            p.points.push_back(point);
            p.inactive.push_back(make_inactive_set(std::move(inactive)));
        }
        polytopes.push_back(std::move(p));
        if (refine.count(piece.sources)) {
            auto& list = planes[piece.sources];
            for (const auto* s : {&piece.simplex_a, &piece.simplex_b}) {
                for (const auto& h : facet_hyperplanes(*s))
                    add_unique(list, h, side_tol);
            }
        }
    }

    // Common refinement of overlapping pieces.
    std::vector<Polytope> cells;
    const VertexId first_cut = 2 * (dimension + 1);
    for (auto& p : polytopes) {
        auto it = planes.find(p.sources);
        if (it == planes.end()) {
            cells.push_back(std::move(p));
            continue;
        }
        std::vector<Polytope> parts{std::move(p)};
        for (std::size_t j = 0; j < it->second.size(); ++j) {
            std::vector<Polytope> next;
            for (const auto& part : parts) {
                for (auto& q : cut(part, it->second[j], first_cut + static_cast<VertexId>(j), side_tol))
                    next.push_back(std::move(q));
            }
            parts = std::move(next);
        }
        for (auto& part : parts)
            cells.push_back(std::move(part));
    }

    MergedCells out;
    out.dimension = dimension;
    VertexRegistry registry(tolerances.merge * diagonal);
    std::map<CellKey, std::set<CellKey>> facets;
    std::vector<std::pair<CellKey, const Polytope*>> tops;
    for (const auto& cell : cells) {
        std::vector<VertexId> global;
        for (const auto& point : cell.points)
            global.push_back(registry.find_or_add(point));
        if (make_inactive_set(global).size() != global.size())
            throw DegenerateIntersection("distinct vertices of one piece merge into one point");

        const auto& points = registry.points();
        std::map<CellKey, int> faces;
        for (const auto& u : union_closure(std::set<InactiveSet>(cell.inactive.begin(), cell.inactive.end()))) {
            CellKey key;
            for (std::size_t v = 0; v < cell.points.size(); ++v) {
                if (subset(cell.inactive[v], u))
                    key.push_back(global[v]);
            }
            key = make_inactive_set(std::move(key));
            faces[key] = affine_dimension(points, key);
        }
        CellKey whole = make_inactive_set(global);
        if (faces[whole] != dimension)
            continue; // sliver below full dimension
        for (const auto& [key, k] : faces) {
            auto [it, inserted] = out.dimension_of.emplace(key, k);
            if (!inserted && it->second != k)
                throw DegenerateIntersection("cell " + set_name(key) + " has inconsistent dimension");
            if (k == 0)
                continue;
            auto& list = facets[key];
            for (const auto& [sub, j] : faces) {
                if (j == k - 1 && subset(sub, key))
                    list.insert(sub);
            }
        }
        tops.emplace_back(whole, &cell);
    }
    out.vertices = registry.points();

    std::vector<std::string> issues;
    for (int k = 1; k <= dimension; ++k) {
        for (const auto& [key, j] : out.dimension_of) {
            if (j != k)
                continue;
            const auto& f = facets[key];
            orient_from_facets(key, std::vector<CellKey>(f.begin(), f.end()), k, out.boundary, issues);
        }
    }
    if (!issues.empty())
        throw DegenerateIntersection("cannot orient merged cells: " + issues.front());

    // Positive orientation of the top cells from their decomposed volumes.
    if (!tops.empty()) {
        ComplexBuilder builder(dimension, dimension);
        for (const auto& [key, k] : out.dimension_of) {
            if (k == 0)
                builder.add_vertex(set_name(key), out.vertices[key.front()]);
            else
                builder.add_cell(k, set_name(key));
        }
        for (const auto& [key, row] : out.boundary) {
            for (const auto& [face, sigma] : row)
                builder.add_incidence(set_name(key), set_name(face), sigma);
        }
        const DecompositionMorphism mu = cohen_hickey(builder.build());
        for (const auto& [key, cell] : tops) {
            if (out.volume.count(key))
                continue;
            const double v = chain_volume(mu.image({dimension, set_name(key)}), mu.coordinates());
            if (v < 0.0) {
                for (auto& [face, sigma] : out.boundary[key])
                    sigma = -sigma;
            }
            out.volume[key] = std::abs(v);
        }
    }

    for (const auto& [key, cell] : tops) {
        auto& row = out.top[cell->sources];
        row[key] = checked_add(row[key], cell->weight);
        if (row[key] == 0)
            row.erase(key);
    }
    std::erase_if(out.top, [](const auto& entry) { return entry.second.empty(); });
    return out;
}

std::vector<std::vector<CellKey>> connected_components(const MergedCells& cells, const SourcePair& pair)
{
    std::vector<std::vector<CellKey>> components;
    auto it = cells.top.find(pair);
    if (it == cells.top.end())
        return components;
    std::vector<CellKey> keys;
    for (const auto& [key, coefficient] : it->second)
        keys.push_back(key);

    std::vector<std::size_t> parent(keys.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
        return parent[i] == i ? i : parent[i] = root(parent[i]);
    };
    std::map<CellKey, std::size_t> owner;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        for (const auto& [facet, sigma] : cells.boundary.at(keys[i])) {
            auto [pos, inserted] = owner.emplace(facet, i);
            if (!inserted)
                parent[root(i)] = root(pos->second);
        }
    }
    std::map<std::size_t, std::vector<CellKey>> groups;
    for (std::size_t i = 0; i < keys.size(); ++i)
        groups[root(i)].push_back(keys[i]);
    for (auto& [r, group] : groups)
        components.push_back(std::move(group));
    std::sort(components.begin(), components.end());
    return components;
}

// ---------------------------------------------------------------------------
// Recomposition

namespace {

std::string padded(const std::string& prefix, std::size_t index, std::size_t count)
{
    const std::string digits = std::to_string(index);
    const std::size_t width = std::to_string(count).size();
    return prefix + std::string(width - std::min(width, digits.size()), '0') + digits;
}

std::string prefix_for(int k)
{
    switch (k) {
    case 0: return "v";
    case 1: return "e";
    case 2: return "f";
    default: return "k" + std::to_string(k) + "_";
    }
}

} // namespace

OverlayComplex overlay_intersection(const OverlayJob& job)
{
    const int n = job.dimension();
    const Tolerances& tol = job.options().tolerances;
    const MergedCells merged = merge_cells(job.pieces(), n, job.diagonal(), tol, job.mixed_pairs());
    const double min_volume = tol.volume * std::pow(job.diagonal(), n);

    struct Output {
        std::string name;
        CellProvenance provenance;
        std::map<CellKey, Coefficient> boundary;
        double volume;
    };
    std::vector<Output> outputs;
    for (const auto& [pair, row] : merged.top) {
        std::vector<std::vector<CellKey>> groups;
        if (job.options().split_components) {
            groups = connected_components(merged, pair);
        } else {
            groups.emplace_back();
            for (const auto& [key, c] : row)
                groups.back().push_back(key);
        }
        for (std::size_t g = 0; g < groups.size(); ++g) {
            Output o{pair.first + ":" + pair.second + ":" + std::to_string(g), {pair, static_cast<int>(g)}, {}, 0.0};
            for (const auto& key : groups[g]) {
                const Coefficient c = row.at(key);
                o.volume += static_cast<double>(c) * merged.volume.at(key);
                for (const auto& [face, sigma] : merged.boundary.at(key))
                    o.boundary[face] = checked_add(o.boundary[face], checked_mul(c, sigma));
            }
            std::erase_if(o.boundary, [](const auto& term) { return term.second == 0; });
            if (std::abs(o.volume) < min_volume)
                continue;
            outputs.push_back(std::move(o));
        }
    }

    // Lower cells in order of first appearance below the top cells.
    std::vector<std::vector<CellKey>> order(n);
    std::set<CellKey> seen;
    std::function<void(const CellKey&)> visit = [&](const CellKey& key) {
        if (!seen.insert(key).second)
            return;
        order[merged.dimension_of.at(key)].push_back(key);
        auto it = merged.boundary.find(key);
        if (it == merged.boundary.end())
            return;
        for (const auto& [face, sigma] : it->second)
            visit(face);
    };
    for (const auto& o : outputs) {
        for (const auto& [face, sigma] : o.boundary)
            visit(face);
    }
    std::map<CellKey, std::string> names;
    for (int k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < order[k].size(); ++i)
            names[order[k][i]] = padded(prefix_for(k), i + 1, order[k].size());
    }

    ComplexBuilder builder(n, n);
    for (const auto& key : order[0])
        builder.add_vertex(names[key], merged.vertices[key.front()]);
    for (int k = 1; k < n; ++k) {
        for (const auto& key : order[k])
            builder.add_cell(k, names[key]);
    }
    for (const auto& o : outputs)
        builder.add_cell(n, o.name);
    for (int k = 1; k < n; ++k) {
        for (const auto& key : order[k]) {
            for (const auto& [face, sigma] : merged.boundary.at(key))
                builder.add_incidence(names[key], names[face], sigma);
        }
    }
    OverlayComplex result;
    for (const auto& o : outputs) {
        for (const auto& [face, sigma] : o.boundary)
            builder.add_incidence(o.name, names[face], sigma);
        result.provenance[o.name] = o.provenance;
        result.volume[o.name] = o.volume;
    }
    result.complex = builder.build();
    return result;
}

OverlayComplex overlay_intersection(const RelationalComplex& a, const RelationalComplex& b,
                                    const OverlayOptions& options)
{
    OverlayJob job(std::make_shared<const RelationalComplex>(a), std::make_shared<const RelationalComplex>(b), options);
    return overlay_intersection(job);
}

} // namespace polyoverlay
