// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <sqlite3.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "polyoverlay/complex_io.hpp"
#include "polyoverlay/decomposition.hpp"
#include "polyoverlay/errors.hpp"
#include "polyoverlay/intersect.hpp"
#include "polyoverlay/overlay.hpp"

using namespace polyoverlay;
using namespace testsupport;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool condition, const std::string& what)
    {
        if (!condition && pass) {
            pass = false;
            detail << what;
        }
    }
};

double ms_since(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Fastest of several runs, in milliseconds.
double best_time(int runs, const std::function<void()>& f)
{
    double best = INFINITY;
    for (int i = 0; i < runs; ++i) {
        const auto t = Clock::now();
        f();
        best = std::min(best, ms_since(t));
    }
    return best;
}

SimplicialChain chain_of(int k, std::initializer_list<std::pair<Simplex, Coefficient>> terms)
{
    SimplicialChain c(k);
    for (const auto& [s, v] : terms)
        c.add(s, v);
    return c;
}

const std::vector<std::string> valid_fixtures{"square.cplx", "ch_square.cplx", "square_offset.cplx",
                                              "u_shape.cplx", "bar.cplx",      "l_shape.cplx",
                                              "cube.cplx",    "star_a.cplx",   "star_b.cplx"};

void square_decomposition(Outcome& o)
{
    const auto ch_square = load_fixture("ch_square.cplx");
    const auto square = load_fixture("square.cplx");
    const std::map<std::string, VertexLabel> labels{{"a", 4}, {"b", 2}, {"c", 1}, {"d", 3}};
    DecompositionMorphism ch, apex;
    const double t = best_time(5, [&] {
        ch = cohen_hickey(ch_square, labels);
        apex = apex_triangulate(square);
    });
    o.require(ch.image({1, "ab"}) == chain_of(1, {{{2, 4}, -1}}), "mu_1(ab)");
    o.require(ch.image({1, "ac"}) == chain_of(1, {{{1, 4}, -1}}), "mu_1(ac)");
    o.require(ch.image({1, "bd"}) == chain_of(1, {{{2, 3}, 1}}), "mu_1(bd)");
    o.require(ch.image({1, "cd"}) == chain_of(1, {{{1, 3}, 1}}), "mu_1(cd)");
    o.require(to_string(ch.image({2, "S"})) == "-<1,2,3>+<1,2,4>", "mu_2(S) = " + to_string(ch.image({2, "S"})));
    o.require(to_string(apex.image({2, "F"})) == "-<0,1,2>+<0,1,3>-<0,2,4>+<0,3,4>",
              "apex image = " + to_string(apex.image({2, "F"})));
    o.require(t < 1.0, "took " + std::to_string(t) + " ms");
    o.detail << "mu_2(S) = " << to_string(ch.image({2, "S"})) << ", " << t << " ms";
}

void chain_condition(Outcome& o)
{
    for (const auto& name : valid_fixtures) {
        const auto c = load_fixture(name);
        for (int k = 1; k < c.dimension(); ++k)
            o.require(multiply(c.boundary_matrix(k + 1), c.boundary_matrix(k)).empty(), name + ": D D != 0");

        sqlite3* db = nullptr;
        sqlite3_open(":memory:", &db);
        const std::string sql = export_sql(c);
        o.require(sqlite3_exec(db, sql.c_str(), nullptr, nullptr, nullptr) == SQLITE_OK, name + ": SQL failed");
        sqlite3_stmt* stmt = nullptr;
        sqlite3_prepare_v2(db, "select count(*) from M_squared where sigma <> 0", -1, &stmt, nullptr);
        sqlite3_step(stmt);
        o.require(sqlite3_column_int64(stmt, 0) == 0, name + ": M_squared has nonzero rows");
        sqlite3_finalize(stmt);
        sqlite3_close(db);
    }
    o.detail << valid_fixtures.size() << " fixtures";
}

void morphism_law(Outcome& o)
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> corners(3, 10);
    std::uniform_real_distribution<double> height(0.5, 2.0);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        RelationalComplex c;
        switch (i % 4) {
        case 0:
            c = polygon_complex(random_star_polygon(rng, corners(rng), {0, 0}, 1.0, i % 8 == 0));
            break;
        case 1:
            c = cubical_complex(random_grid(rng, {3, 3}));
            break;
        case 2:
            c = i % 8 == 2 ? prism(random_star_polygon(rng, corners(rng), {0, 0}, 1.0, true), height(rng))
                           : pyramid(random_star_polygon(rng, corners(rng), {0, 0}, 1.0, false), {0, 0, height(rng)});
            break;
        default:
            c = cubical_complex(random_grid(rng, {2, 2, 2}));
        }
        for (auto method : {DecompositionMethod::CohenHickey, DecompositionMethod::Apex}) {
            const auto bad = morphism_law_violation(c, decompose(c, method));
            o.require(!bad, "complex " + std::to_string(i) + " cell " + bad.value_or(""));
        }
        ++checked;
    }
    o.detail << checked << " complexes, both methods";
}

void hypercube(Outcome& o)
{
    std::size_t expected = 1;
    for (int n = 2; n <= 5; ++n) {
        expected *= n;
        const auto count = cohen_hickey(unit_cube(n)).top_simplices().size();
        o.require(count == expected, "n = " + std::to_string(n) + ": " + std::to_string(count));
        o.detail << (n > 2 ? ", " : "") << n << ": " << count;
    }
}

void star_of_david(Outcome& o)
{
    const auto fa = load_fixture("star_a.cplx");
    const auto fb = load_fixture("star_b.cplx");
    GeometricSimplex a, b;
    VertexId id = 1;
    for (const auto& v : fa.cells(0)) {
        a.ids.push_back(id++);
        a.points.push_back(*fa.coordinate(v));
    }
    for (const auto& v : fb.cells(0)) {
        b.ids.push_back(id++);
        b.points.push_back(*fb.coordinate(v));
    }
    std::set<InactiveSet> sets, family;
    std::map<InactiveSet, Coefficient> boundary;
    const double t = best_time(5, [&] {
        sets.clear();
        for (const auto& v : intersection_vertices(a, b))
            sets.insert(v.set);
        family = union_closure(sets);
        boundary = restricted_boundary(family, {2, 3, 4, 5, 6});
    });
    o.require(sets == std::set<InactiveSet>{{1, 3, 4, 5}, {2, 3, 4, 5}, {1, 3, 4, 6}, {2, 3, 5, 6}, {1, 2, 3, 6}},
              "vertex sets");
    const std::set<InactiveSet> x{{1, 3, 4, 5},    {2, 3, 4, 5},    {1, 3, 4, 6},    {2, 3, 5, 6},
                                  {1, 2, 3, 6},    {1, 2, 3, 4, 5}, {1, 3, 4, 5, 6}, {2, 3, 4, 5, 6},
                                  {1, 2, 3, 4, 6}, {1, 2, 3, 5, 6}, {1, 2, 3, 4, 5, 6}};
    o.require(family == x, "union closure");
    o.require(boundary == std::map<InactiveSet, Coefficient>{{{2, 3, 5, 6}, 1}, {{2, 3, 4, 5}, 1}},
              "restricted boundary");
    o.require(t < 10.0, "took " + std::to_string(t) + " ms");
    o.detail << sets.size() << " vertices, |X| = " << family.size() << ", " << t << " ms";
}

void volume_oracle(Outcome& o)
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> corners(3, 14);
    std::uniform_real_distribution<double> height(0.3, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Polygon p = random_star_polygon(rng, corners(rng), {0.5, -1.0}, 3.0, i % 2 == 0);
        const auto c = polygon_complex(p);
        for (auto method : {DecompositionMethod::CohenHickey, DecompositionMethod::Apex}) {
            const auto mu = decompose(c, method);
            worst = std::max(worst, std::abs(chain_volume(mu.image({2, "pF"}), mu.coordinates()) - shoelace(p)));
        }
    }
    for (int i = 0; i < 50; ++i) {
        const Polygon base = random_star_polygon(rng, corners(rng), {0, 0}, 1.5, i % 2 == 0);
        const double area = std::abs(shoelace(base));
        const double h = height(rng);
        for (auto method : {DecompositionMethod::CohenHickey, DecompositionMethod::Apex}) {
            const auto mp = decompose(prism(base, h), method);
            const auto mq = decompose(pyramid(base, {0.2, 0.1, h}), method);
            worst = std::max(worst, std::abs(chain_volume(mp.image({3, "qC"}), mp.coordinates()) - area * h));
            worst = std::max(worst, std::abs(chain_volume(mq.image({3, "qC"}), mq.coordinates()) - area * h / 3));
        }
    }
    o.require(worst <= 1e-9, "max error " + std::to_string(worst));
    o.detail << "max error " << worst;
}

void winding_factorization(Outcome& o)
{
    const std::vector<std::pair<std::string, std::string>> pairs{{"square.cplx", "square_offset.cplx"},
                                                                 {"square.cplx", "square.cplx"},
                                                                 {"u_shape.cplx", "bar.cplx"},
                                                                 {"l_shape.cplx", "u_shape.cplx"},
                                                                 {"bar.cplx", "l_shape.cplx"}};
    std::mt19937_64 rng(7);
    int total = 0, mismatches = 0;
    for (const auto& [fa, fb] : pairs) {
        const auto a = std::make_shared<const RelationalComplex>(load_fixture(fa));
        const auto b = std::make_shared<const RelationalComplex>(load_fixture(fb));
        const OverlayJob job(a, b);
        BoundingBox box = a->bounding_box();
        box.extend(b->bounding_box());
        std::uniform_real_distribution<double> ux(box.lower[0] - 0.5, box.upper[0] + 0.5);
        std::uniform_real_distribution<double> uy(box.lower[1] - 0.5, box.upper[1] + 0.5);
        const auto& ma = job.decomposition_a();
        const auto& mb = job.decomposition_b();
        const double tol = 1e-9 * job.diagonal();
        int accepted = 0;
        while (accepted < 1000) {
            const Point p{ux(rng), uy(rng)};
            int wa = 0, wb = 0, w = 0;
            try {
                for (const auto& c : a->cells(2))
                    wa += winding_number(p, ma.image({2, c}), ma.coordinates(), tol);
                for (const auto& c : b->cells(2))
                    wb += winding_number(p, mb.image({2, c}), mb.coordinates(), tol);
                w = summed_winding(p, job);
            } catch (const BoundaryPoint&) {
                continue;
            }
            mismatches += w != wa * wb;
            ++accepted;
        }
        total += accepted;
    }
    o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
    o.detail << total << " points over " << pairs.size() << " pairs";
}

void overlay_desk_scale(Outcome& o)
{
    auto total = [](const OverlayComplex& c) {
        double v = 0.0;
        for (const auto& [n, x] : c.volume)
            v += x;
        return v;
    };
    const auto offset = overlay_intersection(load_fixture("square.cplx"), load_fixture("square_offset.cplx"));
    o.require(offset.complex.cells(2).size() == 1, "offset squares: cell count");
    o.require(std::abs(total(offset) - 0.25) <= 1e-9, "offset squares: volume " + std::to_string(total(offset)));

    const auto sq = load_fixture("square.cplx");
    const auto self = overlay_intersection(sq, sq);
    o.require(std::abs(total(self) - 1.0) <= 1e-9, "self overlay: volume " + std::to_string(total(self)));

    const auto ub = overlay_intersection(load_fixture("u_shape.cplx"), load_fixture("bar.cplx"));
    const Polygon outline{{0, 0}, {3, 0}, {3, 3}, {2, 3}, {2, 1}, {1, 1}, {1, 3}, {0, 3}};
    std::vector<double> expected{shoelace(clip_convex(outline, {{-0.5, 1.7}, {1.5, 1.7}, {1.5, 2.4}, {-0.5, 2.4}})),
                                 shoelace(clip_convex(outline, {{1.5, 1.7}, {3.5, 1.7}, {3.5, 2.4}, {1.5, 2.4}}))};
    std::vector<double> got;
    for (const auto& [n, v] : ub.volume)
        got.push_back(v);
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    o.require(got.size() == 2, "U/bar: " + std::to_string(got.size()) + " components");
    if (got.size() == 2)
        for (int i = 0; i < 2; ++i)
            o.require(std::abs(got[i] - expected[i]) <= 1e-7, "U/bar: component volume " + std::to_string(got[i]));
    for (const auto* c : {&offset, &self, &ub})
        o.require(validate_complex(c->complex).ok(), "output fails validation");
    o.detail << "0.25 / 1 / " << got.size() << " components";
}

void active_set_vs_brute_force(Outcome& o)
{
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto simplex = [&](int k, int d, VertexId first) {
        GeometricSimplex s;
        for (int i = 0; i <= k; ++i) {
            Point p(d);
            for (double& x : p)
                x = u(rng);
            s.ids.push_back(first + i);
            s.points.push_back(p);
        }
        return s;
    };
    int matched = 0, degenerate = 0, intersecting = 0;
    for (int i = 0; i < 500; ++i) {
        const int d = 1 + i % 3;
        const auto a = simplex(d, d, 1);
        const auto b = simplex(i % 5 == 4 ? std::max(1, d - 1) : d, d, d + 2);
        const auto oracle = brute_force_vertices(a, b);
        try {
            const auto got = intersection_vertices(a, b);
            if (oracle.degenerate)
                continue;
            bool same = got.size() == oracle.vertices.size();
            for (std::size_t j = 0; same && j < got.size(); ++j) {
                same = got[j].set == oracle.vertices[j].first;
                for (int c = 0; same && c < d; ++c)
                    same = std::abs(got[j].point[c] - oracle.vertices[j].second[c]) <= 1e-9;
            }
            o.require(same, "pair " + std::to_string(i) + " differs");
            matched += same;
            intersecting += !got.empty();
        } catch (const DegenerateIntersection&) {
            ++degenerate;
            o.require(oracle.degenerate, "pair " + std::to_string(i) + ": unconfirmed degeneracy");
        }
    }
    o.detail << matched << " matched (" << intersecting << " intersecting), " << degenerate << " degenerate";
}

} // namespace

int main()
{
    const auto start = Clock::now();
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"square decomposition", square_decomposition},
        {"chain condition", chain_condition},
        {"morphism law", morphism_law},
        {"hypercube count", hypercube},
        {"two-triangle intersection", star_of_david},
        {"volume oracle", volume_oracle},
        {"winding factorization", winding_factorization},
        {"overlay at desk scale", overlay_desk_scale},
        {"active set vs brute force", active_set_vs_brute_force},
    };
    std::vector<Outcome> outcomes(criteria.size());
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i].second(outcomes[i]);
        } catch (const std::exception& e) {
            outcomes[i].pass = false;
            outcomes[i].detail << "exception: " << e.what();
        }
    }
    // The desk-scale criterion also bounds the whole run.
    const double seconds = ms_since(start) / 1000.0;
    outcomes[7].require(seconds < 10.0, "suite took " + std::to_string(seconds) + " s");
    outcomes[7].detail << ", suite " << seconds << " s";

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        failed += !outcomes[i].pass;
        std::cout << (outcomes[i].pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": "
                  << outcomes[i].detail.str() << "\n";
    }
    return failed == 0 ? 0 : 1;
}
