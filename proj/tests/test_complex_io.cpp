#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <random>

#include <sqlite3.h>

#include "generators.hpp"
#include "polyoverlay/complex_io.hpp"
#include "polyoverlay/errors.hpp"

using namespace polyoverlay;
using namespace testsupport;

namespace {

struct Row {
    std::string cell, boundary;
    long long sigma;
    auto operator<=>(const Row&) const = default;
};

// Runs the export in an in-memory database and returns the M_squared rows.
std::vector<Row> m_squared(const std::string& sql)
{
    sqlite3* db = nullptr;
    REQUIRE(sqlite3_open(":memory:", &db) == SQLITE_OK);
    char* error = nullptr;
    const int rc = sqlite3_exec(db, sql.c_str(), nullptr, nullptr, &error);
    INFO((error ? error : ""));
    sqlite3_free(error);
    REQUIRE(rc == SQLITE_OK);

    std::vector<Row> rows;
    sqlite3_stmt* stmt = nullptr;
    REQUIRE(sqlite3_prepare_v2(db, "select cell, boundary, sigma from M_squared order by cell, boundary", -1, &stmt,
                               nullptr) == SQLITE_OK);
    while (sqlite3_step(stmt) == SQLITE_ROW)
        rows.push_back({reinterpret_cast<const char*>(sqlite3_column_text(stmt, 0)),
                        reinterpret_cast<const char*>(sqlite3_column_text(stmt, 1)), sqlite3_column_int64(stmt, 2)});
    sqlite3_finalize(stmt);
    sqlite3_close(db);
    return rows;
}

std::vector<Row> nonzero(std::vector<Row> rows)
{
    std::erase_if(rows, [](const Row& r) { return r.sigma == 0; });
    return rows;
}

void check_parse_error(const std::string& text, std::size_t line)
{
    try {
        parse_complex(text);
        FAIL("no ParseError for:\n" << text);
    } catch (const ParseError& e) {
        CHECK(e.line() == line);
    }
}

} // namespace

TEST_CASE("parse the reference square", "[complex_io]")
{
    const auto sq = load_fixture("square.cplx");
    CHECK(sq.dimension() == 2);
    CHECK(sq.embedding_dimension() == 2);
    CHECK(sq.cells(0).size() == 4);
    CHECK(sq.cells(1).size() == 4);
    CHECK(sq.cells(2) == std::set<std::string>{"F"});
    CHECK(sq.boundary_matrix(2).at("F", "e") == -1);
    CHECK(*sq.coordinate("b") == Point{1, 1});
}

TEST_CASE("boundary records may precede declarations", "[complex_io]")
{
    const auto c = parse_complex("DIM 1 1\nBND e p -1\nBND e q 1\nCELL 1 e\nVERTEX p 0\nVERTEX q 2 # trailing\n");
    CHECK(c.boundary_matrix(1).at("e", "q") == 1);
}

TEST_CASE("parse errors carry line numbers", "[complex_io]")
{
    check_parse_error("VERTEX a 0 0\n", 1);
    check_parse_error("DIM 2 2\nVERTEX a 0\n", 2);
    check_parse_error("DIM 2 2\n\n# c\nVERTEX a 0 x\n", 4);
    check_parse_error("DIM 2 2\nCELL 3 F\n", 2);
    check_parse_error("DIM 2 2\nVERTEX a 0 0\nVERTEX a 1 1\n", 3);
    check_parse_error("DIM 2 2\nVERTEX a 0 0\nCELL 1 e\nBND e a 0\n", 4);
    check_parse_error("DIM 2 2\nCELL 1 e\nBND e nowhere 1\n", 3);
    check_parse_error("DIM 2 2\nFACE F\n", 2);
    check_parse_error("DIM 3 2\n", 1);
    check_parse_error("DIM 2 2\nDIM 2 2\n", 2);
    check_parse_error("# only a comment\n", 1);
    CHECK_THROWS_AS(read_complex_file("/nonexistent/file.cplx"), ParseError);
}

TEST_CASE("write and read round trip", "[complex_io]")
{
    for (const auto* name : {"square.cplx", "u_shape.cplx", "cube.cplx", "star_a.cplx", "square_corrupted.cplx"}) {
        const auto c = load_fixture(name);
        const std::string text = write_complex(c);
        CHECK(parse_complex(text) == c);
        CHECK(write_complex(parse_complex(text)) == text);
    }
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = cubical_complex(random_grid(rng, {3, 2}));
        CHECK(parse_complex(write_complex(c)) == c);
    }
}

TEST_CASE("number formatting round-trips", "[complex_io]")
{
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-2.5) == "-2.5");
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        REQUIRE(std::stod(format_number(x)) == x);
    }
}

TEST_CASE("file round trip", "[complex_io]")
{
    const auto c = load_fixture("l_shape.cplx");
    const std::string path = (std::filesystem::temp_directory_path() / "complex_io_round_trip.cplx").string();
    write_complex_file(c, path);
    CHECK(read_complex_file(path) == c);
    std::remove(path.c_str());
}

TEST_CASE("SQL export of valid complexes", "[complex_io]")
{
    for (const auto* name : {"square.cplx", "ch_square.cplx", "square_offset.cplx", "u_shape.cplx", "bar.cplx",
                             "l_shape.cplx", "cube.cplx", "star_a.cplx"}) {
        INFO(name);
        CHECK(nonzero(m_squared(export_sql(load_fixture(name)))).empty());
    }
}

TEST_CASE("SQL export exposes the broken chain condition", "[complex_io]")
{
    const auto rows = nonzero(m_squared(export_sql(load_fixture("square_corrupted.cplx"))));
    CHECK(rows == std::vector<Row>{{"F", "a", -2}, {"F", "b", 2}});
}

TEST_CASE("SQL product matches the sparse product", "[complex_io][property]")
{
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> pick(0, 5), value(-2, 2);
    for (int trial = 0; trial < 30; ++trial) {
        ComplexBuilder b(2, 2);
        for (int i = 0; i < 6; ++i)
            b.add_vertex("v" + std::to_string(i), {double(i), 0.0});
        for (int i = 0; i < 6; ++i)
            b.add_cell(1, "e" + std::to_string(i));
        b.add_cell(2, "F");
        b.add_cell(2, "G");
        std::set<std::pair<std::string, std::string>> used;
        auto add = [&](const std::string& cell, const std::string& face) {
            const int s = value(rng);
            if (s != 0 && used.insert({cell, face}).second)
                b.add_incidence(cell, face, s);
        };
        for (int i = 0; i < 10; ++i) {
            add("e" + std::to_string(pick(rng)), "v" + std::to_string(pick(rng)));
            add(i % 2 ? "F" : "G", "e" + std::to_string(pick(rng)));
        }
        const auto c = b.build();
        std::vector<Row> expected;
        const auto product = multiply(c.boundary_matrix(2), c.boundary_matrix(1));
        for (const auto& [key, v] : product.entries())
            expected.push_back({key.first, key.second, v});
        REQUIRE(nonzero(m_squared(export_sql(c))) == expected);
    }
}

TEST_CASE("SQL quoting", "[complex_io]")
{
    const auto c = parse_complex("DIM 1 1\nVERTEX it's 0\nVERTEX q 1\nCELL 1 e\nBND e it's -1\nBND e q 1\n");
    CHECK(export_sql(c).find("'it''s'") != std::string::npos);
    CHECK(nonzero(m_squared(export_sql(c))).empty());
}
