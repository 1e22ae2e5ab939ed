#include "polyoverlay/complex_io.hpp"

#include <charconv>
#include <optional>
#include <fstream>
#include <sstream>
#include <vector>

#include "polyoverlay/errors.hpp"

namespace polyoverlay {

namespace {

std::vector<std::string> tokens_of(const std::string& line)
{
    std::istringstream in(line.substr(0, line.find('#')));
    std::vector<std::string> tokens;
    for (std::string t; in >> t;)
        tokens.push_back(std::move(t));
    return tokens;
}

template <typename T>
T number(const std::string& token, int line, const char* what)
{
    T value{};
    const char* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(line, std::string("expected ") + what + ", got '" + token + "'");
    return value;
}

void expect_fields(const std::vector<std::string>& t, std::size_t count, int line)
{
    if (t.size() != count)
        throw ParseError(line, t[0] + " record needs " + std::to_string(count - 1) + " fields, got " +
                                   std::to_string(t.size() - 1));
}

struct Incidence {
    int line;
    std::string cell;
    std::string boundary;
    Coefficient sigma;
};

} // namespace

RelationalComplex parse_complex(const std::string& text)
{
    std::istringstream in(text);
    std::optional<ComplexBuilder> builder;
    std::vector<Incidence> incidences;
    int n = 0, d = 0;
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        const auto t = tokens_of(line);
        if (t.empty())
            continue;
        const std::string& kind = t[0];
        if (!builder) {
            if (kind != "DIM")
                throw ParseError(line_no, "the first record must be DIM");
            expect_fields(t, 3, line_no);
            n = number<int>(t[1], line_no, "a dimension");
            d = number<int>(t[2], line_no, "an embedding dimension");
            if (n < 0 || d < n)
                throw ParseError(line_no, "DIM needs 0 <= n <= d");
            builder.emplace(n, d);
            continue;
        }
        try {
            if (kind == "DIM") {
                throw ParseError(line_no, "duplicate DIM record");
            } else if (kind == "VERTEX") {
                expect_fields(t, 2 + static_cast<std::size_t>(d), line_no);
                Point p;
                for (int i = 0; i < d; ++i)
                    p.push_back(number<double>(t[2 + i], line_no, "a coordinate"));
                builder->add_vertex(t[1], std::move(p));
            } else if (kind == "CELL") {
                expect_fields(t, 3, line_no);
                const int k = number<int>(t[1], line_no, "a cell dimension");
                if (k < 1 || k > n)
                    throw ParseError(line_no, "CELL dimension must lie in 1.." + std::to_string(n));
                builder->add_cell(k, t[2]);
            } else if (kind == "BND") {
                expect_fields(t, 4, line_no);
                const auto sigma = number<Coefficient>(t[3], line_no, "an integer sign");
                if (sigma == 0)
                    throw ParseError(line_no, "sigma must be nonzero");
                incidences.push_back({line_no, t[1], t[2], sigma});
            } else {
                throw ParseError(line_no, "unknown record '" + kind + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (!builder)
        throw ParseError(line_no, "missing DIM record");
    for (const auto& inc : incidences) {
        if (!builder->has_cell(inc.cell))
            throw ParseError(inc.line, "undeclared cell '" + inc.cell + "'");
        if (!builder->has_cell(inc.boundary))
            throw ParseError(inc.line, "undeclared cell '" + inc.boundary + "'");
        try {
            builder->add_incidence(inc.cell, inc.boundary, inc.sigma);
        } catch (const Error& e) {
            throw ParseError(inc.line, e.what());
        }
    }
    return builder->build();
}

RelationalComplex read_complex_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError(0, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_complex(buffer.str());
}

std::string format_number(double value)
{
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

std::string write_complex(const RelationalComplex& complex)
{
    std::ostringstream out;
    out << "DIM " << complex.dimension() << ' ' << complex.embedding_dimension() << '\n';
    for (const auto& v : complex.cells(0)) {
        out << "VERTEX " << v;
        if (const Point* p = complex.coordinate(v)) {
            for (double x : *p)
                out << ' ' << format_number(x);
        }
        out << '\n';
    }
    for (int k = 1; k <= complex.dimension(); ++k) {
        for (const auto& c : complex.cells(k))
            out << "CELL " << k << ' ' << c << '\n';
    }
    for (int k = 1; k <= complex.dimension(); ++k) {
        for (const auto& [key, sigma] : complex.boundary_matrix(k).entries())
            out << "BND " << key.first << ' ' << key.second << ' ' << sigma << '\n';
    }
    return out.str();
}

void write_complex_file(const RelationalComplex& complex, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path + "'");
    out << write_complex(complex);
}

namespace {

std::string quoted(const std::string& s)
{
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += '\'';
        out += c;
    }
    return out + "'";
}

} // namespace

std::string export_sql(const RelationalComplex& complex)
{
    std::ostringstream out;
    out << "CREATE TABLE M(cell, boundary, sigma);\n";
    for (int k = complex.dimension(); k >= 1; --k) {
        for (const auto& [key, sigma] : complex.boundary_matrix(k).entries())
            out << "INSERT INTO M VALUES(" << quoted(key.first) << ", " << quoted(key.second) << ", " << sigma
                << ");\n";
    }
    out << "create view M_squared as\n"
           "select M1.cell, M2.boundary,\n"
           "       sum(M1.sigma * M2.sigma) as sigma\n"
           "from   M M1, M M2\n"
           "where  M1.boundary=M2.cell\n"
           "group by M1.cell, M2.boundary;\n";
    return out.str();
}

} // namespace polyoverlay
