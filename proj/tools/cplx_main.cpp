// cplx: command-line front end for complex files.
//
// Exit codes: 0 success, 1 validation failure, 2 degeneracy, 3 usage or parse error.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyoverlay/complex_core.hpp"
#include "polyoverlay/complex_io.hpp"
#include "polyoverlay/decomposition.hpp"
#include "polyoverlay/errors.hpp"
#include "polyoverlay/intersect.hpp"
#include "polyoverlay/overlay.hpp"

using namespace polyoverlay;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kDegenerate = 2;
constexpr int kUsage = 3;

struct ValidationFailed : Error {
    using Error::Error;
};

void require_valid(const RelationalComplex& c)
{
    const auto report = validate_complex(c);
    if (!report.ok())
        throw ValidationFailed(report.to_string());
}

void emit(const std::string& text, const std::string& path)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path + "'");
    out << text;
}

std::string volume_text(double v)
{
    std::string s = format_number(v);
    if (s.find_first_of(".eE") == std::string::npos && s.find("inf") == std::string::npos &&
        s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

Point parse_point(const std::string& text)
{
    Point p;
    std::stringstream in(text);
    for (std::string part; std::getline(in, part, ',');) {
        try {
            std::size_t used = 0;
            p.push_back(std::stod(part, &used));
            if (used != part.size())
                throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--point", "not a number: '" + part + "'");
        }
    }
    return p;
}

GeometricSimplex simplex_from(const RelationalComplex& c, VertexId first_id, std::vector<std::string>& names)
{
    GeometricSimplex s;
    VertexId id = first_id;
    for (const auto& v : c.cells(0)) {
        s.ids.push_back(id++);
        s.points.push_back(*c.coordinate(v));
        names.push_back(v);
    }
    if (s.ids.empty())
        throw InvalidComplex("simplex file has no VERTEX records");
    return s;
}

int cmd_validate(const std::string& file)
{
    const auto c = read_complex_file(file);
    const auto report = validate_complex(c);
    if (report.ok()) {
        std::cout << "valid: " << c.cell_count() << " cells, dimension " << c.dimension() << '\n';
        return kOk;
    }
    std::cout << report.to_string();
    return kInvalid;
}

int cmd_decompose(const std::string& file, const std::string& method, const std::string& output)
{
    const auto c = read_complex_file(file);
    require_valid(c);
    const auto mu = decompose(c, method == "apex" ? DecompositionMethod::Apex : DecompositionMethod::CohenHickey);
    std::ostringstream out;
    out << "# method " << method << '\n';
    for (const auto& [name, label] : mu.labels())
        out << "# LABEL " << name << ' ' << label << '\n';
    for (const auto& [cell, apex] : mu.apexes()) {
        out << "# APEX " << cell << ' ' << apex.label;
        for (double x : apex.position)
            out << ' ' << format_number(x);
        out << '\n';
    }
    for (const auto& s : mu.top_simplices()) {
        out << "SIMPLEX " << s.coefficient;
        for (VertexLabel v : s.simplex.vertices())
            out << ' ' << v;
        out << ' ' << s.source << '\n';
    }
    emit(out.str(), output);
    return kOk;
}

int cmd_volume(const std::string& file)
{
    const auto c = read_complex_file(file);
    require_valid(c);
    if (c.embedding_dimension() != c.dimension())
        throw DimensionMismatch("volume needs a complex embedded in its own dimension");
    const auto mu = cohen_hickey(c);
    double total = 0.0;
    if (c.dimension() >= 1) {
        for (const auto& [cell, chain] : mu.images(c.dimension()))
            total += chain_volume(chain, mu.coordinates());
    }
    std::cout << volume_text(total) << '\n';
    return kOk;
}

int cmd_winding(const std::string& file, const std::string& point_text)
{
    const auto c = read_complex_file(file);
    require_valid(c);
    const Point p = parse_point(point_text);
    if (static_cast<int>(p.size()) != c.embedding_dimension() || c.dimension() != c.embedding_dimension())
        throw DimensionMismatch("point and complex dimensions differ");
    const auto mu = cohen_hickey(c);
    const double eps = Tolerances{}.boundary * c.bounding_box().diagonal();
    for (const auto& [cell, chain] : mu.images(c.dimension()))
        std::cout << cell << ' ' << winding_number(p, chain, mu.coordinates(), eps) << '\n';
    return kOk;
}

int cmd_intersect(const std::string& file_a, const std::string& file_b)
{
    const auto a = read_complex_file(file_a);
    const auto b = read_complex_file(file_b);
    std::vector<std::string> names;
    const auto sa = simplex_from(a, 1, names);
    const auto sb = simplex_from(b, static_cast<VertexId>(sa.ids.size()) + 1, names);
    for (std::size_t i = 0; i < names.size(); ++i)
        std::cout << "# ID " << i + 1 << ' ' << (i < sa.ids.size() ? "A " : "B ") << names[i] << '\n';
    for (const auto& v : intersection_vertices(sa, sb)) {
        std::cout << "SET";
        for (VertexId id : v.set)
            std::cout << ' ' << id;
        std::cout << " POINT";
        for (double x : v.point)
            std::cout << ' ' << format_number(x);
        std::cout << '\n';
    }
    return kOk;
}

int cmd_overlay(const std::string& file_a, const std::string& file_b, const std::string& output, bool no_components)
{
    auto a = std::make_shared<const RelationalComplex>(read_complex_file(file_a));
    auto b = std::make_shared<const RelationalComplex>(read_complex_file(file_b));
    require_valid(*a);
    require_valid(*b);
    OverlayOptions options;
    options.split_components = !no_components;
    const OverlayJob job(a, b, options);
    const OverlayComplex result = overlay_intersection(job);
    emit(write_complex(result.complex), output);
    if (!output.empty() && output != "-") {
        for (const auto& [name, origin] : result.provenance)
            std::cout << name << ' ' << origin.sources.first << ' ' << origin.sources.second << ' '
                      << origin.component << ' ' << format_number(result.volume.at(name)) << '\n';
    }
    return kOk;
}

int cmd_export_sql(const std::string& file)
{
    const auto c = read_complex_file(file);
    std::cout << export_sql(c);
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Relational polytope complexes: validation, decomposition, intersection, overlay"};
    app.require_subcommand(1);

    std::string file, file_b, output, method = "cohen-hickey", point;
    bool no_components = false;

    auto* validate = app.add_subcommand("validate", "Check the chain condition and edge structure");
    validate->add_option("file", file, "complex file")->required();

    auto* decompose_cmd = app.add_subcommand("decompose", "List the signed top simplices of a decomposition");
    decompose_cmd->add_option("file", file, "complex file")->required();
    decompose_cmd->add_option("--method", method, "apex or cohen-hickey")
        ->check(CLI::IsMember({"apex", "cohen-hickey"}));
    decompose_cmd->add_option("-o,--output", output, "output file (default: standard output)");

    auto* volume = app.add_subcommand("volume", "Total signed volume of the top cells");
    volume->add_option("file", file, "complex file")->required();

    auto* winding = app.add_subcommand("winding", "Winding number of a point per top cell");
    winding->add_option("file", file, "complex file")->required();
    winding->add_option("--point", point, "comma-separated coordinates")->required();

    auto* intersect = app.add_subcommand("intersect-simplices", "Vertices of the intersection of two simplices");
    intersect->add_option("file_a", file, "simplex file")->required();
    intersect->add_option("file_b", file_b, "simplex file")->required();

    auto* overlay = app.add_subcommand("overlay", "Intersection overlay of two complexes");
    overlay->add_option("file_a", file, "complex file")->required();
    overlay->add_option("file_b", file_b, "complex file")->required();
    overlay->add_option("-o,--output", output, "output file")->required();
    overlay->add_flag("--no-components", no_components, "keep one cell per pair of source cells");

    auto* sql = app.add_subcommand("export-sql", "SQL table M and the M_squared view");
    sql->add_option("file", file, "complex file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*validate)
            return cmd_validate(file);
        if (*decompose_cmd)
            return cmd_decompose(file, method, output);
        if (*volume)
            return cmd_volume(file);
        if (*winding)
            return cmd_winding(file, point);
        if (*intersect)
            return cmd_intersect(file, file_b);
        if (*overlay)
            return cmd_overlay(file, file_b, output, no_components);
        if (*sql)
            return cmd_export_sql(file);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ValidationFailed& e) {
        std::cerr << "invalid complex:\n" << e.what();
        return kInvalid;
    } catch (const InvalidComplex& e) {
        std::cerr << "invalid complex: " << e.what() << '\n';
        return kInvalid;
    } catch (const DegenerateIntersection& e) {
        std::cerr << "degenerate intersection: " << e.what() << '\n';
        return kDegenerate;
    } catch (const BoundaryPoint& e) {
        std::cerr << "boundary point: " << e.what() << '\n';
        return kDegenerate;
    } catch (const AmbiguousMerge& e) {
        std::cerr << "ambiguous merge: " << e.what() << '\n';
        return kDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
