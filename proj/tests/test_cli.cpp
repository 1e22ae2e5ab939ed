#include <catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "generators.hpp"
#include "polyoverlay/complex_io.hpp"

using namespace testsupport;
namespace fs = std::filesystem;

namespace {

struct Result {
    int status;
    std::string out;
};

Result run(const std::string& args)
{
    const std::string command = std::string(CPLX_BINARY) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe);
    std::string out;
    std::array<char, 4096> buffer;
    while (std::size_t n = fread(buffer.data(), 1, buffer.size(), pipe))
        out.append(buffer.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fx(const std::string& name)
{
    return fixture(name);
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "cplx_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("validate", "[cli]")
{
    auto r = run("validate " + fx("square.cplx"));
    CHECK(r.status == 0);
    r = run("validate " + fx("square_corrupted.cplx"));
    CHECK(r.status == 1);
    CHECK(r.out.find("(F, a) = -2") != std::string::npos);
    CHECK(r.out.find("(F, b) = 2") != std::string::npos);
}

TEST_CASE("usage and parse errors", "[cli]")
{
    CHECK(run("").status == 3);
    CHECK(run("validate").status == 3);
    CHECK(run("validate /nonexistent.cplx").status == 3);

    const auto bad = scratch("bad.cplx");
    std::ofstream(bad) << "DIM 2 2\nVERTEX a 0 0\nVERTEX b 1 zero\n";
    const auto r = run("validate " + bad.string());
    CHECK(r.status == 3);
    CHECK(r.out.find("line 3") != std::string::npos);
}

TEST_CASE("decompose", "[cli]")
{
    auto r = run("decompose --method apex " + fx("square.cplx"));
    REQUIRE(r.status == 0);
    std::vector<std::string> simplices;
    for (const auto& l : lines(r.out))
        if (l.rfind("SIMPLEX", 0) == 0)
            simplices.push_back(l);
    CHECK(simplices == std::vector<std::string>{"SIMPLEX -1 0 1 2 F", "SIMPLEX 1 0 1 3 F", "SIMPLEX -1 0 2 4 F",
                                                "SIMPLEX 1 0 3 4 F"});
    CHECK(r.out.find("# APEX F 0 0.5 0.5") != std::string::npos);

    const auto out = scratch("ch.txt");
    r = run("decompose " + fx("cube.cplx") + " -o " + out.string());
    REQUIRE(r.status == 0);
    std::ifstream in(out);
    std::stringstream text;
    text << in.rdbuf();
    int count = 0;
    for (const auto& l : lines(text.str()))
        count += l.rfind("SIMPLEX", 0) == 0;
    CHECK(count == 6);
    CHECK(text.str().find("# method cohen-hickey") != std::string::npos);

    CHECK(run("decompose --method other " + fx("square.cplx")).status == 3);
    CHECK(run("decompose " + fx("square_corrupted.cplx")).status == 1);
}

TEST_CASE("volume and winding", "[cli]")
{
    auto r = run("volume " + fx("u_shape.cplx"));
    CHECK(r.status == 0);
    CHECK(r.out == "7.0\n");
    r = run("winding " + fx("square.cplx") + " --point 0.5,0.2");
    CHECK(r.status == 0);
    CHECK(r.out == "F 1\n");
    r = run("winding " + fx("square.cplx") + " --point 3,3");
    CHECK(r.out == "F 0\n");
    CHECK(run("winding " + fx("square.cplx") + " --point 0,0.5").status == 2);
    CHECK(run("winding " + fx("square.cplx") + " --point 1,2,3").status == 3);
}

TEST_CASE("intersect simplices", "[cli]")
{
    const auto r = run("intersect-simplices " + fx("star_a.cplx") + " " + fx("star_b.cplx"));
    REQUIRE(r.status == 0);
    std::vector<std::string> sets;
    for (const auto& l : lines(r.out))
        if (l.rfind("SET", 0) == 0)
            sets.push_back(l.substr(0, l.find(" POINT")));
    CHECK(sets == std::vector<std::string>{"SET 1 2 3 6", "SET 1 3 4 5", "SET 1 3 4 6", "SET 2 3 4 5", "SET 2 3 5 6"});
    CHECK(r.out.find("SET 1 3 4 5 POINT 50 40") != std::string::npos);
}

TEST_CASE("overlay", "[cli]")
{
    const auto out = scratch("overlay.cplx");
    auto r = run("overlay " + fx("u_shape.cplx") + " " + fx("bar.cplx") + " -o " + out.string());
    REQUIRE(r.status == 0);
    CHECK(lines(r.out).size() == 2);
    for (const auto& l : lines(r.out))
        CHECK(l.rfind("U:B:", 0) == 0);
    const auto c = polyoverlay::read_complex_file(out.string());
    CHECK(polyoverlay::validate_complex(c).ok());
    CHECK(c.cells(2).size() == 2);
    CHECK(run("validate " + out.string()).status == 0);

    r = run("overlay --no-components " + fx("u_shape.cplx") + " " + fx("bar.cplx") + " -o " + out.string());
    REQUIRE(r.status == 0);
    CHECK(polyoverlay::read_complex_file(out.string()).cells(2).size() == 1);
    CHECK(run("overlay " + fx("u_shape.cplx") + " " + fx("bar.cplx")).status == 3);
    CHECK(run("overlay " + fx("square.cplx") + " " + fx("cube.cplx") + " -o " + out.string()).status == 3);
}

TEST_CASE("export sql", "[cli]")
{
    const auto r = run("export-sql " + fx("square.cplx"));
    REQUIRE(r.status == 0);
    const auto l = lines(r.out);
    REQUIRE_FALSE(l.empty());
    CHECK(l.front() == "CREATE TABLE M(cell, boundary, sigma);");
    int inserts = 0;
    for (const auto& x : l)
        inserts += x.rfind("INSERT INTO M VALUES", 0) == 0;
    CHECK(inserts == 12);
    CHECK(r.out.find("create view M_squared as") != std::string::npos);
}
