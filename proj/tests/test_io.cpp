#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "npi/io.hpp"

#include <cstdio>
#include <sstream>

using namespace npi;

TEST_CASE("polynomial text roundtrip") {
    PrimeContext ctx{Int(10007)};
    FpPolynomial f(ctx, {Int(3), Int(0), Int(9999)}, 0);

    std::stringstream ss;
    write_polynomial(ss, f);
    FpPolynomial g = read_polynomial(ss);
    CHECK(g.ctx().p() == ctx.p());
    CHECK(g.coeffs() == f.coeffs());
    CHECK(g.eval(5) == f.eval(5));

    std::stringstream bad("10007\n3\nxyz\n");
    CHECK_THROWS_WITH_AS(read_polynomial(bad), doctest::Contains("line 3"),
                         std::runtime_error);

    std::stringstream empty("");
    CHECK_THROWS_AS(read_polynomial(empty), std::runtime_error);

    std::stringstream composite("15\n1\n");
    CHECK_THROWS(read_polynomial(composite));
}

TEST_CASE("observation CSV roundtrip") {
    PrimeContext ctx{Int(101)};
    std::vector<NoisyObservation> obs{{-3, Int(25), Int(4)}, {7, Int(100), Int(4)}};

    std::stringstream ss;
    write_observations(ss, obs);
    std::string text = ss.str();
    CHECK(text.substr(0, 9) == "t,u,delta");

    std::stringstream back(text);
    auto loaded = read_observations(back, ctx);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].t == -3);
    CHECK(loaded[0].u == 25);
    CHECK(loaded[1].delta == 4);

    // comment lines are skipped
    std::stringstream commented("# produced by a tool\nt,u,delta\n1,2,3\n");
    CHECK(read_observations(commented, ctx).size() == 1);

    // out-of-range u reported with its line number
    std::stringstream oor("t,u,delta\n1,2,3\n4,101,3\n");
    CHECK_THROWS_WITH_AS(read_observations(oor, ctx), doctest::Contains("line 3"),
                         std::runtime_error);

    std::stringstream mangled("t,u,delta\n1;2;3\n");
    CHECK_THROWS_AS(read_observations(mangled, ctx), std::runtime_error);
}

TEST_CASE("lattice text roundtrip") {
    IntegerLattice lat{{{1, 2, 3}, {0, -5, 7}}, 101};

    std::stringstream ss;
    write_lattice(ss, lat);
    IntegerLattice back = read_lattice(ss);
    CHECK(back.scale == 101);
    CHECK(back.rows == lat.rows);

    std::stringstream ragged("s 1\n1 2 3\n4 5\n");
    CHECK_THROWS_AS(read_lattice(ragged), std::runtime_error);

    std::stringstream no_header("1 2\n3 4\n");
    CHECK_THROWS_AS(read_lattice(no_header), std::runtime_error);
}

TEST_CASE("file save and load") {
    std::string path = "io_test_scratch.txt";
    save_file(path, "hello\nworld\n");
    CHECK(load_file(path) == "hello\nworld\n");
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_file("definitely/not/a/real/path.txt"), std::runtime_error);
    CHECK_THROWS_AS(save_file("definitely/not/a/real/path.txt", "x"), std::runtime_error);
}
