#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "npi/attacks.hpp"
#include "npi/exceptional.hpp"
#include "npi/observe.hpp"

using namespace npi;

namespace {

FpPolynomial random_poly(const PrimeContext& ctx, int n, int k, Rng& rng) {
    std::vector<Int> coeffs(n + 1, 0);
    for (int j = k; j <= n; ++j) coeffs[j] = rng.below(ctx.p());
    return FpPolynomial(ctx, coeffs, k);
}

InterpolationInstance observe_all(const PrimeContext& ctx, const FpPolynomial& f, int n, int k,
                                  long h, const Int& delta, const std::vector<long>& points,
                                  unsigned long seed) {
    InterpolationInstance inst{ctx, n, k, h, delta, points, {}};
    Rng rng(seed);
    for (long t : points) {
        if (delta == 0) {
            inst.observations.push_back(f.eval(t));
        } else {
            inst.observations.push_back(observe_additive(f, t, delta, rng).u);
        }
    }
    return inst;
}

}  // namespace

TEST_CASE("lattice construction matches the hand example") {
    PrimeContext p5{Int(5)};
    auto [lat, target] = build_interpolation_lattice(p5, 1, 1, 1, {2}, {Int(3)});
    CHECK(lat.rows == IntMat{{25, 0}, {10, 2}});
    CHECK(lat.scale == 5);
    CHECK(target == IntVec{15, 0});
    CHECK_THROWS_AS(build_interpolation_lattice(p5, 1, 1, 5, {2}, {Int(3)}), std::domain_error);
    CHECK_THROWS_AS(build_interpolation_lattice(p5, 1, 1, 0, {2}, {Int(3)}), std::domain_error);
}

TEST_CASE("built lattice determinant and the polynomial embedding") {
    PrimeContext p101{Int(101)};
    Rng rng(3);
    const int n = 3, k = 1, d = 6;
    FpPolynomial f = random_poly(p101, n, k, rng);
    std::vector<long> pts{-5, -2, 1, 3, 4, 7};
    Int delta = 4;
    IntVec obs;
    for (long t : pts) obs.push_back(f.eval(t));
    auto [lat, target] = build_interpolation_lattice(p101, n, k, delta, pts, obs);
    const int m = n + 1 - k;

    // block-triangular: det = p^{2d} * (2*delta)^m
    Int expect = 1;
    for (int i = 0; i < d; ++i) expect *= p101.p() * p101.p();
    for (int j = 0; j < m; ++j) expect *= 2 * delta;
    CHECK(abs(det(lat.rows)) == expect);
    CHECK(gram_det(lat.rows) == expect * expect);

    // the lattice point corresponding to f itself
    IntVec w(d + m, 0);
    for (int i = 0; i < d; ++i) w[i] = p101.p() * f.eval(pts[i]);
    for (int j = 0; j < m; ++j) w[d + j] = 2 * delta * f.coeffs()[k + j];
    CHECK(membership_coeffs(lat.rows, w).has_value());
}

TEST_CASE("first-block volume of the approximate-recovery lattice") {
    PrimeContext p101{Int(101)};
    std::vector<long> pts{-2, -1, 0, 1, 2};
    IntegerLattice gens = approx_first_block_generators(pts, 2, p101);
    VolumeResult v = lattice_volume(gens);
    CHECK(v.exact);
    CHECK(v.value == 101 * 101);  // p^{d-n-1}, d=5, n=2

    // boundary d = n+1: the block is all of Z^d
    IntegerLattice tight = approx_first_block_generators({-1, 0, 1}, 2, p101);
    CHECK(lattice_volume(tight).value == 1);
}

TEST_CASE("Lagrange elimination shape of the first block") {
    PrimeContext p101{Int(101)};
    std::vector<long> pts{-2, -1, 0, 1, 2};
    const int n = 2, d = 5;
    IntegerLattice gens = approx_first_block_generators(pts, n, p101);
    IntMat ech = integer_row_echelon(gens.rows);
    REQUIRE(ech.size() == static_cast<size_t>(d));
    // diagonal profile {1 x (n+1), p x (d-n-1)} up to column order
    int ones = 0, ps = 0;
    for (int i = 0; i < d; ++i) {
        if (ech[i][i] == 1) ++ones;
        if (ech[i][i] == 101) ++ps;
    }
    CHECK(ones == n + 1);
    CHECK(ps == d - n - 1);
}

TEST_CASE("noise-free recovery is exact interpolation") {
    PrimeContext ctx{Int(10007)};
    Rng rng(12);
    FpPolynomial f = random_poly(ctx, 2, 1, rng);
    auto inst = observe_all(ctx, f, 2, 1, 50, 0, {3, -7, 20}, 1);
    RecoveryResult res = recover_coefficients(inst);
    REQUIRE(res.coefficients.has_value());
    CHECK((*res.coefficients)[0] == f.coeffs()[1]);
    CHECK((*res.coefficients)[1] == f.coeffs()[2]);
    CHECK(res.verified);
    CHECK(res.cvp_sq_distance == 0);
}

TEST_CASE("noisy recovery at moderate scale") {
    Rng prng(99);
    PrimeContext ctx{prng.prime(64)};
    const int n = 3, k = 1, d = 8;
    const long h = 1 << 20;
    Int delta = 1 << 10;
    int good = 0;
    for (int trial = 0; trial < 20; ++trial) {
        unsigned long s = 500 + trial;
        Rng rng(s);
        FpPolynomial f = random_poly(ctx, n, k, rng);
        auto pts = sample_points(h, d, s + 1);
        auto inst = observe_all(ctx, f, n, k, h, delta, pts, s + 2);
        RecoveryResult res = recover_coefficients(inst);
        if (res.coefficients && (*res.coefficients)[0] == f.coeffs()[1] &&
            (*res.coefficients)[1] == f.coeffs()[2] && (*res.coefficients)[2] == f.coeffs()[3]) {
            CHECK(res.verified);
            ++good;
        }
    }
    CHECK(good >= 19);
}

TEST_CASE("flat instances defeat recovery yet match every observation") {
    Rng prng(4);
    PrimeContext ctx{prng.prime(96)};
    const int n = 2;
    const long h = 64;
    Int delta = ctx.p() >> 10;  // huge noise: h^k = 1 <= delta
    FlatSpec spec = random_flat_spec(ctx, n, h, delta / n, 21);
    FpPolynomial f = construct_flat(spec);

    auto pts = sample_points_window(0, h, 8, 5);
    auto inst = observe_all(ctx, f, n, 0, h, delta, pts, 6);
    RecoveryResult res = recover_coefficients(inst);
    CHECK(res.warning.find("regime") != std::string::npos);
    REQUIRE(res.coefficients.has_value());
    FpPolynomial cand(ctx, *res.coefficients, 0);
    CHECK(!(cand == f));  // some small polynomial, not the planted one
    for (int i = 0; i < inst.d(); ++i) {
        Int bound_sq = Int(inst.d() + inst.m()) * delta * delta;
        Int dist = dist_mod(cand.eval(pts[i]) - inst.observations[i], ctx.p());
        CHECK(dist * dist <= bound_sq);
    }
}

TEST_CASE("approximate recovery is exact when the instance pins f down") {
    PrimeContext p17{Int(17)};
    Rng rng(9);
    const int n = 2;
    for (int trial = 0; trial < 30; ++trial) {
        FpPolynomial f = random_poly(p17, n, 0, rng);
        std::vector<long> pts{-3, -2, -1, 0, 1, 2, 3};
        Int delta = 1;
        auto inst = observe_all(p17, f, n, 0, 3, delta, pts, 100 + trial);

        // the recovery minimizes the summed squared residual, so only keep
        // draws where f is the strict minimizer over all degree-n polynomials
        Int best = -1, second = -1;
        bool f_is_best = false;
        for (int a0 = 0; a0 < 17; ++a0)
            for (int a1 = 0; a1 < 17; ++a1)
                for (int a2 = 0; a2 < 17; ++a2) {
                    FpPolynomial g(p17, {Int(a0), Int(a1), Int(a2)}, 0);
                    Int acc = 0;
                    for (int i = 0; i < inst.d(); ++i) {
                        Int e = dist_mod(g.eval(pts[i]) - inst.observations[i], p17.p());
                        acc += e * e;
                    }
                    if (best < 0 || acc < best) {
                        second = best;
                        best = acc;
                        f_is_best = (g == f);
                    } else if (second < 0 || acc < second) {
                        second = acc;
                    }
                }
        if (!f_is_best || best == second) continue;  // ambiguous draw; skip

        GridSpec grid{-3, 4, 1 << 20, 1};
        auto res = approximate_recover(inst, f, grid);
        REQUIRE(res.candidate.has_value());
        CHECK(*res.candidate == f);
        CHECK(res.success_fraction == 1.0);
        for (const auto& [t, e] : res.error_profile) {
            CHECK(e >= 0.0);
            CHECK(e <= 0.5);
        }
    }
}

TEST_CASE("uniqueness at small parameters by exhaustion") {
    // no competing polynomial within the residual ball when noise is small
    PrimeContext p31{Int(31)};
    Rng rng(14);
    const int n = 2, k = 1;
    FpPolynomial f = random_poly(p31, n, k, rng);
    std::vector<long> pts{-2, -1, 1, 2, 3};
    Int delta = 1;
    auto inst = observe_all(p31, f, n, k, 3, delta, pts, 44);
    RecoveryResult res = recover_coefficients(inst);
    REQUIRE(res.coefficients.has_value());

    Int bound_sq = Int(2 * (inst.d() + inst.m())) * delta * delta;  // D^2 = 2(d+m) delta^2
    int within = 0;
    for (int a1 = 0; a1 < 31; ++a1)
        for (int a2 = 0; a2 < 31; ++a2) {
            FpPolynomial g(p31, {Int(0), Int(a1), Int(a2)}, 1);
            Int acc = 0;
            for (int i = 0; i < inst.d(); ++i) {
                Int d2 = dist_mod(g.eval(pts[i]) - inst.observations[i], p31.p());
                acc += d2 * d2;
            }
            if (acc <= bound_sq) ++within;
        }
    // the planted polynomial lies in the residual ball, and the recovery
    // picks it even if a handful of competitors share the ball
    CHECK(within >= 1);
    CHECK(within <= 3);
    CHECK((*res.coefficients)[0] == f.coeffs()[1]);
    CHECK((*res.coefficients)[1] == f.coeffs()[2]);
}

TEST_CASE("uniform rescaling does not move the CVP answer") {
    PrimeContext ctx{Int(10007)};
    Rng rng(23);
    FpPolynomial f = random_poly(ctx, 2, 0, rng);
    std::vector<long> pts{-4, -1, 0, 2, 5};
    auto inst = observe_all(ctx, f, 2, 0, 5, 2, pts, 31);
    auto [lat, target] = build_interpolation_lattice(inst);

    CvpSolution base = cvp_exact(lat, target);
    IntegerLattice scaled = lat;
    for (auto& row : scaled.rows) {
        for (auto& x : row) x *= 3;
    }
    IntVec target3 = target;
    for (auto& x : target3) x *= 3;
    CvpSolution tripled = cvp_exact(scaled, target3);
    CHECK(tripled.sq_distance == 9 * base.sq_distance);
    for (size_t i = 0; i < base.vector.size(); ++i) {
        CHECK(tripled.vector[i] == 3 * base.vector[i]);
    }
}

TEST_CASE("LSB observations, end to end") {
    Rng prng(61);
    PrimeContext ctx{prng.prime(30)};
    const unsigned r = ctx.bit_length();
    const unsigned s = 20;
    const int n = 1, d = 8;
    const long h = 1 << 14;
    Rng rng(7);
    FpPolynomial f = random_poly(ctx, n, 0, rng);

    auto pts = sample_points(h, d, 71);
    InterpolationInstance inst{ctx, n, 0, h, 0, pts, {}};
    Int lambda = 0;
    for (long t : pts) {
        Int v = f.eval(t) % (Int(1) << s);
        AdditiveView view = lsb_to_additive(LsbObservation{t, v, s}, ctx);
        inst.delta = view.delta;
        lambda = view.lambda;
        inst.observations.push_back(view.u);
    }
    CHECK(inst.delta == Int(1) << (r - s - 1));

    RecoveryResult res = recover_coefficients(inst);
    REQUIRE(res.coefficients.has_value());
    CHECK(res.verified);
    // the attack sees lambda * f. The leading coefficient is pinned exactly
    // (a unit slope error would cost >> delta at the outer points); the
    // constant term is only determined up to the noise radius.
    Int two_s = Int(1) << s;
    CHECK((*res.coefficients)[1] * two_s % ctx.p() == f.coeffs()[1]);
    Int eps0 = centered((*res.coefficients)[0] - lambda * f.coeffs()[0], ctx).value;
    CHECK(abs(eps0) <= 4 * inst.delta);
}

TEST_CASE("structure detector") {
    PrimeContext p101{Int(101)};

    SUBCASE("v_bound = 1 means the coefficients themselves must be small") {
        FpPolynomial small(p101, {Int(2), Int(3)}, 0);
        auto w = detect_exceptional_structure(small, 1, {Int(5), Int(5)});
        REQUIRE(w.has_value());
        CHECK(w->v == 1);
        CHECK(w->u == IntVec{2, 3});

        FpPolynomial big(p101, {Int(47), Int(3)}, 0);
        CHECK(!detect_exceptional_structure(big, 1, {Int(5), Int(5)}).has_value());
    }

    SUBCASE("scaled construction round-trip") {
        Rng prng(2);
        PrimeContext ctx{prng.prime(40)};
        FpPolynomial F = construct_scaled(2, {0, 1, 3}, Int(600), 16, ctx, 5);
        // multiplying by s^l clears the planted r_i p / s^i parts
        Int vb = 4;  // s^l = 4
        IntVec ub(3, Int(600) * 4);
        auto w = detect_exceptional_structure(F, vb, ub);
        REQUIRE(w.has_value());
        for (size_t i = 0; i < w->u.size(); ++i) {
            Int lhs;
            mpz_mod(lhs.get_mpz_t(), Int(F.coeffs()[i] * w->v).get_mpz_t(),
                    ctx.p().get_mpz_t());
            Int rhs;
            mpz_mod(rhs.get_mpz_t(), w->u[i].get_mpz_t(), ctx.p().get_mpz_t());
            CHECK(lhs == rhs);
        }
    }

    SUBCASE("random polynomials rarely admit a witness") {
        Rng prng(3);
        PrimeContext ctx{prng.prime(60)};
        Int sqrt_p;
        mpz_sqrt(sqrt_p.get_mpz_t(), ctx.p().get_mpz_t());
        int hits = 0;
        for (int trial = 0; trial < 40; ++trial) {
            Rng rng(trial);
            FpPolynomial f = random_poly(ctx, 2, 0, rng);
            if (detect_exceptional_structure(f, 1000, IntVec(3, sqrt_p)).has_value()) ++hits;
        }
        CHECK(hits <= 2);
    }

    SUBCASE("flat construction round-trip") {
        Rng prng(8);
        PrimeContext ctx{prng.prime(80)};
        const int n = 3;
        FlatSpec spec = random_flat_spec(ctx, n, 32, ctx.p() >> 20, 13);
        FpPolynomial F = construct_flat(spec);
        Int nf = 6;  // n!
        // centered(coeff * n!) is an integer combination of the small c_i
        Int cap = 0;
        for (const Int& c : spec.c) cap += c;
        cap *= 6 * 6;  // slack for the falling-factorial expansion weights
        auto w = detect_exceptional_structure(F, nf, IntVec(n + 1, cap));
        REQUIRE(w.has_value());
        CHECK(nf % w->v == 0);
    }
}
