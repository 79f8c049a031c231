#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "npi/analysis.hpp"
#include "npi/exceptional.hpp"
#include "npi/observe.hpp"

#include <cmath>

using namespace npi;

TEST_CASE("small-value counting") {
    PrimeContext p11{Int(11)};
    FpPolynomial sq(p11, {Int(0), Int(0), Int(1)}, 0);

    CHECK(count_nfij(sq, IntervalPair{0, 3, 0, 5}) == 2);   // 1, 4 in {1..5}; 9 not
    CHECK(count_nfij(sq, IntervalPair{0, 3, 0, 10}) == 3);  // J covers every nonzero residue

    PrimeContext p101{Int(101)};
    FpPolynomial sq101(p101, {Int(0), Int(0), Int(1)}, 0);
    CHECK(count_nfij(sq101, IntervalPair{0, 4, 0, 16}) == 4);  // X^2 on {1..4} into {1..16}

    CHECK_THROWS_AS(count_nfij(sq, IntervalPair{0, 0, 0, 5}), std::domain_error);
    CHECK_THROWS_AS(count_nfij(sq, IntervalPair{0, 3, 0, 11}), std::domain_error);

    // count never exceeds H
    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        FpPolynomial f(p101, {rng.below(Int(101)), rng.below(Int(101)), rng.below(Int(101))}, 0);
        long c = count_nfij(f, IntervalPair{rng.range(0, 100), 20, rng.range(0, 100), 30});
        CHECK(c >= 0);
        CHECK(c <= 20);
    }
}

TEST_CASE("scaled family guarantees many small values") {
    PrimeContext p101{Int(101)};
    FpPolynomial F = construct_scaled(2, {0, 1}, Int(20), 8, p101, 1);
    // J = {0..K} handled as {1..K} plus an explicit zero check
    long count = count_nfij(F, IntervalPair{0, 8, -1, 21});
    CHECK(count >= 8 / 2 - 1);
}

TEST_CASE("kappa") {
    CHECK(kappa_bound(1) == 1);
    CHECK(kappa_bound(2) == 3);
    CHECK(kappa_bound(5) == 21);
    CHECK_THROWS_AS(kappa_bound(0), std::domain_error);
}

TEST_CASE("counting bound reference values") {
    Int p = 10007;
    CHECK(nfij_bound(50, p - 1, p, 2) >= 50.0);

    double tiny = nfij_bound(1, 1, p, 2);
    CHECK(tiny > 0.0);
    CHECK(tiny < 3.0);

    // Monte Carlo sanity: the true count stays within 10x of the reference
    PrimeContext ctx{Int(10007)};
    Rng rng(5);
    double bound = nfij_bound(100, 100, ctx.p(), 2);
    for (int trial = 0; trial < 1000; ++trial) {
        FpPolynomial f(ctx, {rng.below(ctx.p()), rng.below(ctx.p()), rng.below(ctx.p())}, 0);
        long c = count_nfij(f, IntervalPair{0, 100, 0, 100});
        CHECK(static_cast<double>(c) <= 10.0 * bound);
    }
}

TEST_CASE("family-size bound evaluator") {
    Int p("1267650600228229401496703205653");  // 100-bit prime
    Int delta = p >> 17;

    MfBound b1 = mf_bound(1, 1000, delta, p, 1.0);
    // h exponent is (1-1+2)/2 = 1 at n=1
    double expect = 2 * std::log10(delta.get_d()) + std::log10(1000.0);
    CHECK(b1.log10_value == doctest::Approx(expect).epsilon(1e-9));

    // rho = 1 pair ordering: lower <= upper whenever delta <= h^{n(n+1)}
    MfBound b2 = mf_bound(2, 100, Int(1000), p, 1.0);
    CHECK(b2.log10_lower_rho1 <= b2.log10_upper_rho1);

    // HIMMO-style parameters with a strict eps: outside the theorem regime
    Rng rng(9);
    PrimeContext himmo{rng.prime(112)};
    MfBound b3 = mf_bound(5, 1L << 15, himmo.p() >> 17, himmo.p(), 1.0, 0.5);
    CHECK(!b3.regime_h);
}

TEST_CASE("Hilbert determinants") {
    CHECK(hilbert_det(0) == 1);
    CHECK(hilbert_det(1) == Rat(1, 12));
    CHECK(hilbert_det(2) == Rat(1, 2160));
    for (int n = 0; n <= 6; ++n) {
        CHECK(hilbert_det(n) == hilbert_det_elimination(n));
    }
}

TEST_CASE("expected squared volume") {
    CHECK(expected_vol_sq(0, 100, 7) == 7);
    // n=1, d=2: C(2,2)*(2h)^2*2!*(1/12) = (2h)^2/6
    CHECK(expected_vol_sq(1, 50, 2) == Rat(5000, 3));

    auto mc0 = expected_vol_sq_mc(0, 100, 7, 10, 1);
    CHECK(mc0.mean == 7.0);
    CHECK(mc0.std_error == 0.0);

    auto mc_h0 = expected_vol_sq_mc(1, 0, 5, 20, 1);
    CHECK(mc_h0.mean == 0.0);

    // The closed form is the continuous-uniform limit; sampling is over the
    // integer window, which carries a ~3% moment bias at h=100. 5% relative
    // agreement is the meaningful tolerance here.
    auto mc = expected_vol_sq_mc(2, 100, 10, 20000, 7);
    double exact = expected_vol_sq(2, 100, 10).get_d();
    CHECK(std::abs(mc.mean - exact) <= 0.05 * exact);
}

TEST_CASE("success predictor") {
    PredictorInput small_b{10, 1 << 7, 0, true, 8, 0, 0};
    for (int d = 13; d < 256; ++d) {
        small_b.d = d;
        CHECK(predictor_s(small_b) < 0.0);
    }

    PredictorInput a{5, 1L << 15, 0, true, 16, 0, 0};
    CHECK(predictor_crossover(a, 100) == 23);
    a.d = 22;
    CHECK(predictor_s(a) <= 0.0);
    a.d = 23;
    CHECK(predictor_s(a) > 0.0);

    PredictorInput b{26, 1L << 31, 0, true, 32, 0, 0};
    CHECK(predictor_crossover(b, 500) == 426);

    PredictorInput c{26, 128, 0, true, 32, 0, 0};
    CHECK(predictor_crossover(c, 200) == 73);

    // a single sign change: negative below the crossover, positive after
    PredictorInput scan{5, 1L << 15, 0, true, 16, 0, 0};
    for (int d = 8; d <= 300; ++d) {
        scan.d = d;
        double s = predictor_s(scan);
        if (d < 23) {
            CHECK(s <= 0.0);
        } else {
            CHECK(s > 0.0);
        }
    }

    // explicit-p mode agrees with the large-p shortcut when delta = floor(p/2^{b+1})
    Rng rng(4);
    PredictorInput ex{5, 1L << 15, 40, false, 0, rng.prime(112), 0};
    ex.delta = ex.p >> 17;
    PredictorInput lg{5, 1L << 15, 40, true, 16, 0, 0};
    CHECK(predictor_s(ex) == doctest::Approx(predictor_s(lg)).epsilon(1e-6));

    CHECK_THROWS_AS(predictor_s(PredictorInput{5, 100, 6, true, 16, 0, 0}), std::domain_error);
}
