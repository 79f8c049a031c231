#include "npi/analysis.hpp"

#include "npi/lattice.hpp"
#include "npi/observe.hpp"

#include <mpfr.h>

#include <cmath>

namespace npi {

long count_nfij(const FpPolynomial& F, const IntervalPair& pair) {
    const Int& p = F.ctx().p();
    if (pair.H < 1 || Int(pair.H) >= p || pair.K < 1 || pair.K >= p) {
        throw std::domain_error("count_nfij: need 1 <= H, K < p");
    }
    if (pair.H > 10'000'000) throw std::domain_error("count_nfij: H above brute-force cap 10^7");
    // J = {v+1, ..., v+K} reduced mod p: membership of y in [0,p) means
    // (y - v - 1) mod p < K.
    Int vlo = (pair.v + 1) % p;
    if (vlo < 0) vlo += p;
    long count = 0;
    for (long i = 1; i <= pair.H; ++i) {
        Int y = F.eval(pair.u + i);
        Int off = (y - vlo) % p;
        if (off < 0) off += p;
        if (off < pair.K) ++count;
    }
    return count;
}

Int kappa_bound(long ell) {
    if (ell < 1) throw std::domain_error("kappa_bound: need l >= 1");
    return Int(ell) * ell - ell + 1;
}

double nfij_bound(long H, const Int& K, const Int& p, long ell) {
    double kappa = kappa_bound(ell).get_d();
    double logK = std::log(K.get_d());
    double t1 = std::exp((logK - std::log(p.get_d())) / (2 * kappa));
    double t2 = std::exp((logK - ell * std::log(static_cast<double>(H))) / (2 * kappa));
    return static_cast<double>(H) * (t1 + t2);
}

MfBound mf_bound(int n, long h, const Int& delta, const Int& p, double rho, double eps) {
    if (n < 1 || h < 1 || delta < 1) throw std::domain_error("mf_bound: bad parameters");
    const double l10d = std::log10(delta.get_d());
    const double l10h = std::log10(static_cast<double>(h));
    const double l10p = std::log10(p.get_d());
    MfBound out{};
    double rho_exp = -(std::pow(2.0, n - 1) + n * (static_cast<double>(n) * n + 1) / 2.0);
    out.log10_value = rho_exp * std::log10(rho) + (n + 1) * l10d +
                      (static_cast<double>(n) * n - n + 2) / 2.0 * l10h;
    out.log10_upper_rho1 = n * l10d + n * (n + 1) / 2.0 * l10h;
    out.log10_lower_rho1 = (n + 1) * l10d - n * (n + 1) / 2.0 * l10h;
    out.regime_h = (n - 1) * l10h <= l10d - eps * l10p;
    out.regime_delta = l10d < (1 - eps) * l10p;
    double rho_floor = std::max(l10d - l10p, -l10h / std::pow(2.0, n - 1)) + eps * l10p;
    out.regime_rho = std::log10(rho) >= rho_floor;
    return out;
}

Rat hilbert_det(int n) {
    if (n < 0) throw std::domain_error("hilbert_det: need n >= 0");
    Rat num = 1, den = 1;
    Int fact = 1;
    for (int i = 1; i <= n; ++i) {
        fact *= i;
        Rat f4(fact);
        num *= f4 * f4 * f4 * f4;
    }
    fact = 1;
    for (int i = 1; i <= 2 * n + 1; ++i) {
        fact *= i;
        den *= Rat(fact);
    }
    Rat out = num / den;
    out.canonicalize();
    return out;
}

Rat hilbert_det_elimination(int n) {
    int m = n + 1;
    std::vector<std::vector<Rat>> a(m, std::vector<Rat>(m));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) a[i][j] = Rat(1, i + j + 1);
    }
    Rat det = 1;
    for (int c = 0; c < m; ++c) {
        det *= a[c][c];  // Hilbert minors are nonsingular; no pivoting needed
        Rat inv = 1 / a[c][c];
        for (int r = c + 1; r < m; ++r) {
            Rat f = a[r][c] * inv;
            for (int cc = c; cc < m; ++cc) a[r][cc] -= f * a[c][cc];
        }
    }
    det.canonicalize();
    return det;
}

Rat expected_vol_sq(int n, long h, int d) {
    if (d < n + 1 || h < 1) throw std::domain_error("expected_vol_sq: need d >= n+1, h >= 1");
    Rat inv_fact_sq = 1;
    Int fact = 1;
    for (int i = 1; i <= n; ++i) {
        fact *= i;
        inv_fact_sq /= Rat(fact * fact);
    }
    Int binom;
    mpz_bin_uiui(binom.get_mpz_t(), d, n + 1);
    Rat twoh_pow = 1;
    for (int i = 0; i < n * (n + 1); ++i) twoh_pow *= 2 * h;
    Int np1_fact = 1;
    for (int i = 2; i <= n + 1; ++i) np1_fact *= i;
    Rat out = inv_fact_sq * Rat(binom) * twoh_pow * Rat(np1_fact) * hilbert_det(n);
    out.canonicalize();
    return out;
}

McEstimate expected_vol_sq_mc(int n, long h, int d, long trials, unsigned long seed) {
    if (trials < 1) throw std::domain_error("expected_vol_sq_mc: need trials >= 1");
    if (d < n + 1) throw std::domain_error("expected_vol_sq_mc: need d >= n+1");
    Rng rng(seed);
    double sum = 0, sum_sq = 0;
    IntMat rows(n + 1, IntVec(d));
    for (long t = 0; t < trials; ++t) {
        for (int j = 0; j < d; ++j) {
            Int tj = rng.range(-Int(h), Int(h));
            for (int i = 0; i <= n; ++i) rows[i][j] = binomial_int(tj, i);
        }
        double v = gram_det(rows).get_d();
        sum += v;
        sum_sq += v * v;
    }
    double mean = sum / trials;
    double var = trials > 1 ? (sum_sq - trials * mean * mean) / (trials - 1) : 0.0;
    return McEstimate{mean, std::sqrt(std::max(var, 0.0) / trials)};
}

namespace {

// log(x!) at 30+ digits
void mpfr_log_factorial(mpfr_t out, unsigned long x, mpfr_prec_t prec) {
    mpfr_t t;
    mpfr_init2(t, prec);
    mpfr_set_ui(out, 0, MPFR_RNDN);
    for (unsigned long i = 2; i <= x; ++i) {
        mpfr_set_ui(t, i, MPFR_RNDN);
        mpfr_log(t, t, MPFR_RNDN);
        mpfr_add(out, out, t, MPFR_RNDN);
    }
    mpfr_clear(t);
}

}  // namespace

double predictor_s(const PredictorInput& inp) {
    if (inp.d <= inp.n + 1) throw std::domain_error("predictor_s: need d > n+1");
    const mpfr_prec_t prec = 128;  // ~38 decimal digits
    mpfr_t s, t, u;
    mpfr_init2(s, prec);
    mpfr_init2(t, prec);
    mpfr_init2(u, prec);

    // log(p/(d*delta)) = log(p/delta) - log d
    if (inp.large_p) {
        mpfr_const_log2(s, MPFR_RNDN);
        mpfr_mul_ui(s, s, inp.b + 1, MPFR_RNDN);
    } else {
        if (inp.p < 2 || inp.delta < 1) throw std::domain_error("predictor_s: need p and delta");
        mpfr_set_z(s, inp.p.get_mpz_t(), MPFR_RNDN);
        mpfr_set_z(t, inp.delta.get_mpz_t(), MPFR_RNDN);
        mpfr_div(s, s, t, MPFR_RNDN);
        mpfr_log(s, s, MPFR_RNDN);
    }
    mpfr_set_ui(t, static_cast<unsigned long>(inp.d), MPFR_RNDN);
    mpfr_log(t, t, MPFR_RNDN);
    mpfr_sub(s, s, t, MPFR_RNDN);

    // bracket: sum_i [log((n+1+i)!) - log(i!)] - log C(d,n+1) - n(n+1) log(2h)
    mpfr_t br;
    mpfr_init2(br, prec);
    mpfr_set_ui(br, 0, MPFR_RNDN);
    for (int i = 1; i <= inp.n; ++i) {
        mpfr_log_factorial(t, static_cast<unsigned long>(inp.n + 1 + i), prec);
        mpfr_add(br, br, t, MPFR_RNDN);
        mpfr_log_factorial(t, static_cast<unsigned long>(i), prec);
        mpfr_sub(br, br, t, MPFR_RNDN);
    }
    Int binom;
    mpz_bin_uiui(binom.get_mpz_t(), inp.d, inp.n + 1);
    mpfr_set_z(t, binom.get_mpz_t(), MPFR_RNDN);
    mpfr_log(t, t, MPFR_RNDN);
    mpfr_sub(br, br, t, MPFR_RNDN);
    mpfr_set_ui(t, 2, MPFR_RNDN);
    mpfr_mul_si(t, t, inp.h, MPFR_RNDN);
    mpfr_log(t, t, MPFR_RNDN);
    mpfr_mul_ui(t, t, static_cast<unsigned long>(inp.n) * (inp.n + 1), MPFR_RNDN);
    mpfr_sub(br, br, t, MPFR_RNDN);

    mpfr_div_ui(br, br, 2UL * static_cast<unsigned long>(inp.d - inp.n - 1), MPFR_RNDN);
    mpfr_add(s, s, br, MPFR_RNDN);
    double out = mpfr_get_d(s, MPFR_RNDN);
    mpfr_clears(s, t, u, br, static_cast<mpfr_ptr>(nullptr));
    return out;
}

int predictor_crossover(PredictorInput inp, int d_max) {
    for (int d = inp.n + 2; d <= d_max; ++d) {
        inp.d = d;
        if (predictor_s(inp) > 0) return d;
    }
    return -1;
}

}  // namespace npi
