#include "npi/exceptional.hpp"

#include "npi/observe.hpp"

#include <algorithm>

namespace npi {

Int nearest_int(const Rat& x) {
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    Rat frac(r, x.get_den());
    frac.canonicalize();
    if (frac * 2 < 1) return q;
    if (frac * 2 > 1) return q + 1;
    // exact half: round to even
    return mpz_even_p(q.get_mpz_t()) ? q : q + 1;
}

void FlatSpec::validate() const {
    if (n < 1) throw std::domain_error("FlatSpec: need n >= 1");
    if (h < 1) throw std::domain_error("FlatSpec: need h >= 1");
    if (static_cast<int>(c.size()) != n) throw std::domain_error("FlatSpec: need exactly n c_i");
    Int fact = 1, hp = 1;
    for (int i = 1; i <= n; ++i) {
        fact *= i;
        hp *= h;
        // 0 < c_i h^i / i! < delta, kept in integers as 0 < c_i h^i < delta i!
        if (c[i - 1] < 1 || c[i - 1] * hp >= delta * fact) {
            throw std::domain_error("FlatSpec: c_" + std::to_string(i) +
                                    " outside (0, delta*i!/h^i)");
        }
    }
}

FlatSpec random_flat_spec(const PrimeContext& ctx, int n, long h, const Int& delta,
                          unsigned long seed) {
    FlatSpec spec{ctx, n, h, delta, {}};
    Rng rng(seed);
    Int fact = 1, hp = 1;
    for (int i = 1; i <= n; ++i) {
        fact *= i;
        hp *= h;
        Int cap = delta * fact / hp;  // c_i < delta*i!/h^i
        if (cap < 2) {
            throw std::domain_error("random_flat_spec: empty c range at i=" + std::to_string(i));
        }
        spec.c.push_back(rng.range(1, cap - 1));
    }
    spec.validate();
    return spec;
}

FpPolynomial construct_flat(const FlatSpec& spec) {
    spec.validate();
    const Int& p = spec.ctx.p();
    // Falling-factorial expansion: X(X-1)...(X-i+1) built up iteratively.
    std::vector<Int> coeffs(spec.n + 1, 0);
    std::vector<Int> falling{0, 1};  // X
    for (int i = 1; i <= spec.n; ++i) {
        Int w = spec.c[i - 1] * inv_factorial(i, spec.ctx) % p;
        for (size_t j = 0; j < falling.size(); ++j) {
            coeffs[j] = (coeffs[j] + w * falling[j]) % p;
        }
        if (i < spec.n) {
            // multiply by (X - i)
            std::vector<Int> next(falling.size() + 1, 0);
            for (size_t j = 0; j < falling.size(); ++j) {
                next[j + 1] = (next[j + 1] + falling[j]) % p;
                next[j] = (next[j] - Int(i) * falling[j]) % p;
                if (next[j] < 0) next[j] += p;
            }
            falling = std::move(next);
        }
    }
    FpPolynomial F(spec.ctx, coeffs, 0);

    // F(t) == sum c_i C(t,i) on [0, h), and each term is < delta there.
    Int bound = Int(spec.n) * spec.delta;
    auto check = [&](long t) {
        Int v = F.eval(Int(t));
        if (v >= bound) {
            throw std::logic_error("construct_flat: flatness bound violated at t=" +
                                   std::to_string(t));
        }
    };
    check(0);
    check(spec.h - 1);
    if (spec.h <= 10'000) {
        for (long t = 1; t + 1 < spec.h; ++t) check(t);
    } else {
        for (long t : sample_points_window(0, spec.h, 10'000, 427)) check(t);
    }
    return F;
}

OscillatingSpec auto_oscillating_spec(const PrimeContext& ctx, int n, const Int& d0) {
    if (n < 0) throw std::domain_error("auto_oscillating_spec: need n >= 0");
    OscillatingSpec spec{ctx, n, {}};
    spec.diffs.push_back(d0);
    for (int i = 1; i <= n; ++i) {
        // (-1/2)^{1+n-i} * p
        int e = 1 + n - i;
        Rat x(ctx.p(), Int(1) << e);
        if (e % 2 != 0) x = -x;
        spec.diffs.push_back(nearest_int(x));
    }
    return spec;
}

Int OscillatingPolynomial::f_int(const Int& x) const {
    Int s = 0;
    for (size_t i = 0; i < diffs.size(); ++i) s += diffs[i] * binomial_int(x, i);
    return s;
}

Int OscillatingPolynomial::c_at(const Int& x) const {
    const int nn = n();
    // 2^{n+1} c(x) = sum_i (-1)^{n+1-i} 2^i C(x,i) - (-1)^{1+n} (-1)^x
    Int s = 0;
    for (int i = 0; i <= nn; ++i) {
        Int term = (Int(1) << i) * binomial_int(x, i);
        s += ((nn + 1 - i) % 2 != 0) ? -term : term;
    }
    Int parity = mpz_odd_p(x.get_mpz_t()) ? -1 : 1;
    if ((nn + 1) % 2 != 0) parity = -parity;
    s -= parity;
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), s.get_mpz_t(), Int(Int(1) << (nn + 1)).get_mpz_t());
    if (r != 0) throw std::logic_error("oscillating c(x) not an integer");
    return q;
}

Int OscillatingPolynomial::d_at(const Int& x) const { return f_int(x) - ctx().p() * c_at(x); }

OscillatingPolynomial construct_oscillating(const OscillatingSpec& spec, const Int& delta) {
    if (spec.n < 0 || static_cast<int>(spec.diffs.size()) != spec.n + 1) {
        throw std::domain_error("construct_oscillating: need n+1 difference values");
    }
    const Int& p = spec.ctx.p();
    // Binomial-to-standard basis: C(x,i) = falling(x,i)/i!, expand mod p.
    std::vector<Int> coeffs(spec.n + 1, 0);
    std::vector<Int> falling{1};  // C(x,0)
    for (int i = 0; i <= spec.n; ++i) {
        Int d;
        mpz_mod(d.get_mpz_t(), spec.diffs[i].get_mpz_t(), p.get_mpz_t());
        Int w = (i == 0) ? d : d * inv_factorial(i, spec.ctx) % p;
        for (size_t j = 0; j < falling.size(); ++j) coeffs[j] = (coeffs[j] + w * falling[j]) % p;
        if (i < spec.n) {
            std::vector<Int> next(falling.size() + 1, 0);
            for (size_t j = 0; j < falling.size(); ++j) {
                next[j + 1] = (next[j + 1] + falling[j]) % p;
                next[j] = (next[j] - Int(i) * falling[j]) % p;
                if (next[j] < 0) next[j] += p;
            }
            falling = std::move(next);
        }
    }
    OscillatingPolynomial out{FpPolynomial(spec.ctx, coeffs, 0), spec.diffs,
                              delta > 0 && (Int(1) << (spec.n + 1)) * delta > p};
    return out;
}

FpPolynomial construct_scaled(long s, const std::vector<long>& r, const Int& K,
                              long H, const PrimeContext& ctx, unsigned long seed) {
    const Int& p = ctx.p();
    if (s < 2) throw std::domain_error("construct_scaled: need s >= 2");
    const int ell = static_cast<int>(r.size()) - 1;
    if (ell < 1) throw std::domain_error("construct_scaled: need degree >= 1");
    if (H < s) throw std::domain_error("construct_scaled: need H >= s");
    Int Hl = 1;
    for (int i = 0; i < ell; ++i) Hl *= H;
    if (K <= Int(ell) * Hl) throw std::domain_error("construct_scaled: need K > l*H^l");
    Int si = 1;
    for (int i = 0; i <= ell; ++i) {
        if (r[i] < 0 || r[i] >= si) {
            throw std::domain_error("construct_scaled: r_" + std::to_string(i) +
                                    " outside [0, s^i)");
        }
        si *= s;
    }

    Rng rng(seed);
    long umax = H / s;
    std::vector<Int> A(ell + 1), B(ell + 1);
    for (int attempt = 0;; ++attempt) {
        if (attempt >= 10'000) {
            throw std::domain_error("construct_scaled: could not hit the [0,K] budget");
        }
        // A_i in [ceil(r_i p / s^i), floor(r_i p / s^i + K/(l H^i))]
        si = 1;
        Int Hi = 1;
        for (int i = 0; i <= ell; ++i) {
            Int lo = (Int(r[i]) * p + si - 1) / si;
            Int hi = Int(r[i]) * p / si + K / (Int(ell) * Hi);
            if (lo > hi) {
                throw std::domain_error("construct_scaled: empty interval for A_" +
                                        std::to_string(i));
            }
            A[i] = rng.range(lo, hi);
            B[i] = A[i] * si % p;  // == A_i s^i mod p, small by construction
            si *= s;
            Hi *= H;
        }
        // Worst case over the guaranteed window: sum B_i u^i at u = H/s.
        Int worst = 0, up = 1;
        for (int i = 0; i <= ell; ++i) {
            worst += B[i] * up;
            up *= umax;
        }
        if (worst <= K) break;
    }

    for (auto& a : A) {
        mpz_mod(a.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
    }
    FpPolynomial F(ctx, A, 0);

    auto check = [&](long u) {
        Int v = F.eval(Int(s * u));
        if (v > K) {
            throw std::logic_error("construct_scaled: value outside [0,K] at u=" +
                                   std::to_string(u));
        }
    };
    if (umax <= 10'000) {
        for (long u = 1; u <= umax; ++u) check(u);
    } else {
        for (long u : sample_points_window(1, umax + 1, 10'000, seed + 1)) check(u);
    }
    return F;
}

}  // namespace npi
