#ifndef NPI_EXCEPTIONAL_HPP
#define NPI_EXCEPTIONAL_HPP

#include "npi/fpcore.hpp"

#include <vector>

namespace npi {

/// Closest integer to an exact rational; ties round half-to-even.
Int nearest_int(const Rat& x);

/// Flat family: F(X) = sum_{i=1}^n c_i * A_i * X(X-1)...(X-i+1) with
/// A_i = inv_factorial(i). Requires 0 < c_i * h^i / i! < delta for every i.
struct FlatSpec {
    PrimeContext ctx;
    int n;
    long h;
    Int delta;
    std::vector<Int> c;  // c_1 .. c_n

    void validate() const;
};

/// Seeded c_i, uniform in [1, floor(delta * i! / h^i) - 1].
FlatSpec random_flat_spec(const PrimeContext& ctx, int n, long h, const Int& delta,
                          unsigned long seed);

/// Expands the flat spec into standard coefficient form mod p. On [0, h) the
/// representative of F(t) in [0, p) stays below n*delta (checked on a seeded
/// sample of 10^4 points plus the endpoints).
FpPolynomial construct_flat(const FlatSpec& spec);

/// Oscillating family, built from the discrete difference operator D:
/// f(x) = sum_{i=0}^n D^i d(0) * C(x, i). diffs holds exact signed integers
/// D^0 d(0) .. D^n d(0); auto-generation picks
/// D^i d(0) = nearest((-1/2)^{1+n-i} * p) for i >= 1.
struct OscillatingSpec {
    PrimeContext ctx;
    int n;
    std::vector<Int> diffs;  // exact signed D^i d(0), i = 0..n
};

OscillatingSpec auto_oscillating_spec(const PrimeContext& ctx, int n, const Int& d0 = 0);

/// The constructed polynomial plus exact evaluators for the decomposition
/// f(x) = d(x) + p * c(x): c uses the closed form
/// c(x) = sum_{i=0}^n (-1/2)^{n+1-i} C(x,i) - (-1/2)^{1+n} (-1)^x, carried in
/// integers scaled by 2^{n+1} (c(x) is integer-valued for integer x), and
/// d(x) = f_Z(x) - p*c(x) with f_Z the integer binomial-basis form.
struct OscillatingPolynomial {
    FpPolynomial f;              // mod-p standard coefficient form
    std::vector<Int> diffs;      // exact signed D^i d(0)
    bool interesting;            // regime flag: 2^{n+1} * delta > p

    Int f_int(const Int& x) const;  // f_Z(x), exact integer
    Int c_at(const Int& x) const;   // c(x), exact integer
    Int d_at(const Int& x) const;   // d(x) = f_Z(x) - p*c(x)

    const PrimeContext& ctx() const { return f.ctx(); }
    int n() const { return static_cast<int>(diffs.size()) - 1; }
};

/// Builds the oscillating polynomial. `delta` only feeds the recorded regime
/// flag `interesting` = (2^{n+1} * delta > p); pass 0 to skip.
OscillatingPolynomial construct_oscillating(const OscillatingSpec& spec, const Int& delta = 0);

/// Scaled family: F(X) = sum_{i=0}^l A_i X^i with A_i seeded from
/// [r_i*p/s^i, r_i*p/s^i + K/(l*H^i)], so that F(s*u) mod p lands in [0, K]
/// for every u in [1, H/s] (verified at construction; exhaustively when
/// H/s <= 10^4, otherwise on a seeded sample). l = r.size() - 1 >= 1 and
/// K > l*H^l are required.
FpPolynomial construct_scaled(long s, const std::vector<long>& r, const Int& K,
                              long H, const PrimeContext& ctx, unsigned long seed = 1);

}  // namespace npi

#endif
