#ifndef NPI_FPCORE_HPP
#define NPI_FPCORE_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace npi {

using Int = mpz_class;
using Rat = mpq_class;

/// Prime modulus together with its bit length r (2^{r-1} <= p < 2^r).
/// Primality is checked once at construction (>= 64 Miller-Rabin rounds).
class PrimeContext {
public:
    explicit PrimeContext(Int prime);

    const Int& p() const noexcept { return p_; }
    unsigned bit_length() const noexcept { return r_; }

    bool operator==(const PrimeContext& o) const { return p_ == o.p_; }

private:
    Int p_;
    unsigned r_;
};

/// Signed representative in (-p/2, p/2].
struct CenteredResidue {
    Int value;
};

/// |s|_m: distance from s to the nearest multiple of m. Result in [0, m/2].
Int dist_mod(const Int& s, const Int& m);

/// Representative of s mod p in (-p/2, p/2]; |centered(s)| == dist_mod(s, p).
CenteredResidue centered(const Int& s, const PrimeContext& ctx);

/// b with a*b == 1 (mod p), 0 < b < p. Throws for a == 0 (mod p).
Int mod_inverse(const Int& a, const PrimeContext& ctx);

/// A_i with A_i * i! == 1 (mod p). Requires 0 <= i < p.
Int inv_factorial(const Int& i, const PrimeContext& ctx);

/// Exact integer binomial coefficient C(t, i), valid for negative t.
Int binomial_int(const Int& t, unsigned long i);

/// Dense coefficient vector over F_p with a declared support cutoff:
/// coeffs[i] == 0 for i < support_low. The stored degree may carry a zero
/// leading coefficient (candidate polynomials during attacks).
class FpPolynomial {
public:
    FpPolynomial(PrimeContext ctx, std::vector<Int> coeffs, int support_low = 0);

    const PrimeContext& ctx() const noexcept { return ctx_; }
    const std::vector<Int>& coeffs() const noexcept { return coeffs_; }
    int support_low() const noexcept { return support_low_; }

    /// Highest stored index (declared degree; leading coeff may be zero).
    int declared_degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    /// Highest index with a nonzero coefficient, or -1 for the zero polynomial.
    int degree() const;

    /// Horner evaluation, result in [0, p-1]. t may be negative.
    Int eval(const Int& t) const;

    FpPolynomial operator+(const FpPolynomial& o) const;
    FpPolynomial operator-(const FpPolynomial& o) const;
    bool operator==(const FpPolynomial& o) const;

private:
    PrimeContext ctx_;
    std::vector<Int> coeffs_;
    int support_low_;
};

inline Int poly_eval(const FpPolynomial& f, const Int& t) { return f.eval(t); }

}  // namespace npi

#endif
