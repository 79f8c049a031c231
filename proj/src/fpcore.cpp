#include "npi/fpcore.hpp"

namespace npi {

PrimeContext::PrimeContext(Int prime) : p_(std::move(prime)) {
    if (p_ < 2 || mpz_probab_prime_p(p_.get_mpz_t(), 64) == 0) {
        throw std::invalid_argument("PrimeContext: modulus is not prime: " + p_.get_str());
    }
    r_ = static_cast<unsigned>(mpz_sizeinbase(p_.get_mpz_t(), 2));
}

Int dist_mod(const Int& s, const Int& m) {
    if (m < 1) throw std::domain_error("dist_mod: modulus must be positive");
    Int r;
    mpz_mod(r.get_mpz_t(), s.get_mpz_t(), m.get_mpz_t());  // r in [0, m)
    if (2 * r > m) r = m - r;
    return r;
}

CenteredResidue centered(const Int& s, const PrimeContext& ctx) {
    Int r;
    mpz_mod(r.get_mpz_t(), s.get_mpz_t(), ctx.p().get_mpz_t());
    if (2 * r > ctx.p()) r -= ctx.p();
    return CenteredResidue{r};
}

Int mod_inverse(const Int& a, const PrimeContext& ctx) {
    Int b;
    if (mpz_invert(b.get_mpz_t(), a.get_mpz_t(), ctx.p().get_mpz_t()) == 0) {
        throw std::domain_error("mod_inverse: argument is 0 mod p");
    }
    return b;
}

Int inv_factorial(const Int& i, const PrimeContext& ctx) {
    if (i < 0 || i >= ctx.p()) throw std::domain_error("inv_factorial: index out of range [0, p)");
    // i < p, so i! is a product of units mod p.
    Int fact = 1;
    for (Int j = 2; j <= i; ++j) {
        fact = fact * j % ctx.p();
    }
    return mod_inverse(fact, ctx);
}

Int binomial_int(const Int& t, unsigned long i) {
    Int r;
    mpz_bin_ui(r.get_mpz_t(), t.get_mpz_t(), i);
    return r;
}

FpPolynomial::FpPolynomial(PrimeContext ctx, std::vector<Int> coeffs, int support_low)
    : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)), support_low_(support_low) {
    if (coeffs_.empty()) coeffs_.push_back(0);
    if (support_low_ < 0 || support_low_ > static_cast<int>(coeffs_.size())) {
        throw std::invalid_argument("FpPolynomial: support cutoff out of range");
    }
    for (size_t j = 0; j < coeffs_.size(); ++j) {
        mpz_mod(coeffs_[j].get_mpz_t(), coeffs_[j].get_mpz_t(), ctx_.p().get_mpz_t());
        if (static_cast<int>(j) < support_low_ && coeffs_[j] != 0) {
            throw std::invalid_argument("FpPolynomial: nonzero coefficient below declared support");
        }
    }
}

int FpPolynomial::degree() const {
    for (int j = declared_degree(); j >= 0; --j) {
        if (coeffs_[j] != 0) return j;
    }
    return -1;
}

Int FpPolynomial::eval(const Int& t) const {
    Int x;
    mpz_mod(x.get_mpz_t(), t.get_mpz_t(), ctx_.p().get_mpz_t());
    Int acc = 0;
    for (int j = declared_degree(); j >= 0; --j) {
        acc = (acc * x + coeffs_[j]) % ctx_.p();
    }
    return acc;
}

FpPolynomial FpPolynomial::operator+(const FpPolynomial& o) const {
    if (!(ctx_ == o.ctx_)) throw std::invalid_argument("FpPolynomial: mismatched moduli");
    std::vector<Int> c(std::max(coeffs_.size(), o.coeffs_.size()), 0);
    for (size_t j = 0; j < c.size(); ++j) {
        if (j < coeffs_.size()) c[j] += coeffs_[j];
        if (j < o.coeffs_.size()) c[j] += o.coeffs_[j];
    }
    return FpPolynomial(ctx_, std::move(c), std::min(support_low_, o.support_low_));
}

FpPolynomial FpPolynomial::operator-(const FpPolynomial& o) const {
    if (!(ctx_ == o.ctx_)) throw std::invalid_argument("FpPolynomial: mismatched moduli");
    std::vector<Int> c(std::max(coeffs_.size(), o.coeffs_.size()), 0);
    for (size_t j = 0; j < c.size(); ++j) {
        if (j < coeffs_.size()) c[j] += coeffs_[j];
        if (j < o.coeffs_.size()) c[j] -= o.coeffs_[j];
    }
    return FpPolynomial(ctx_, std::move(c), std::min(support_low_, o.support_low_));
}

bool FpPolynomial::operator==(const FpPolynomial& o) const {
    if (!(ctx_ == o.ctx_)) return false;
    size_t m = std::max(coeffs_.size(), o.coeffs_.size());
    for (size_t j = 0; j < m; ++j) {
        const Int& a = j < coeffs_.size() ? coeffs_[j] : Int(0);
        const Int& b = j < o.coeffs_.size() ? o.coeffs_[j] : Int(0);
        if (a != b) return false;
    }
    return true;
}

}  // namespace npi
