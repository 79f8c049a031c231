#ifndef NPI_ANALYSIS_HPP
#define NPI_ANALYSIS_HPP

#include "npi/fpcore.hpp"

#include <string>
#include <vector>

namespace npi {

/// I = {u+1, ..., u+H}, J = {v+1, ..., v+K}; J is read modulo p.
struct IntervalPair {
    Int u;
    long H;
    Int v;
    Int K;
};

/// Exact count of t in I with F(t) in J (mod p), by brute force. H <= 10^7.
long count_nfij(const FpPolynomial& F, const IntervalPair& pair);

/// kappa(l) <= l^2 - l + 1 (Wooley's bound, the strongest one we cite).
Int kappa_bound(long ell);

/// Reference value H * ((K/p)^{1/(2 kappa)} + (K/H^l)^{1/(2 kappa)}).
/// Asymptotic: the H^{o(1)} factor and implied constants are dropped, so this
/// is a diagnostic, never a correctness assertion with constant 1.
double nfij_bound(long H, const Int& K, const Int& p, long ell);

struct MfBound {
    double log10_value;           // log10 of rho^{-2^{n-1}-n(n^2+1)/2} delta^{n+1} h^{(n^2-n+2)/2}
    double log10_upper_rho1;      // log10 of delta^n h^{n(n+1)/2}      (rho = 1 family size)
    double log10_lower_rho1;      // log10 of delta^{n+1} h^{-n(n+1)/2}
    bool regime_h;                // h^{n-1} <= delta * p^{-eps}
    bool regime_delta;            // delta < p^{1-eps}
    bool regime_rho;              // rho >= max(delta/p, h^{-1/2^{n-1}}) * p^eps
};

/// Family-size bound for polynomials indistinguishable from f on [-h, h],
/// with the p^{o(1)} factor dropped; log10 form to avoid overflow.
MfBound mf_bound(int n, long h, const Int& delta, const Int& p, double rho,
                 double eps = 0.01);

/// det of the (n+1)x(n+1) Hilbert matrix H_{ij} = 1/(i+j-1), by the closed
/// product formula prod_{i=1}^n (i!)^4 / prod_{i=1}^{2n+1} i!.
Rat hilbert_det(int n);

/// Same determinant by exact Gaussian elimination (cross-check oracle).
Rat hilbert_det_elimination(int n);

/// E over uniform t_1..t_d in [-h,h] of the squared volume of the row lattice
/// spanned by (C(t_1,i), ..., C(t_d,i)), i = 0..n:
/// (prod_{i=1}^n 1/i!)^2 * C(d,n+1) * (2h)^{n(n+1)} * (n+1)! * hilbert_det(n).
Rat expected_vol_sq(int n, long h, int d);

struct McEstimate {
    double mean;
    double std_error;
};

/// Monte Carlo estimate of the same expectation via exact Gram determinants.
McEstimate expected_vol_sq_mc(int n, long h, int d, long trials, unsigned long seed);

struct PredictorInput {
    int n;
    long h;
    int d;
    bool large_p = false;   // HIMMO convention delta = floor(p / 2^{b+1})
    unsigned b = 0;         // used when large_p: log(p/delta) ~ (b+1) log 2
    Int p = 0;              // used when !large_p
    Int delta = 0;
};

/// Success predictor
/// S = log(p/(d*delta))
///     + (sum_{i=1}^n [log((n+1+i)!) - log(i!)] - log C(d,n+1) - n(n+1)log(2h))
///       / (2(d-n-1)),
/// natural logs at >= 30 significant digits. Requires d > n+1.
double predictor_s(const PredictorInput& inp);

/// Smallest d in (n+1, d_max] with S > 0, or -1 if S stays nonpositive.
int predictor_crossover(PredictorInput inp, int d_max);

}  // namespace npi

#endif
