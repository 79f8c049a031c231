#ifndef NPI_ATTACKS_HPP
#define NPI_ATTACKS_HPP

#include "npi/fpcore.hpp"
#include "npi/lattice.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace npi {

/// The attacker's input: degree window [k..n], interval radius h, precision
/// delta, and d noisy observations u_i of f(t_i).
struct InterpolationInstance {
    PrimeContext ctx;
    int n;
    int k;
    long h;
    Int delta;
    std::vector<long> points;
    IntVec observations;

    int m() const { return n + 1 - k; }
    int d() const { return static_cast<int>(points.size()); }

    /// Enforces d >= n-k+2, |t_i| <= h, u_i in [0, p).
    void validate() const;
};

struct RecoveryResult {
    std::optional<IntVec> coefficients;  // a_k .. a_n, or nullopt on failure
    Rat cvp_sq_distance;                 // in the paper's rational-lattice units
    bool verified = false;               // observations re-checked within sqrt(d+m)*delta
    bool exact_cvp = false;
    std::string warning;                 // regime notes (e.g. h^k <= delta)
};

struct ApproxRecoveryResult {
    std::optional<FpPolynomial> candidate;
    std::vector<std::pair<long, double>> error_profile;  // (t, |f~(t)-f(t)|_p / p)
    double success_fraction = 0.0;                            // grid points with error <= delta
    Rat cvp_sq_distance;
    bool exact_cvp = false;
};

struct ExceptionalWitness {
    Int v;
    IntVec u;                      // centered A_i * v mod p, per coefficient index
    std::vector<bool> bounds_met;  // |u_i| <= u_bounds[i]
};

struct AttackOptions {
    CvpOptions cvp;
    /// Above this lattice dimension skip enumeration and use Babai only.
    size_t max_enum_dim = 24;
};

/// The recovery lattice (rational entries 2*delta/p scaled uniformly by p):
/// d rows p^2*e_i, then for j = k..n a row (p*(t_1^j mod p), ..., p*(t_d^j mod p),
/// 0, .., 2*delta, .., 0). Target is (p*u_1, ..., p*u_d, 0, ..., 0).
std::pair<IntegerLattice, IntVec> build_interpolation_lattice(
    const PrimeContext& ctx, int n, int k, const Int& delta,
    const std::vector<long>& points, const IntVec& observations);

inline std::pair<IntegerLattice, IntVec> build_interpolation_lattice(
    const InterpolationInstance& inst) {
    return build_interpolation_lattice(inst.ctx, inst.n, inst.k, inst.delta, inst.points,
                                       inst.observations);
}

/// Same lattice with no known-coefficient cutoff (degrees 0..n; first power
/// row is all ones).
std::pair<IntegerLattice, IntVec> build_approx_lattice(const std::vector<long>& points,
                                                       int n, const PrimeContext& ctx,
                                                       const Int& delta, const IntVec& observations);

/// Unscaled first-d-columns generating set of the approximate-recovery
/// lattice: rows p*e_i plus the power rows t^0..t^n. Its volume is p^{d-n-1}.
IntegerLattice approx_first_block_generators(const std::vector<long>& points, int n,
                                             const PrimeContext& ctx);

/// Exact coefficient recovery via CVP on the interpolation lattice. The
/// candidate coefficients are read from the last m coordinates (exact division
/// by 2*delta required; a remainder is reported as failure, not rounded).
/// delta == 0 takes the noise-free path (exact modular linear solve).
RecoveryResult recover_coefficients(const InterpolationInstance& inst,
                                    const AttackOptions& opts = {});

struct GridSpec {
    long lo = 0;
    long hi = 0;           // half-open [lo, hi)
    size_t max_points = 1 << 20;  // above this, seeded uniform subsample
    unsigned long seed = 1;
};

/// Approximate recovery (degrees 0..n): CVP or Babai on the d-dimensional
/// lattice of degree-<=n evaluation vectors mod p, candidate read off by
/// interpolation, then an error profile against the true f over a grid.
ApproxRecoveryResult approximate_recover(const InterpolationInstance& inst,
                                         const FpPolynomial& f_true, const GridSpec& grid,
                                         const AttackOptions& opts = {});

/// Searches for a common small multiplier v <= v_bound with
/// |centered(A_i * v)| <= u_bounds[i] for every coefficient A_i of f.
/// Returns the smallest qualifying v, or nullopt.
std::optional<ExceptionalWitness> detect_exceptional_structure(const FpPolynomial& f,
                                                               const Int& v_bound,
                                                               const IntVec& u_bounds);

}  // namespace npi

#endif
