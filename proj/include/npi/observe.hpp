#ifndef NPI_OBSERVE_HPP
#define NPI_OBSERVE_HPP

#include "npi/fpcore.hpp"

#include <cstdint>
#include <vector>

namespace npi {

/// Deterministic RNG (GMP Mersenne twister). Each generator owns its state;
/// distinct seeds may run concurrently.
class Rng {
public:
    explicit Rng(unsigned long seed) : state_(gmp_randinit_mt) { state_.seed(seed); }

    /// Uniform integer in [0, bound), bound >= 1.
    Int below(const Int& bound) { return state_.get_z_range(bound); }

    /// Uniform integer in [lo, hi] inclusive.
    Int range(const Int& lo, const Int& hi) { return lo + below(hi - lo + 1); }

    long range_ll(long lo, long hi) {
        return static_cast<long>(range(Int(lo), Int(hi)).get_si());
    }

    /// Random prime with exactly `bits` bits.
    Int prime(unsigned bits);

private:
    gmp_randclass state_;
};

enum class NoiseModel { Uniform, Zero };

/// A point t in [-h, h] with an approximation u, |u - f(t)|_p <= delta.
struct NoisyObservation {
    long t;
    Int u;
    Int delta;
};

/// Least-significant-bits view: v == f(t) mod 2^s.
struct LsbObservation {
    long t;
    Int v;
    unsigned s;
};

/// d i.i.d. uniform draws from [-h, h] (with replacement).
std::vector<long> sample_points(long h, int d, unsigned long seed);

/// d i.i.d. uniform draws from [lo, hi) — experiment windows like [0, 2^b).
std::vector<long> sample_points_window(long lo, long hi, int d, unsigned long seed);

/// A uniform d-subset of [lo, hi), sorted. Observation points: duplicates
/// would add no polynomial information, so instances use distinct points.
std::vector<long> sample_distinct_points_window(long lo, long hi, int d, unsigned long seed);

NoisyObservation observe_additive(const FpPolynomial& f, long t, const Int& delta, Rng& rng,
                                  NoiseModel model = NoiseModel::Uniform);
NoisyObservation observe_additive(const FpPolynomial& f, long t, const Int& delta,
                                  unsigned long seed, NoiseModel model = NoiseModel::Uniform);

struct AdditiveView {
    Int u;
    Int delta;
    Int lambda;  // 1 for MSB views
};

/// LSB-to-additive reduction: u = lambda*v + 2^{r-s-1} with lambda = (2^s)^{-1};
/// then |u - lambda*f(t)|_p <= delta = 2^{r-s-1} for any f consistent with obs.
AdditiveView lsb_to_additive(const LsbObservation& obs, const PrimeContext& ctx);

/// MSB window midpoint: u = msbs*2^{r-s} + 2^{r-s-1}, delta = 2^{r-s-1}.
AdditiveView msb_to_additive(const Int& value_msbs, unsigned s, const PrimeContext& ctx);

}  // namespace npi

#endif
