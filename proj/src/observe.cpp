#include "npi/observe.hpp"

#include <set>

namespace npi {

Int Rng::prime(unsigned bits) {
    if (bits < 2) throw std::domain_error("Rng::prime: need at least 2 bits");
    while (true) {
        Int c = state_.get_z_bits(bits);
        mpz_setbit(c.get_mpz_t(), bits - 1);  // force exact bit length
        mpz_setbit(c.get_mpz_t(), 0);
        if (mpz_probab_prime_p(c.get_mpz_t(), 64) != 0) return c;
    }
}

std::vector<long> sample_points(long h, int d, unsigned long seed) {
    if (h < 0 || d < 1) throw std::domain_error("sample_points: need h >= 0, d >= 1");
    Rng rng(seed);
    std::vector<long> t(d);
    for (auto& x : t) x = rng.range_ll(-h, h);
    return t;
}

std::vector<long> sample_points_window(long lo, long hi, int d, unsigned long seed) {
    if (hi <= lo || d < 1) throw std::domain_error("sample_points_window: empty window");
    Rng rng(seed);
    std::vector<long> t(d);
    for (auto& x : t) x = rng.range_ll(lo, hi - 1);
    return t;
}

std::vector<long> sample_distinct_points_window(long lo, long hi, int d, unsigned long seed) {
    if (hi <= lo || d < 1 || d > hi - lo) {
        throw std::domain_error("sample_distinct_points_window: need 1 <= d <= window size");
    }
    // Floyd's subset sampling: each d-subset of [lo, hi) equally likely.
    Rng rng(seed);
    std::set<long> chosen;
    for (long j = hi - d; j < hi; ++j) {
        long r = rng.range_ll(lo, j);
        chosen.insert(chosen.count(r) ? j : r);
    }
    return {chosen.begin(), chosen.end()};
}

NoisyObservation observe_additive(const FpPolynomial& f, long t, const Int& delta, Rng& rng,
                                  NoiseModel model) {
    const Int& p = f.ctx().p();
    if (delta < 1 || 2 * delta >= p) {
        throw std::domain_error("observe_additive: need 1 <= delta < p/2");
    }
    Int e = 0;
    if (model == NoiseModel::Uniform) e = rng.range(-delta, delta);
    Int u = (f.eval(Int(t)) + e) % p;
    if (u < 0) u += p;
    return NoisyObservation{t, u, delta};
}

NoisyObservation observe_additive(const FpPolynomial& f, long t, const Int& delta,
                                  unsigned long seed, NoiseModel model) {
    Rng rng(seed);
    return observe_additive(f, t, delta, rng, model);
}

AdditiveView lsb_to_additive(const LsbObservation& obs, const PrimeContext& ctx) {
    const unsigned r = ctx.bit_length();
    if (obs.s >= r) throw std::domain_error("lsb_to_additive: need s < r");
    Int two_s = Int(1) << obs.s;
    if (obs.v < 0 || obs.v >= two_s) throw std::domain_error("lsb_to_additive: v out of [0, 2^s)");
    Int lambda = mod_inverse(two_s, ctx);
    Int delta = Int(1) << (r - obs.s - 1);
    Int u = (lambda * obs.v + delta) % ctx.p();
    return AdditiveView{u, delta, lambda};
}

AdditiveView msb_to_additive(const Int& value_msbs, unsigned s, const PrimeContext& ctx) {
    const unsigned r = ctx.bit_length();
    if (s >= r) throw std::domain_error("msb_to_additive: need s < r");
    Int delta = Int(1) << (r - s - 1);
    Int u = value_msbs * (Int(1) << (r - s)) + delta;
    return AdditiveView{u, delta, 1};
}

}  // namespace npi
