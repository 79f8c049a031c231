#include "npi/attacks.hpp"

#include "npi/observe.hpp"

#include <algorithm>
#include <unordered_set>

namespace npi {

namespace {

Int pow_mod(long t, int j, const Int& p) {
    Int base;
    mpz_mod(base.get_mpz_t(), Int(t).get_mpz_t(), p.get_mpz_t());
    Int r = 1;
    for (int e = 0; e < j; ++e) r = r * base % p;
    return r;
}

/// Solve the m x m Vandermonde-like system sum_j a_j t_i^j = u_i (mod p)
/// over j = k..n, for m distinct points. Returns nullopt if singular.
std::optional<IntVec> modular_solve(const PrimeContext& ctx, int n, int k,
                                    const std::vector<long>& points,
                                    const IntVec& rhs) {
    const Int& p = ctx.p();
    int m = n + 1 - k;
    if (static_cast<int>(points.size()) != m) return std::nullopt;
    std::vector<IntVec> a(m, IntVec(m + 1));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) a[i][j] = pow_mod(points[i], k + j, p);
        mpz_mod(a[i][m].get_mpz_t(), rhs[i].get_mpz_t(), p.get_mpz_t());
    }
    for (int c = 0; c < m; ++c) {
        int piv = c;
        while (piv < m && a[piv][c] == 0) ++piv;
        if (piv == m) return std::nullopt;
        std::swap(a[c], a[piv]);
        Int inv = mod_inverse(a[c][c], ctx);
        for (int cc = c; cc <= m; ++cc) a[c][cc] = a[c][cc] * inv % p;
        for (int r = 0; r < m; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Int f = a[r][c];
            for (int cc = c; cc <= m; ++cc) {
                a[r][cc] = (a[r][cc] - f * a[c][cc]) % p;
                if (a[r][cc] < 0) a[r][cc] += p;
            }
        }
    }
    IntVec x(m);
    for (int i = 0; i < m; ++i) x[i] = a[i][m];
    return x;
}

CvpSolution run_cvp(const IntegerLattice& lat, const IntVec& target, const AttackOptions& opts) {
    if (lat.dim() <= opts.max_enum_dim && lat.dim() <= opts.cvp.dim_cap) {
        return cvp_exact(lat, target, opts.cvp);
    }
    IntegerLattice red = lll_reduce(lat, opts.cvp.lll);
    return babai_nearest_plane(red, target);
}

}  // namespace

void InterpolationInstance::validate() const {
    if (n < 0 || k < 0 || k > n) throw std::domain_error("instance: need 0 <= k <= n");
    if (d() < m() + 1) {
        throw std::domain_error("instance: need d >= n-k+2 observations");
    }
    if (observations.size() != points.size()) {
        throw std::domain_error("instance: points/observations length mismatch");
    }
    for (long t : points) {
        if (t > h || t < -h) throw std::domain_error("instance: point outside [-h, h]");
    }
    for (const Int& u : observations) {
        if (u < 0 || u >= ctx.p()) throw std::domain_error("instance: observation outside [0, p)");
    }
}

std::pair<IntegerLattice, IntVec> build_interpolation_lattice(
    const PrimeContext& ctx, int n, int k, const Int& delta,
    const std::vector<long>& points, const IntVec& observations) {
    const Int& p = ctx.p();
    if (delta >= p) throw std::domain_error("build lattice: delta must be below p");
    if (delta < 1) throw std::domain_error("build lattice: delta must be positive");
    const int d = static_cast<int>(points.size());
    const int m = n + 1 - k;
    const int dim = d + m;
    IntegerLattice lat;
    lat.scale = p;
    lat.rows.assign(dim, IntVec(dim, 0));
    for (int i = 0; i < d; ++i) lat.rows[i][i] = p * p;
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < d; ++i) lat.rows[d + j][i] = p * pow_mod(points[i], k + j, p);
        lat.rows[d + j][d + j] = 2 * delta;
    }
    IntVec target(dim, 0);
    for (int i = 0; i < d; ++i) target[i] = p * observations[i];
    return {std::move(lat), std::move(target)};
}

std::pair<IntegerLattice, IntVec> build_approx_lattice(const std::vector<long>& points,
                                                       int n, const PrimeContext& ctx,
                                                       const Int& delta,
                                                       const IntVec& observations) {
    if (static_cast<int>(points.size()) < n + 2) {
        throw std::domain_error("build_approx_lattice: need d >= n+2");
    }
    return build_interpolation_lattice(ctx, n, 0, delta, points, observations);
}

IntegerLattice approx_first_block_generators(const std::vector<long>& points, int n,
                                             const PrimeContext& ctx) {
    const int d = static_cast<int>(points.size());
    IntegerLattice lat;
    lat.rows.assign(d + n + 1, IntVec(d, 0));
    for (int i = 0; i < d; ++i) lat.rows[i][i] = ctx.p();
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i < d; ++i) lat.rows[d + j][i] = pow_mod(points[i], j, ctx.p());
    }
    return lat;
}

RecoveryResult recover_coefficients(const InterpolationInstance& inst, const AttackOptions& opts) {
    const Int& p = inst.ctx.p();
    const int d = inst.d();
    const int m = inst.m();
    RecoveryResult res;

    Int hk;
    mpz_ui_pow_ui(hk.get_mpz_t(), static_cast<unsigned long>(std::max(inst.h, 1L)),
                  static_cast<unsigned long>(std::max(inst.k, 1)));
    if (hk <= inst.delta) {
        res.warning = "h^k <= delta: outside the guaranteed-recovery regime";
    }

    if (inst.delta == 0) {
        // Noise-free: pick m distinct points and solve the linear system exactly.
        std::vector<long> pts;
        IntVec rhs;
        std::unordered_set<long> seen;
        for (int i = 0; i < d && static_cast<int>(pts.size()) < m; ++i) {
            if (seen.insert(inst.points[i]).second) {
                pts.push_back(inst.points[i]);
                rhs.push_back(inst.observations[i]);
            }
        }
        auto sol = modular_solve(inst.ctx, inst.n, inst.k, pts, rhs);
        if (!sol) return res;
        FpPolynomial cand = [&] {
            IntVec coeffs(inst.n + 1, 0);
            for (int j = 0; j < m; ++j) coeffs[inst.k + j] = (*sol)[j];
            return FpPolynomial(inst.ctx, coeffs, inst.k);
        }();
        for (int i = 0; i < d; ++i) {
            if (cand.eval(Int(inst.points[i])) != inst.observations[i] % p) return res;
        }
        res.coefficients = *sol;
        res.cvp_sq_distance = 0;
        res.verified = true;
        res.exact_cvp = true;
        return res;
    }

    inst.validate();
    auto [lat, target] = build_interpolation_lattice(inst);
    CvpSolution sol = run_cvp(lat, target, opts);
    res.cvp_sq_distance = sol.sq_distance / Rat(lat.scale * lat.scale);
    res.exact_cvp = sol.exact;

    Int two_delta = 2 * inst.delta;
    IntVec coeffs(m);
    for (int j = 0; j < m; ++j) {
        const Int& coord = sol.vector[d + j];
        if (coord % two_delta != 0) {
            res.warning += (res.warning.empty() ? "" : "; ");
            res.warning += "CVP landed on a non-polynomial lattice point";
            return res;
        }
        Int b = coord / two_delta;
        mpz_mod(coeffs[j].get_mpz_t(), b.get_mpz_t(), p.get_mpz_t());
    }

    // Residual check: every observation within sqrt(d+m)*delta.
    Int bound_sq = Int(d + m) * inst.delta * inst.delta;
    bool ok = true;
    {
        IntVec full(inst.n + 1, 0);
        for (int j = 0; j < m; ++j) full[inst.k + j] = coeffs[j];
        FpPolynomial cand(inst.ctx, full, inst.k);
        for (int i = 0; i < d; ++i) {
            Int dist = dist_mod(cand.eval(Int(inst.points[i])) - inst.observations[i], p);
            if (dist * dist > bound_sq) {
                ok = false;
                break;
            }
        }
    }
    res.coefficients = std::move(coeffs);
    res.verified = ok;
    return res;
}

ApproxRecoveryResult approximate_recover(const InterpolationInstance& inst,
                                         const FpPolynomial& f_true, const GridSpec& grid,
                                         const AttackOptions& opts) {
    const Int& p = inst.ctx.p();
    ApproxRecoveryResult res;
    if (inst.d() < inst.n + 2) {
        throw std::domain_error("approximate_recover: need d >= n+2");
    }
    if (inst.delta >= p) throw std::domain_error("approximate_recover: delta must be below p");
    if (inst.delta < 1) throw std::domain_error("approximate_recover: delta must be positive");
    const int d = inst.d();

    // CVP in the d-dimensional lattice of degree-<=n evaluation vectors mod p.
    // Minimizing l2 distance to u there picks, per coordinate, the integer lift
    // of g(t_i) nearest u_i, i.e. the polynomial minimizing the summed squared
    // |g(t_i) - u_i|_p.
    IntegerLattice lat;
    lat.rows = integer_row_echelon(approx_first_block_generators(inst.points, inst.n, inst.ctx).rows);
    CvpSolution sol = run_cvp(lat, inst.observations, opts);
    res.cvp_sq_distance = sol.sq_distance;
    res.exact_cvp = sol.exact;

    // The solution is an evaluation vector of some degree-<=n polynomial mod p;
    // recover it by interpolation through n+1 distinct points and check the rest.
    std::vector<long> pts;
    IntVec rhs;
    std::unordered_set<long> seen;
    for (int i = 0; i < d && static_cast<int>(pts.size()) < inst.n + 1; ++i) {
        if (seen.insert(inst.points[i]).second) {
            pts.push_back(inst.points[i]);
            rhs.push_back(sol.vector[i]);
        }
    }
    if (static_cast<int>(pts.size()) < inst.n + 1) return res;  // too few distinct points
    auto coeffs = modular_solve(inst.ctx, inst.n, 0, pts, rhs);
    if (!coeffs) return res;
    FpPolynomial cand(inst.ctx, *coeffs, 0);
    for (int i = 0; i < d; ++i) {
        Int v;
        mpz_mod(v.get_mpz_t(), sol.vector[i].get_mpz_t(), p.get_mpz_t());
        if (cand.eval(Int(inst.points[i])) != v) return res;  // not a polynomial point
    }

    // Error profile over the grid.
    std::vector<long> ts;
    unsigned long span =
        static_cast<unsigned long>(grid.hi - grid.lo);
    if (span <= grid.max_points) {
        ts.reserve(span);
        for (long t = grid.lo; t < grid.hi; ++t) ts.push_back(t);
    } else {
        ts = sample_points_window(grid.lo, grid.hi, static_cast<int>(grid.max_points), grid.seed);
        std::sort(ts.begin(), ts.end());
    }
    size_t good = 0;
    res.error_profile.reserve(ts.size());
    for (long t : ts) {
        Int dist = dist_mod(cand.eval(Int(t)) - f_true.eval(Int(t)), p);
        if (dist <= inst.delta) ++good;
        res.error_profile.emplace_back(t, Rat(dist, p).get_d());
    }
    res.success_fraction = ts.empty() ? 0.0 : static_cast<double>(good) / ts.size();
    res.candidate = std::move(cand);
    return res;
}

std::optional<ExceptionalWitness> detect_exceptional_structure(const FpPolynomial& f,
                                                               const Int& v_bound,
                                                               const IntVec& u_bounds) {
    if (v_bound < 1) throw std::domain_error("detect_exceptional_structure: v_bound >= 1");
    if (v_bound > 10'000'000) {
        throw std::domain_error("detect_exceptional_structure: v_bound above scan cap 10^7");
    }
    size_t nc = f.coeffs().size();
    if (u_bounds.size() < nc) {
        throw std::domain_error("detect_exceptional_structure: need a bound per coefficient");
    }
    for (Int v = 1; v <= v_bound; ++v) {
        bool all = true;
        for (size_t i = 0; i < nc && all; ++i) {
            Int u = centered(f.coeffs()[i] * v, f.ctx()).value;
            if (abs(u) > u_bounds[i]) all = false;
        }
        if (all) {
            ExceptionalWitness w;
            w.v = v;
            for (size_t i = 0; i < nc; ++i) {
                w.u.push_back(centered(f.coeffs()[i] * v, f.ctx()).value);
                w.bounds_met.push_back(true);
            }
            return w;
        }
    }
    return std::nullopt;
}

}  // namespace npi
