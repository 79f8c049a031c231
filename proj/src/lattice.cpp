#include "npi/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace npi {

namespace {

Int idot(const IntVec& a, const IntVec& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Int isq_dist(const IntVec& a, const IntVec& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        Int d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

/// Round a rational to the nearest integer, ties toward +infinity.
Int round_rat(const Rat& q) {
    Rat t = q + Rat(1, 2);
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    return r;
}

Int round_mpf(const mpf_class& x) {
    mpf_class t = floor(x + 0.5);
    Int r;
    mpz_set_f(r.get_mpz_t(), t.get_mpf_t());
    return r;
}

bool lex_less(const IntVec& a, const IntVec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

IntMat gram_matrix(const IntMat& rows) {
    size_t s = rows.size();
    IntMat g(s, IntVec(s));
    for (size_t i = 0; i < s; ++i) {
        for (size_t j = 0; j <= i; ++j) {
            g[i][j] = idot(rows[i], rows[j]);
            g[j][i] = g[i][j];
        }
    }
    return g;
}

size_t max_gram_bits(const IntMat& g) {
    size_t b = 1;
    for (const auto& row : g) {
        for (const auto& x : row) {
            b = std::max(b, mpz_sizeinbase(x.get_mpz_t(), 2));
        }
    }
    return b;
}

// ---------------------------------------------------------------------------
// Exact-rational LLL (small dimensions).

void lll_exact(IntMat& rows, const Rat& delta) {
    size_t s = rows.size();
    if (s < 2) return;
    Gso g = gram_schmidt(rows);
    size_t k = 1;
    while (k < s) {
        for (size_t j = k; j-- > 0;) {
            Int q = round_rat(g.mu[k][j]);
            if (q != 0) {
                for (size_t c = 0; c < rows[k].size(); ++c) rows[k][c] -= q * rows[j][c];
                g = gram_schmidt(rows);
            }
        }
        Rat lhs = g.norm_sq[k];
        Rat rhs = (delta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.norm_sq[k - 1];
        if (lhs >= rhs) {
            ++k;
        } else {
            std::swap(rows[k], rows[k - 1]);
            g = gram_schmidt(rows);
            k = std::max<size_t>(k - 1, 1);
        }
    }
}

// ---------------------------------------------------------------------------
// Floating-GSO LLL over an exact integer Gram matrix. Row operations and the
// Gram matrix stay exact; only the Cholesky factors (mu, B) are floating.

class FpLll {
public:
    FpLll(IntMat& rows, const Rat& delta, unsigned long prec, bool deep = false)
        : rows_(rows), s_(rows.size()), delta_(delta.get_d()), prec_(prec), deep_(deep) {
        gram_ = gram_matrix(rows_);
    }

    void run() {
        if (s_ < 2) return;
        // Intermediate Gram entries can grow well past their initial size, so
        // restart with more precision (sized from the current Gram) on loss.
        for (int attempt = 0;; ++attempt) {
            try {
                reduce_pass();
                return;
            } catch (const precision_loss&) {
                if (attempt >= 6) {
                    throw std::runtime_error(
                        "lll_reduce: precision escalation exhausted (dependent rows?)");
                }
                prec_ = std::max(2 * prec_, max_gram_bits(gram_) + s_ + 256);
            }
        }
    }

private:
    struct precision_loss {};

    mpf_class fp(const Int& x) const { return mpf_class(x, prec_); }

    void reduce_pass() {
        mu_.assign(s_, std::vector<mpf_class>(s_, mpf_class(0, prec_)));
        r_.assign(s_, std::vector<mpf_class>(s_, mpf_class(0, prec_)));
        bnorm_.assign(s_, mpf_class(0, prec_));
        compute_row(0);
        size_t k = 1;
        unsigned long guard = 0;
        while (k < s_) {
            if (++guard > 100'000'000ULL) {
                throw std::runtime_error("lll_reduce: iteration guard tripped");
            }
            size_reduce(k);
            if (deep_) {
                // Deep insertion: move b_k to the first position i where its
                // projection beats delta * ||b*_i||^2 (i = k-1 is the Lovasz test).
                mpf_class c = fp(gram_[k][k]);
                size_t i = 0;
                while (i < k && mpf_class(delta_, prec_) * bnorm_[i] <= c) {
                    c -= mu_[k][i] * mu_[k][i] * bnorm_[i];
                    ++i;
                }
                if (i == k) {
                    ++k;
                } else {
                    insert_row(k, i);
                    if (i == 0) compute_row(0);
                    k = std::max<size_t>(i, 1);
                }
                continue;
            }
            mpf_class lhs = bnorm_[k];
            mpf_class rhs =
                (mpf_class(delta_, prec_) - mu_[k][k - 1] * mu_[k][k - 1]) * bnorm_[k - 1];
            if (lhs >= rhs) {
                ++k;
            } else {
                swap_rows(k);
                k = std::max<size_t>(k - 1, 1);
                compute_row(k - 1);
            }
        }
    }

    void compute_row(size_t i) {
        for (size_t j = 0; j < i; ++j) {
            mpf_class acc = fp(gram_[i][j]);
            for (size_t l = 0; l < j; ++l) acc -= mu_[j][l] * r_[i][l];
            r_[i][j] = acc;
            mu_[i][j] = acc / bnorm_[j];
        }
        mpf_class acc = fp(gram_[i][i]);
        for (size_t l = 0; l < i; ++l) acc -= mu_[i][l] * r_[i][l];
        bnorm_[i] = acc;
        if (bnorm_[i] <= 0) throw precision_loss{};
    }

    void size_reduce(size_t k) {
        for (int pass = 0; pass < 64; ++pass) {
            compute_row(k);
            bool touched = false;
            for (size_t j = k; j-- > 0;) {
                if (abs(mu_[k][j]) > 0.5 + 1e-9) {
                    row_op(k, j, round_mpf(mu_[k][j]));
                    touched = true;
                }
            }
            if (!touched) return;
        }
        throw precision_loss{};
    }

    // b_k -= q * b_j, with the matching exact Gram update.
    void row_op(size_t k, size_t j, const Int& q) {
        for (size_t c = 0; c < rows_[k].size(); ++c) rows_[k][c] -= q * rows_[j][c];
        gram_[k][k] += q * q * gram_[j][j] - 2 * q * gram_[k][j];
        for (size_t i = 0; i < s_; ++i) {
            if (i == k) continue;
            gram_[k][i] -= q * gram_[j][i];
            gram_[i][k] = gram_[k][i];
        }
        for (size_t l = 0; l < j; ++l) mu_[k][l] -= fp(q) * mu_[j][l];
        mu_[k][j] -= fp(q);
    }

    // Rotate row k into position i (i < k), shifting rows i..k-1 down.
    void insert_row(size_t k, size_t i) {
        std::rotate(rows_.begin() + i, rows_.begin() + k, rows_.begin() + k + 1);
        std::rotate(gram_.begin() + i, gram_.begin() + k, gram_.begin() + k + 1);
        for (auto& row : gram_) {
            std::rotate(row.begin() + i, row.begin() + k, row.begin() + k + 1);
        }
    }

    void swap_rows(size_t k) {
        std::swap(rows_[k], rows_[k - 1]);
        std::swap(gram_[k], gram_[k - 1]);
        for (size_t i = 0; i < s_; ++i) std::swap(gram_[i][k], gram_[i][k - 1]);
    }

    IntMat& rows_;
    size_t s_;
    double delta_;
    unsigned long prec_;
    bool deep_;
    IntMat gram_;
    std::vector<std::vector<mpf_class>> mu_;
    std::vector<std::vector<mpf_class>> r_;
    std::vector<mpf_class> bnorm_;
};

struct FpGso {
    IntMat gram;
    std::vector<std::vector<mpf_class>> mu;
    std::vector<mpf_class> bnorm;
};

FpGso build_fp_gso(const IntMat& rows, unsigned long prec_hint = 0) {
    FpGso g;
    g.gram = gram_matrix(rows);
    unsigned long prec = prec_hint ? prec_hint
                                   : std::max<size_t>(192, max_gram_bits(g.gram) + 128);
    size_t s = rows.size();
    g.mu.assign(s, std::vector<mpf_class>(s, mpf_class(0, prec)));
    g.bnorm.assign(s, mpf_class(0, prec));
    std::vector<std::vector<mpf_class>> r(s, std::vector<mpf_class>(s, mpf_class(0, prec)));
    for (size_t i = 0; i < s; ++i) {
        for (size_t j = 0; j < i; ++j) {
            mpf_class acc(g.gram[i][j], prec);
            for (size_t l = 0; l < j; ++l) acc -= g.mu[j][l] * r[i][l];
            r[i][j] = acc;
            g.mu[i][j] = acc / g.bnorm[j];
        }
        mpf_class acc(g.gram[i][i], prec);
        for (size_t l = 0; l < i; ++l) acc -= g.mu[i][l] * r[i][l];
        g.bnorm[i] = acc;
        if (g.bnorm[i] <= 0) {
            throw std::runtime_error("GSO: non-positive norm at row " + std::to_string(i) +
                                     " (dependent rows?)");
        }
    }
    return g;
}

IntVec combine(const IntMat& rows, const IntVec& coeffs) {
    IntVec v(rows[0].size(), 0);
    for (size_t i = 0; i < rows.size(); ++i) {
        if (coeffs[i] == 0) continue;
        for (size_t c = 0; c < v.size(); ++c) v[c] += coeffs[i] * rows[i][c];
    }
    return v;
}

CvpSolution babai_on(const IntMat& rows, const FpGso& g, const IntVec& target) {
    size_t s = rows.size();
    IntVec d(s);
    for (size_t j = 0; j < s; ++j) d[j] = idot(target, rows[j]);
    IntVec coeffs(s, 0);
    unsigned long prec = g.bnorm.empty() ? 192 : g.bnorm[0].get_prec();
    std::vector<mpf_class> e(s, mpf_class(0, prec));
    for (size_t i = s; i-- > 0;) {
        for (size_t l = 0; l <= i; ++l) {
            mpf_class acc(d[l], prec);
            for (size_t m = 0; m < l; ++m) acc -= g.mu[l][m] * e[m];
            e[l] = acc;
        }
        Int q = round_mpf(e[i] / g.bnorm[i]);
        coeffs[i] = q;
        if (q != 0) {
            for (size_t l = 0; l < s; ++l) d[l] -= q * g.gram[i][l];
        }
    }
    IntVec v = combine(rows, coeffs);
    return CvpSolution{v, coeffs, Rat(isq_dist(v, target)), false};
}

}  // namespace

Gso gram_schmidt(const IntMat& rows) {
    size_t s = rows.size();
    size_t a = rows.empty() ? 0 : rows[0].size();
    Gso g;
    g.ortho.assign(s, std::vector<Rat>(a));
    g.mu.assign(s, std::vector<Rat>(s, Rat(0)));
    g.norm_sq.assign(s, Rat(0));
    for (size_t i = 0; i < s; ++i) {
        for (size_t c = 0; c < a; ++c) g.ortho[i][c] = Rat(rows[i][c]);
        for (size_t j = 0; j < i; ++j) {
            Rat num(0);
            for (size_t c = 0; c < a; ++c) num += Rat(rows[i][c]) * g.ortho[j][c];
            g.mu[i][j] = num / g.norm_sq[j];
            for (size_t c = 0; c < a; ++c) g.ortho[i][c] -= g.mu[i][j] * g.ortho[j][c];
        }
        for (size_t c = 0; c < a; ++c) g.norm_sq[i] += g.ortho[i][c] * g.ortho[i][c];
        if (g.norm_sq[i] == 0) {
            throw std::invalid_argument("gram_schmidt: row " + std::to_string(i) +
                                        " is linearly dependent on earlier rows");
        }
    }
    return g;
}

IntegerLattice lll_reduce(const IntegerLattice& basis, const LllOptions& opts) {
    if (opts.delta <= Rat(1, 4) || opts.delta >= 1) {
        throw std::domain_error("lll_reduce: delta must lie in (1/4, 1)");
    }
    IntegerLattice out = basis;
    if (out.dim() < 2) return out;
    if (out.dim() <= opts.exact_dim_limit) {
        lll_exact(out.rows, opts.delta);
    } else {
        unsigned long prec = opts.fp_precision;
        if (prec == 0) {
            prec = std::max<size_t>(192, max_gram_bits(gram_matrix(out.rows)) + 128);
        }
        FpLll(out.rows, opts.delta, prec, opts.deep_insertions).run();
    }
    return out;
}

CvpSolution babai_nearest_plane(const IntegerLattice& reduced, const IntVec& target) {
    if (target.size() != reduced.ambient()) {
        throw std::invalid_argument("babai_nearest_plane: target dimension mismatch");
    }
    FpGso g = build_fp_gso(reduced.rows);
    return babai_on(reduced.rows, g, target);
}

CvpSolution cvp_exact(const IntegerLattice& basis, const IntVec& target, const CvpOptions& opts) {
    size_t s = basis.dim();
    if (s > opts.dim_cap) {
        throw std::domain_error("cvp_exact: dimension " + std::to_string(s) +
                                " above enumeration cap " + std::to_string(opts.dim_cap));
    }
    if (target.size() != basis.ambient()) {
        throw std::invalid_argument("cvp_exact: target dimension mismatch");
    }
    IntegerLattice red = lll_reduce(basis, opts.lll);
    FpGso g = build_fp_gso(red.rows);
    CvpSolution best = babai_on(red.rows, g, target);
    best.exact = true;
    if (best.sq_distance == 0) return best;
    Int best_sq = best.sq_distance.get_num();

    const unsigned long prec = g.bnorm.empty() ? 192 : g.bnorm[0].get_prec();

    // Target in GSO coordinates: tau_i = <target, b*_i> / ||b*_i||^2.
    std::vector<mpf_class> e(s, mpf_class(0, prec)), tau(s, mpf_class(0, prec));
    {
        IntVec d(s);
        for (size_t j = 0; j < s; ++j) d[j] = idot(target, red.rows[j]);
        for (size_t l = 0; l < s; ++l) {
            mpf_class acc(d[l], prec);
            for (size_t m = 0; m < l; ++m) acc -= g.mu[l][m] * e[m];
            e[l] = acc;
            tau[l] = e[l] / g.bnorm[l];
        }
    }

    auto bound = [prec](const Int& sq) -> mpf_class {
        // Squared distances are integers here; +0.5 keeps exact ties inside.
        return mpf_class(sq, prec) * (1 + 1e-9) + 0.5;
    };
    mpf_class r2 = bound(best_sq);

    std::vector<Int> x(s), base(s);
    std::vector<int> sigma(s), step(s);
    std::vector<mpf_class> center(s, mpf_class(0, prec)), rho(s + 1, mpf_class(0, prec));
    rho[s] = 0;
    unsigned long nodes = 0;
    bool complete = true;

    auto enter_level = [&](size_t i) {
        mpf_class c = tau[i];
        for (size_t j = i + 1; j < s; ++j) c -= mpf_class(x[j], prec) * g.mu[j][i];
        center[i] = c;
        base[i] = round_mpf(c);
        sigma[i] = (mpf_class(base[i], prec) <= c) ? 1 : -1;
        step[i] = 0;
        x[i] = base[i];
    };

    size_t i = s - 1;
    enter_level(i);
    while (true) {
        if (++nodes > opts.node_budget) {
            complete = false;
            break;
        }
        mpf_class diff = mpf_class(x[i], prec) - center[i];
        mpf_class r = rho[i + 1] + diff * diff * g.bnorm[i];
        if (r <= r2) {
            if (i == 0) {
                IntVec v = combine(red.rows, x);
                Int sq = isq_dist(v, target);
                if (sq < best_sq || (sq == best_sq && lex_less(x, best.coeffs))) {
                    best_sq = sq;
                    best = CvpSolution{v, x, Rat(sq), true};
                    r2 = bound(best_sq);
                }
            } else {
                rho[i] = r;
                enter_level(--i);
                continue;
            }
        } else if (i == s - 1) {
            break;  // zigzag at the top level is monotone in distance
        } else {
            ++i;  // subtree exhausted (zigzag order is monotone in |x - c|)
        }
        // Advance the zigzag at level i: offsets 0, +1, -1, +2, -2, ... times sigma.
        ++step[i];
        long j = (step[i] + 1) / 2;
        x[i] = base[i] + ((step[i] % 2) ? sigma[i] * j : -sigma[i] * j);
    }
    best.exact = complete;
    return best;
}

IntMat integer_row_echelon(IntMat rows) {
    size_t nr = rows.size();
    size_t nc = rows.empty() ? 0 : rows[0].size();
    size_t r = 0;
    for (size_t c = 0; c < nc && r < nr; ++c) {
        while (true) {
            size_t piv = nr;
            for (size_t i = r; i < nr; ++i) {
                if (rows[i][c] != 0 && (piv == nr || abs(rows[i][c]) < abs(rows[piv][c]))) piv = i;
            }
            if (piv == nr) break;
            std::swap(rows[r], rows[piv]);
            bool clean = true;
            for (size_t i = r + 1; i < nr; ++i) {
                if (rows[i][c] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
                if (q != 0) {
                    for (size_t cc = 0; cc < nc; ++cc) rows[i][cc] -= q * rows[r][cc];
                }
                if (rows[i][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (rows[r][c] != 0) {
            if (rows[r][c] < 0) {
                for (size_t cc = 0; cc < nc; ++cc) rows[r][cc] = -rows[r][cc];
            }
            ++r;
        }
    }
    rows.resize(r);
    // Hermite-style cleanup: reduce entries above each pivot modulo the pivot,
    // keeping every entry below the pivot in its column (elimination quotients
    // can otherwise leave entries far larger than the input's).
    for (size_t i = 0, c = 0; i < r; ++i) {
        while (c < nc && rows[i][c] == 0) ++c;
        if (c == nc) break;
        for (size_t j = 0; j < i; ++j) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), rows[j][c].get_mpz_t(), rows[i][c].get_mpz_t());
            if (q != 0) {
                for (size_t cc = c; cc < nc; ++cc) rows[j][cc] -= q * rows[i][cc];
            }
        }
    }
    return rows;
}

Int det(const IntMat& m) {
    size_t n = m.size();
    if (n == 0) return 1;
    if (m[0].size() != n) throw std::invalid_argument("det: matrix not square");
    IntMat a = m;
    Int prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            size_t piv = k + 1;
            while (piv < n && a[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                Int t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

Int gram_det(const IntMat& rows) { return det(gram_matrix(rows)); }

VolumeResult lattice_volume(const IntegerLattice& gens) {
    IntMat e = integer_row_echelon(gens.rows);
    if (e.empty()) return VolumeResult{Rat(0), true};
    if (e.size() == e[0].size()) {
        Int d = 1;
        for (size_t i = 0; i < e.size(); ++i) d *= e[i][i];
        return VolumeResult{Rat(abs(d)), true};
    }
    Int gd = gram_det(e);
    if (mpz_perfect_square_p(gd.get_mpz_t())) {
        Int s;
        mpz_sqrt(s.get_mpz_t(), gd.get_mpz_t());
        return VolumeResult{Rat(s), true};
    }
    // Enclosure: floor(sqrt(gd * 10^80)) / 10^40, relative error far below 1e-30.
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, 80);
    Int t = gd * scale, s;
    mpz_sqrt(s.get_mpz_t(), t.get_mpz_t());
    Int den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, 40);
    Rat v(s, den);
    v.canonicalize();
    return VolumeResult{v, false};
}

std::optional<IntVec> membership_coeffs(const IntMat& basis, const IntVec& v) {
    size_t s = basis.size();
    size_t a = basis.empty() ? 0 : basis[0].size();
    if (v.size() != a) return std::nullopt;
    // Solve x * basis = v by exact elimination on the transpose.
    std::vector<std::vector<Rat>> m(a, std::vector<Rat>(s + 1));
    for (size_t r = 0; r < a; ++r) {
        for (size_t c = 0; c < s; ++c) m[r][c] = Rat(basis[c][r]);
        m[r][s] = Rat(v[r]);
    }
    std::vector<size_t> pivot_row(s, a);
    size_t row = 0;
    for (size_t c = 0; c < s && row < a; ++c) {
        size_t piv = row;
        while (piv < a && m[piv][c] == 0) ++piv;
        if (piv == a) continue;
        std::swap(m[row], m[piv]);
        for (size_t r = 0; r < a; ++r) {
            if (r == row || m[r][c] == 0) continue;
            Rat f = m[r][c] / m[row][c];
            for (size_t cc = c; cc <= s; ++cc) m[r][cc] -= f * m[row][cc];
        }
        pivot_row[c] = row;
        ++row;
    }
    IntVec x(s, 0);
    for (size_t c = 0; c < s; ++c) {
        if (pivot_row[c] == a) continue;  // free variable, keep 0
        Rat val = m[pivot_row[c]][s] / m[pivot_row[c]][c];
        if (val.get_den() != 1) return std::nullopt;
        x[c] = val.get_num();
    }
    // Verify (covers inconsistent rows and free-variable choices).
    for (size_t r = 0; r < a; ++r) {
        Int acc = 0;
        for (size_t c = 0; c < s; ++c) acc += x[c] * basis[c][r];
        if (acc != v[r]) return std::nullopt;
    }
    return x;
}

Rat dot(const IntVec& a, const IntVec& b) { return Rat(idot(a, b)); }

Rat sq_dist(const IntVec& a, const IntVec& b) { return Rat(isq_dist(a, b)); }

}  // namespace npi
