#ifndef NPI_LATTICE_HPP
#define NPI_LATTICE_HPP

#include "npi/fpcore.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace npi {

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

/// Integer row basis (or overcomplete generating set) with a uniform scale
/// factor: the rational lattice being modelled equals (1/scale) * rows.
struct IntegerLattice {
    IntMat rows;
    Int scale{1};

    size_t dim() const { return rows.size(); }
    size_t ambient() const { return rows.empty() ? 0 : rows[0].size(); }
};

struct Gso {
    std::vector<std::vector<Rat>> ortho;  // b*_i
    std::vector<std::vector<Rat>> mu;     // mu[i][j], j < i
    std::vector<Rat> norm_sq;             // ||b*_i||^2
};

/// Exact rational Gram-Schmidt. Throws (naming the row) on linear dependence.
Gso gram_schmidt(const IntMat& rows);
inline Gso gram_schmidt(const IntegerLattice& b) { return gram_schmidt(b.rows); }

/// LLL reduction. Exact rational GSO up to `exact_dim_limit`; above it, GSO is
/// carried in high-precision floating point over the exact integer Gram matrix
/// (row operations stay exact, so the lattice is always preserved exactly).
struct LllOptions {
    Rat delta{99, 100};
    size_t exact_dim_limit = 12;
    unsigned long fp_precision = 0;  // 0 = auto from entry size
    bool deep_insertions = false;    // deep-insertion variant (better basis, slower)
};
IntegerLattice lll_reduce(const IntegerLattice& basis, const LllOptions& opts = {});
inline IntegerLattice lll_reduce(const IntegerLattice& basis, const Rat& delta) {
    return lll_reduce(basis, LllOptions{delta});
}

struct CvpSolution {
    IntVec vector;       // closest lattice point found
    IntVec coeffs;       // its coefficients w.r.t. the (reduced) basis used
    Rat sq_distance;     // exact squared Euclidean distance to the target
    bool exact = false;  // enumeration completed vs Babai / budget-limited
};

/// Babai nearest plane. Precondition: basis LLL-reduced.
CvpSolution babai_nearest_plane(const IntegerLattice& reduced, const IntVec& target);

struct CvpOptions {
    size_t dim_cap = 64;
    unsigned long node_budget = 50'000'000;
    LllOptions lll;
};

/// Exact CVP: LLL + Schnorr-Euchner enumeration seeded with the Babai radius.
/// Candidate distances are rescored exactly; ties break to the
/// lexicographically smallest coefficient vector. Refuses dimensions above
/// `dim_cap`. If the node budget runs out the best vector found so far is
/// returned with exact=false.
CvpSolution cvp_exact(const IntegerLattice& basis, const IntVec& target,
                      const CvpOptions& opts = {});

struct VolumeResult {
    Rat value;
    bool exact;
};

/// Lattice volume sqrt(det(B B^T)) of the full-rank part of a (possibly
/// overcomplete) generating set, via exact elimination. Exact whenever the
/// Gram determinant is a perfect square, otherwise an enclosure with relative
/// error below 1e-30. Scale is not applied; the caller owns the convention.
VolumeResult lattice_volume(const IntegerLattice& gens);

/// Row echelon form over Z by unimodular row operations (generates the same
/// lattice); zero rows dropped.
IntMat integer_row_echelon(IntMat rows);

/// Exact determinant of a square integer matrix (fraction-free Bareiss).
Int det(const IntMat& m);

/// Exact det(B B^T).
Int gram_det(const IntMat& rows);

/// Solve x * basis = v exactly over Q; returns the integer coefficient vector
/// if v is a lattice point, nullopt otherwise.
std::optional<IntVec> membership_coeffs(const IntMat& basis, const IntVec& v);

Rat dot(const IntVec& a, const IntVec& b);
Rat sq_dist(const IntVec& a, const IntVec& b);

}  // namespace npi

#endif
