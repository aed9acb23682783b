/// @file certificate.hpp
/// @brief Decides whether a quadratic system conserves some positive
/// definite inner product: builds the linear constraint system on candidate
/// Gram matrices, searches its null space for a positive definite element,
/// and changes basis so the certificate becomes Euclidean.
///
/// The positive-definite search is a heuristic (projected subgradient
/// ascent on the minimum eigenvalue, with seeded restarts), not a complete
/// SDP solve: not_found means the heuristic failed, never a proof of
/// non-embeddability. The parallel witness provides the one sound
/// obstruction: a y with B(y,y) = lambda * y, lambda != 0, rules out every
/// inner product, since <B(y,y),y>_G = lambda <y,y>_G != 0.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "odeflow/quadode.hpp"

namespace odeflow {

/// Half-vectorization index helpers for symmetric matrices (p <= q pairs,
/// column-major over the upper triangle: (0,0),(0,1),(1,1),(0,2),...).
int vech_dim(int n);
Eigen::VectorXd sym_to_vech(const Eigen::MatrixXd& S);
Eigen::MatrixXd vech_to_sym(int n, const Eigen::VectorXd& v);

/// Linear system A * vech(G) = 0 whose solution set is exactly the
/// symmetric G with <B(y,y),y>_G identically zero. One row per index
/// multiset {i<=j<=k}: the full symmetrization of (i,j,k) -> sum_l
/// G(l,k) b[l][i][j] must vanish.
struct ConstraintSystem {
    int n = 0;
    Eigen::MatrixXd A;                        // rows: monomials, cols: vech(G)
    std::vector<std::array<int, 3>> monomials;

    /// Residual |A vech(G)|_inf, scale-normalized.
    double residual(const Eigen::MatrixXd& G) const;
};

ConstraintSystem constraint_system(const SymBilinearMap& B);

/// Orthonormal basis (columns) of the numerical null space of A; singular
/// values below cutoff * sigma_max count as zero.
Eigen::MatrixXd constraint_null_space(const ConstraintSystem& sys, double cutoff = 1e-10);

struct CertificateOptions {
    std::uint64_t seed = 0;
    int restarts = 32;
    int ascent_iterations = 300;
    double rank_cutoff = 1e-10;   // relative SVD cutoff for the null space
    double residual_tol = 1e-10;  // acceptance residual for (yo)
    double pd_margin = 1e-8;      // min eigenvalue after trace normalization
    bool search_witness_on_failure = true;
};

enum class CertificateStatus { found, not_found };

struct CertificateResult {
    CertificateStatus status = CertificateStatus::not_found;
    InnerProduct G;                // trace-normalized to trace(G) = n
    Eigen::MatrixXd cholesky;      // lower L with G = L L^T
    Eigen::MatrixXd basis_change;  // L^T; trajectories map via y' = L^T y
    Eigen::MatrixXd null_basis;    // columns: vech of the solution space
    std::optional<Eigen::VectorXd> witness;  // parallel witness, if one was found
    double witness_lambda = 0.0;

    bool found() const { return status == CertificateStatus::found; }
};

/// Search order: (1) the identity matrix, (2) projected subgradient ascent
/// of the minimum eigenvalue over the unit sphere of the constraint null
/// space, with restarts. Accepts iff, after trace normalization, the
/// minimum eigenvalue exceeds pd_margin and the cancellation residual is
/// below residual_tol.
CertificateResult find_certificate(const SymBilinearMap& B,
                                   const CertificateOptions& opts = {});

/// Change of variables making the certificate Euclidean:
/// B'(y',z') = L^T B(L^{-T} y', L^{-T} z'), so that <B'(y,y),y> = 0 for the
/// Euclidean inner product and trajectories correspond under y' = L^T y.
SymBilinearMap euclideanize(const SymBilinearMap& B, const CertificateResult& cert);

struct WitnessOptions {
    std::uint64_t seed = 0;
    int restarts = 64;
    int iterations = 400;
    double align_tol = 1e-8;   // |B(y,y) - lambda y| on the unit sphere
    double lambda_floor = 1e-8;
};

struct ParallelWitness {
    Eigen::VectorXd y;  // unit vector with B(y,y) ~ lambda y
    double lambda = 0.0;
};

/// Seeded local maximization of |<B(y,y),y>| over the unit sphere followed
/// by an alignment refinement; returns a witness only when the alignment
/// residual is below align_tol and |lambda| exceeds lambda_floor.
std::optional<ParallelWitness> parallel_witness(const SymBilinearMap& B,
                                                const WitnessOptions& opts = {});

}  // namespace odeflow
