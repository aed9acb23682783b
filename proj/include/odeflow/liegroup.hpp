/// @file liegroup.hpp
/// @brief SO(n) machinery: the canonical skew basis, matrix exponential,
/// Haar sampling, exponential charts, and the dexp operator needed to move
/// between chart coordinates and right-translated frames.
///
/// Canonical skew basis: pairs (i,j) with i > j in lexicographic order,
/// E_ij = e_i e_j^T - e_j e_i^T with raw +-1 entries (Frobenius norm
/// sqrt(2); deliberately not normalized).

#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "odeflow/rng.hpp"

namespace odeflow {

int skew_dim(int n);                                  // n(n-1)/2
std::pair<int, int> skew_index_pair(int n, int k);    // k -> (i,j), i > j
int skew_pair_index(int n, int i, int j);             // inverse of the above
Eigen::MatrixXd skew_basis_matrix(int n, int k);      // E_k, dense

/// Skew matrix stored as strictly-lower-triangular coefficients in the
/// canonical basis order; dense() is exactly antisymmetric.
class SkewMat {
public:
    explicit SkewMat(int n) : n_(n), coords_(Eigen::VectorXd::Zero(skew_dim(n))) {}
    static SkewMat from_coords(int n, const Eigen::VectorXd& a);
    /// Extracts the strictly lower triangle; throws if |A + A^T| exceeds tol.
    static SkewMat from_matrix(const Eigen::MatrixXd& A, double tol = 1e-12);

    int n() const { return n_; }
    const Eigen::VectorXd& coords() const { return coords_; }
    Eigen::MatrixXd dense() const;

private:
    int n_;
    Eigen::VectorXd coords_;
};

/// Special orthogonal matrix; construction enforces |Q^T Q - I|_F < 1e-12
/// and det Q > 0.
class OrthMat {
public:
    static OrthMat identity(int n);
    static OrthMat from_matrix(const Eigen::MatrixXd& Q);

    int n() const { return static_cast<int>(q_.rows()); }
    const Eigen::MatrixXd& matrix() const { return q_; }
    double orthogonality_defect() const;

private:
    explicit OrthMat(Eigen::MatrixXd q) : q_(std::move(q)) {}
    Eigen::MatrixXd q_;
};

/// Matrix exponential of a skew matrix. Defect below 1e-12 is accepted
/// as-is; in (1e-12, 1e-9] the result is polar-projected back onto the
/// group; beyond that a std::runtime_error is raised.
OrthMat expm(const SkewMat& A);

/// Principal matrix logarithm of a rotation, as a skew matrix. Valid away
/// from the cut locus; used by flow tests with small arguments.
SkewMat logm(const OrthMat& Q, double skew_tol = 1e-9);

/// Haar-distributed rotation: QR of a Gaussian matrix with the positive-
/// diagonal sign convention, determinant corrected to +1 by flipping the
/// last column.
OrthMat haar_sample(Rng& rng, int n);

/// Right-translated tangent basis {E_k Q} of T_Q SO(n).
std::vector<Eigen::MatrixXd> tangent_basis(const OrthMat& Q);

/// Exponential chart a -> exp(A(a)) * base, restricted to |a| <= radius
/// (default 1, well inside the injectivity radius).
struct Chart {
    OrthMat base = OrthMat::identity(2);
    double radius = 1.0;

    OrthMat at(const Eigen::VectorXd& a) const;
    void check_radius(const Eigen::VectorXd& a) const;
};

/// Matrix of ad_A : X -> [A, X] on the canonical skew basis (d x d).
Eigen::MatrixXd ad_matrix(int n, const Eigen::MatrixXd& A);

/// psi(ad_A) with psi(x) = (1 - e^{-x})/x, as a d x d matrix, evaluated by
/// power series (converges fast for |a| <= 1). The differential of the
/// chart is  D exp_A(Delta) = exp(A) psi(ad_A)(Delta).
Eigen::MatrixXd dexp_operator(int n, const Eigen::MatrixXd& A);

/// Haar density of the exponential chart relative to the right-translated
/// frame: det psi(ad_A), computed from the eigenvalues of ad_A, with the
/// removable singularity at 0 handled by series for |lambda| < 1e-4.
double exp_chart_density(int n, const Eigen::MatrixXd& A);

/// Per-point chart data used by field evaluation: the rotation, the chart
/// coordinate frame (tangent matrices dQ/da_k), the dexp operator and its
/// LU, and the Haar density.
struct ChartFrame {
    Eigen::VectorXd a;
    Eigen::MatrixXd A;     // A(a), dense skew
    Eigen::MatrixXd expA;  // exp(A(a))
    OrthMat Q;             // exp(A(a)) * base
    Eigen::MatrixXd psi;   // dexp operator on the skew basis
    Eigen::PartialPivLU<Eigen::MatrixXd> psi_lu;
    std::vector<Eigen::MatrixXd> frame;  // dQ/da_k = expA * psi(E_k) * base
    double haar_density = 1.0;

    /// Chart coordinates of the right-invariant field value S * Q at Q:
    /// solves psi(ad_A) x = coords(exp(-A) S exp(A)).
    Eigen::VectorXd field_coords(const Eigen::MatrixXd& S) const;
};

ChartFrame chart_frame(const Chart& chart, const Eigen::VectorXd& a);

}  // namespace odeflow
