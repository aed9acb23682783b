#include "odeflow/liegroup.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace odeflow {

int skew_dim(int n) { return n * (n - 1) / 2; }

std::pair<int, int> skew_index_pair(int n, int k) {
    // (1,0),(2,0),(2,1),(3,0),... : ordered by i, then j.
    for (int i = 1; i < n; ++i) {
        if (k < i) return {i, k};
        k -= i;
    }
    throw std::invalid_argument("skew_index_pair: index out of range");
}

int skew_pair_index(int n, int i, int j) {
    if (!(i > j && j >= 0 && i < n))
        throw std::invalid_argument("skew_pair_index: need n > i > j >= 0");
    return i * (i - 1) / 2 + j;
}

Eigen::MatrixXd skew_basis_matrix(int n, int k) {
    const auto [i, j] = skew_index_pair(n, k);
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
    e(i, j) = 1.0;
    e(j, i) = -1.0;
    return e;
}

SkewMat SkewMat::from_coords(int n, const Eigen::VectorXd& a) {
    if (a.size() != skew_dim(n))
        throw std::invalid_argument("SkewMat::from_coords: dimension mismatch");
    SkewMat s(n);
    s.coords_ = a;
    return s;
}

SkewMat SkewMat::from_matrix(const Eigen::MatrixXd& A, double tol) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n) throw std::invalid_argument("SkewMat::from_matrix: not square");
    const double defect = (A + A.transpose()).cwiseAbs().maxCoeff();
    if (defect > tol * (1.0 + A.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("SkewMat::from_matrix: matrix is not skew");
    SkewMat s(n);
    for (int k = 0; k < skew_dim(n); ++k) {
        const auto [i, j] = skew_index_pair(n, k);
        s.coords_[k] = A(i, j);
    }
    return s;
}

Eigen::MatrixXd SkewMat::dense() const {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_, n_);
    for (int k = 0; k < coords_.size(); ++k) {
        const auto [i, j] = skew_index_pair(n_, k);
        A(i, j) = coords_[k];
        A(j, i) = -coords_[k];
    }
    return A;
}

OrthMat OrthMat::identity(int n) { return OrthMat(Eigen::MatrixXd::Identity(n, n)); }

OrthMat OrthMat::from_matrix(const Eigen::MatrixXd& Q) {
    const int n = static_cast<int>(Q.rows());
    if (Q.cols() != n) throw std::invalid_argument("OrthMat: not square");
    const double defect = (Q.transpose() * Q - Eigen::MatrixXd::Identity(n, n)).norm();
    if (defect >= 1e-12)
        throw std::invalid_argument("OrthMat: orthogonality defect too large");
    if (Q.determinant() <= 0.0)
        throw std::invalid_argument("OrthMat: determinant must be positive");
    return OrthMat(Q);
}

double OrthMat::orthogonality_defect() const {
    const int n = this->n();
    return (q_.transpose() * q_ - Eigen::MatrixXd::Identity(n, n)).norm();
}

OrthMat expm(const SkewMat& A) {
    const Eigen::MatrixXd dense = A.dense();
    Eigen::MatrixXd E = dense.exp();
    const int n = A.n();
    const double defect = (E.transpose() * E - Eigen::MatrixXd::Identity(n, n)).norm();
    if (defect > 1e-9)
        throw std::runtime_error("expm: orthogonality defect above 1e-9");
    if (defect > 1e-12) {
        // Polar projection onto the group.
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(E, Eigen::ComputeFullU | Eigen::ComputeFullV);
        E = svd.matrixU() * svd.matrixV().transpose();
    }
    return OrthMat::from_matrix(E);
}

SkewMat logm(const OrthMat& Q, double skew_tol) {
    const Eigen::MatrixXd L = Q.matrix().log();
    const double sym = (L + L.transpose()).cwiseAbs().maxCoeff();
    if (sym > skew_tol * (1.0 + L.cwiseAbs().maxCoeff()))
        throw std::runtime_error("logm: logarithm is not skew (too close to the cut locus)");
    return SkewMat::from_matrix(0.5 * (L - L.transpose()));
}

OrthMat haar_sample(Rng& rng, int n) {
    if (n < 2) throw std::invalid_argument("haar_sample: need n >= 2");
    const Eigen::MatrixXd G = rng.normal_matrix(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
    if (Q.determinant() < 0.0) Q.col(n - 1) = -Q.col(n - 1);
    return OrthMat::from_matrix(Q);
}

std::vector<Eigen::MatrixXd> tangent_basis(const OrthMat& Q) {
    const int n = Q.n();
    std::vector<Eigen::MatrixXd> basis;
    basis.reserve(skew_dim(n));
    for (int k = 0; k < skew_dim(n); ++k) basis.push_back(skew_basis_matrix(n, k) * Q.matrix());
    return basis;
}

void Chart::check_radius(const Eigen::VectorXd& a) const {
    if (a.size() != skew_dim(base.n()))
        throw std::invalid_argument("Chart: coordinate dimension mismatch");
    if (a.norm() > radius)
        throw std::invalid_argument("Chart: point outside chart radius");
}

OrthMat Chart::at(const Eigen::VectorXd& a) const {
    check_radius(a);
    const SkewMat A = SkewMat::from_coords(base.n(), a);
    return OrthMat::from_matrix(expm(A).matrix() * base.matrix());
}

Eigen::MatrixXd ad_matrix(int n, const Eigen::MatrixXd& A) {
    const int d = skew_dim(n);
    Eigen::MatrixXd ad(d, d);
    for (int k = 0; k < d; ++k) {
        const Eigen::MatrixXd Ek = skew_basis_matrix(n, k);
        const Eigen::MatrixXd C = A * Ek - Ek * A;
        for (int l = 0; l < d; ++l) {
            const auto [i, j] = skew_index_pair(n, l);
            ad(l, k) = C(i, j);
        }
    }
    return ad;
}

Eigen::MatrixXd dexp_operator(int n, const Eigen::MatrixXd& A) {
    const int d = skew_dim(n);
    const Eigen::MatrixXd ad = ad_matrix(n, A);
    // psi(x) = sum_{p>=0} (-x)^p / (p+1)!
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd psi = term;
    for (int p = 1; p <= 60; ++p) {
        term = term * (-ad) / static_cast<double>(p + 1);
        psi += term;
        if (term.norm() < 1e-18) break;
    }
    return psi;
}

namespace {
std::complex<double> psi_scalar(const std::complex<double>& z) {
    if (std::abs(z) < 1e-4) {
        // psi(z) = 1 - z/2 + z^2/6 - z^3/24 + O(z^4)
        return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
    }
    return (1.0 - std::exp(-z)) / z;
}
}  // namespace

double exp_chart_density(int n, const Eigen::MatrixXd& A) {
    const Eigen::MatrixXd ad = ad_matrix(n, A);
    Eigen::ComplexEigenSolver<Eigen::MatrixXd> es(ad);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("exp_chart_density: eigensolver failed");
    std::complex<double> det = 1.0;
    for (int i = 0; i < ad.rows(); ++i) det *= psi_scalar(es.eigenvalues()[i]);
    const double val = det.real();
    if (!(val > 0.0))
        throw std::runtime_error("exp_chart_density: non-positive density");
    return val;
}

Eigen::VectorXd ChartFrame::field_coords(const Eigen::MatrixXd& S) const {
    // S*Q in the chart frame: exp(A) psi(ad_A)(A(x)) * base = S * exp(A) * base
    // => psi(ad_A)(A(x)) = exp(-A) S exp(A).
    const Eigen::MatrixXd Z = expA.transpose() * S * expA;
    const int n = Q.n();
    Eigen::VectorXd z(skew_dim(n));
    for (int k = 0; k < skew_dim(n); ++k) {
        const auto [i, j] = skew_index_pair(n, k);
        z[k] = 0.5 * (Z(i, j) - Z(j, i));  // symmetrize away roundoff
    }
    return psi_lu.solve(z);
}

ChartFrame chart_frame(const Chart& chart, const Eigen::VectorXd& a) {
    chart.check_radius(a);
    const int n = chart.base.n();
    ChartFrame cf{a,
                  SkewMat::from_coords(n, a).dense(),
                  Eigen::MatrixXd(),
                  OrthMat::identity(n),
                  Eigen::MatrixXd(),
                  Eigen::PartialPivLU<Eigen::MatrixXd>(),
                  {},
                  1.0};
    cf.expA = expm(SkewMat::from_coords(n, a)).matrix();
    cf.Q = OrthMat::from_matrix(cf.expA * chart.base.matrix());
    cf.psi = dexp_operator(n, cf.A);
    cf.psi_lu.compute(cf.psi);
    cf.frame.reserve(skew_dim(n));
    for (int k = 0; k < skew_dim(n); ++k) {
        // dQ/da_k = exp(A) * psi(ad_A)(E_k) * base
        Eigen::MatrixXd psiEk = Eigen::MatrixXd::Zero(n, n);
        for (int l = 0; l < skew_dim(n); ++l) {
            if (cf.psi(l, k) != 0.0) psiEk += cf.psi(l, k) * skew_basis_matrix(n, l);
        }
        cf.frame.push_back(cf.expA * psiEk * chart.base.matrix());
    }
    cf.haar_density = exp_chart_density(n, cf.A);
    return cf;
}

}  // namespace odeflow
