#include "odeflow/quadode.hpp"

#include <cmath>
#include <stdexcept>

namespace odeflow {

SymBilinearMap SymBilinearMap::symmetrize(const std::vector<Eigen::MatrixXd>& raw) {
    const int n = static_cast<int>(raw.size());
    if (n == 0) throw std::invalid_argument("SymBilinearMap: empty tensor");
    for (const auto& m : raw) {
        if (m.rows() != n || m.cols() != n)
            throw std::invalid_argument("SymBilinearMap: tensor is not n x n x n");
        if (!m.allFinite())
            throw std::invalid_argument("SymBilinearMap: non-finite coefficient");
    }
    SymBilinearMap b;
    b.n_ = n;
    b.slices_.reserve(n);
    for (const auto& m : raw) b.slices_.push_back(0.5 * (m + m.transpose()));
    return b;
}

SymBilinearMap SymBilinearMap::zero(int n) {
    if (n <= 0) throw std::invalid_argument("SymBilinearMap: dimension must be positive");
    return symmetrize(std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n)));
}

Eigen::VectorXd SymBilinearMap::eval(const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& z) const {
    if (y.size() != n_ || z.size() != n_)
        throw std::invalid_argument("SymBilinearMap::eval: dimension mismatch");
    Eigen::VectorXd out(n_);
    for (int k = 0; k < n_; ++k) out[k] = y.dot(slices_[k] * z);
    return out;
}

double SymBilinearMap::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& s : slices_) m = std::max(m, s.cwiseAbs().maxCoeff());
    return m;
}

InnerProduct InnerProduct::identity(int n) {
    return InnerProduct{Eigen::MatrixXd::Identity(n, n)};
}

InnerProduct InnerProduct::diagonal(const Eigen::VectorXd& d) {
    return InnerProduct{Eigen::MatrixXd(d.asDiagonal())};
}

double InnerProduct::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    return es.eigenvalues().minCoeff();
}

bool InnerProduct::is_positive_definite(double margin) const {
    return min_eigenvalue() > margin;
}

Eigen::MatrixXd InnerProduct::cholesky() const {
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("InnerProduct::cholesky: form is not positive definite");
    return llt.matrixL();
}

double trilinear(const SymBilinearMap& B, const InnerProduct& G,
                 const Eigen::VectorXd& y1, const Eigen::VectorXd& y2,
                 const Eigen::VectorXd& y3) {
    if (G.n() != B.n() || y3.size() != B.n())
        throw std::invalid_argument("trilinear: dimension mismatch");
    return B.eval(y1, y2).dot(G.gram * y3);
}

double cancellation_residual(const SymBilinearMap& B, const InnerProduct& G,
                             const ResidualOptions& opt) {
    if (G.n() != B.n())
        throw std::invalid_argument("cancellation_residual: dimension mismatch");
    Rng rng(opt.seed);
    double worst = 0.0;
    for (int s = 0; s < opt.samples; ++s) {
        const Eigen::VectorXd y = rng.normal_vector(B.n());
        const double num = std::abs(trilinear(B, G, y, y, y));
        const double r = y.norm();
        worst = std::max(worst, num / (1.0 + r * r * r));
    }
    return worst;
}

}  // namespace odeflow
