#include "odeflow/embedding.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace odeflow {

SMap SMap::build(const SymBilinearMap& B, double residual_tol) {
    const int n = B.n();
    const double resid = cancellation_residual(B, InnerProduct::identity(n), {0, 100});
    if (resid >= residual_tol) {
        std::ostringstream msg;
        msg << "SMap::build: B does not conserve the Euclidean inner product "
               "(cancellation residual "
            << resid << " >= " << residual_tol << "); euclideanize B with a certificate first";
        throw std::invalid_argument(msg.str());
    }

    std::vector<Eigen::MatrixXd> gens(n, Eigen::MatrixXd::Zero(n, n));
    for (int a = 0; a < n; ++a) {
        // <S(e_a) e_b, e_c> = (2/3)(b[c][a][b] - b[b][a][c]); fill c > b and
        // mirror, so the stored generator is antisymmetric exactly.
        for (int c = 0; c < n; ++c) {
            for (int b = 0; b < c; ++b) {
                const double v = (2.0 / 3.0) * (B.coeff(c, a, b) - B.coeff(b, a, c));
                gens[a](c, b) = v;
                gens[a](b, c) = -v;
            }
        }
    }
    SMap s;
    s.n_ = n;
    s.generators_ = std::move(gens);

    // Cheap construction self-check of S(y) y = B(y,y) at a few points.
    Rng rng(7);
    for (int t = 0; t < 5; ++t) {
        const Eigen::VectorXd y = rng.normal_vector(n);
        const double err = (s.at(y) * y - B.eval(y, y)).norm();
        if (err > 1e-10 * (1.0 + y.squaredNorm()) * (1.0 + B.max_abs_coeff()))
            throw std::runtime_error("SMap::build: duality construction failed self-check");
    }
    return s;
}

SMap SMap::from_dense(std::vector<Eigen::MatrixXd> generators, bool require_skew) {
    const int n = static_cast<int>(generators.size());
    if (n == 0) throw std::invalid_argument("SMap::from_dense: no generators");
    for (const auto& g : generators) {
        if (g.rows() != n || g.cols() != n)
            throw std::invalid_argument("SMap::from_dense: generator dimension mismatch");
        if (require_skew && (g + g.transpose()).cwiseAbs().maxCoeff() > 0.0)
            throw std::invalid_argument("SMap::from_dense: generator is not skew");
    }
    SMap s;
    s.n_ = n;
    s.generators_ = std::move(generators);
    return s;
}

Eigen::MatrixXd SMap::at(const Eigen::VectorXd& y) const {
    if (y.size() != n_) throw std::invalid_argument("SMap::at: dimension mismatch");
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n_, n_);
    for (int j = 0; j < n_; ++j) S += y[j] * generators_[j];
    return S;
}

ChartPoint ChartPoint::level4(Chart chart, Eigen::VectorXd a) {
    return ChartPoint{std::move(chart), std::move(a), Eigen::VectorXd(), 0.0, 4};
}

ChartPoint ChartPoint::level3(Chart chart, Eigen::VectorXd a, Eigen::VectorXd theta) {
    ChartPoint x{std::move(chart), std::move(a), std::move(theta), 0.0, 3};
    x.theta = x.theta.unaryExpr([](double t) { return t - std::floor(t); });
    return x;
}

ChartPoint ChartPoint::level1(Chart chart, Eigen::VectorXd a, Eigen::VectorXd theta, double s) {
    ChartPoint x = level3(std::move(chart), std::move(a), std::move(theta));
    x.s = s - std::floor(s);
    x.level = 1;
    return x;
}

ChartPoint ChartPoint::project_to_level3() const {
    ChartPoint x = *this;
    x.s = 0.0;
    x.level = 3;
    return x;
}

ChartPoint sample_chart_point(Rng& rng, int n, int level, double a_radius) {
    Chart chart{haar_sample(rng, n), 1.0};
    Eigen::VectorXd a = rng.ball_vector(skew_dim(n), a_radius);
    if (level == 4) return ChartPoint::level4(std::move(chart), std::move(a));
    Eigen::VectorXd theta = rng.uniform_vector(n, 0.0, 1.0);
    if (level == 1)
        return ChartPoint::level1(std::move(chart), std::move(a), std::move(theta),
                                  rng.uniform());
    ChartPoint x = ChartPoint::level3(std::move(chart), std::move(a), std::move(theta));
    x.level = level;
    return x;
}

Level4Eval level4_fields(const SMap& S, const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                         const OrthMat& Q) {
    if (y.size() != S.n() || z.size() != S.n() || Q.n() != S.n())
        throw std::invalid_argument("level4_fields: dimension mismatch");
    const Eigen::MatrixXd Sy = S.at(y);
    Level4Eval ev;
    ev.U4 = Sy * Q.matrix();
    ev.F = y.dot(Q.matrix() * z);
    ev.dF_along_U = y.dot(Sy * (Q.matrix() * z));
    return ev;
}

namespace {

struct Level3Frame {
    ChartFrame cf;
    int n, d, m;
    Eigen::MatrixXd frame;   // m x n, columns U(e_j) in chart coordinates
    Eigen::MatrixXd covel;   // m x n, columns V(e_j) in chart coordinates
    Eigen::MatrixXd h;       // m x m auxiliary metric in the chart frame
};

Level3Frame level3_frame(const SMap& S, const ChartPoint& x) {
    const int n = S.n();
    const int d = skew_dim(n);
    Level3Frame fr{chart_frame(x.chart, x.a), n, d, d + n,
                   Eigen::MatrixXd::Zero(d + n, n), Eigen::MatrixXd::Zero(d + n, n),
                   Eigen::MatrixXd::Zero(d + n, d + n)};
    const Eigen::MatrixXd& Q = fr.cf.Q.matrix();
    for (int j = 0; j < n; ++j) {
        fr.frame.col(j).head(d) = fr.cf.field_coords(S.generator(j));
        fr.frame.col(j).tail(n) = Q.transpose().col(j);  // F(e_j, e_i) = Q(j,i)
        fr.covel.col(j).tail(n) = Q.transpose().col(j);
    }
    // h: bi-invariant Frobenius metric on SO(n) x flat torus. In chart
    // coordinates the SO(n) block is 2 psi^T psi (the canonical skew basis
    // has Frobenius norm sqrt(2) per element).
    fr.h.topLeftCorner(d, d) = 2.0 * fr.cf.psi.transpose() * fr.cf.psi;
    fr.h.bottomRightCorner(n, n).setIdentity();
    return fr;
}

// Metric via h-orthogonal projectors; basis-free, hence smooth in a.
Eigen::MatrixXd metric_chart(const Level3Frame& fr, double C) {
    const Eigen::MatrixXd hFr = fr.h * fr.frame;
    const Eigen::MatrixXd gram_h = fr.frame.transpose() * hFr;  // frame Gram w.r.t. h
    const Eigen::MatrixXd P = gram_h.ldlt().solve(hFr.transpose());   // n x m
    const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(fr.m, fr.m) - fr.frame * P;
    const Eigen::MatrixXd gram = fr.covel.transpose() * fr.frame;     // = <y,y'> pairing
    Eigen::MatrixXd g = P.transpose() * gram * P;
    g += P.transpose() * (fr.covel.transpose() * M);
    g += (M.transpose() * fr.covel) * P;
    g += C * (M.transpose() * fr.h * M);
    return 0.5 * (g + g.transpose());
}

// Explicit h-orthonormal complement basis (columns), via Cholesky of h and
// a full SVD of the mapped frame.
Eigen::MatrixXd complement_basis(const Level3Frame& fr) {
    const Eigen::LLT<Eigen::MatrixXd> llt(fr.h);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("complement_basis: auxiliary metric not positive definite");
    const Eigen::MatrixXd Lt = Eigen::MatrixXd(llt.matrixL()).transpose();
    const Eigen::MatrixXd mapped = Lt * fr.frame;  // Euclideanized frame
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mapped, Eigen::ComputeFullU);
    if (svd.singularValues().minCoeff() <= 1e-10 * svd.singularValues().maxCoeff())
        throw std::runtime_error("complement_basis: frame vectors are linearly dependent");
    const Eigen::MatrixXd Ucomp = svd.matrixU().rightCols(fr.m - fr.n);
    return Lt.triangularView<Eigen::Upper>().solve(Ucomp);
}

}  // namespace

FieldEval level3_fields(const SMap& S, const Eigen::VectorXd& y, const ChartPoint& x) {
    if (x.level != 3 && x.level != 2)
        throw std::invalid_argument("level3_fields: point level must be 3 or 2");
    if (y.size() != S.n()) throw std::invalid_argument("level3_fields: dimension mismatch");
    const int n = S.n(), d = skew_dim(n);
    const ChartFrame cf = chart_frame(x.chart, x.a);

    FieldEval ev;
    ev.level = 3;
    ev.F = cf.Q.matrix().transpose() * y;  // F(y,e_i)(Q) = <y, Q e_i>
    ev.U = Eigen::VectorXd::Zero(d + n);
    ev.U.head(d) = cf.field_coords(S.at(y));
    ev.U.tail(n) = ev.F;
    ev.V = Eigen::VectorXd::Zero(d + n);
    ev.V.tail(n) = ev.F;
    ev.Pprime = 0.5 * ev.F.squaredNorm();
    ev.vol_density = cf.haar_density;
    return ev;
}

FieldEval level2_metric(const SMap& S, const ChartPoint& x, double C) {
    if (x.level != 2 && x.level != 3)
        throw std::invalid_argument("level2_metric: point level must be 2 or 3");
    if (!(C > 0.0)) throw std::invalid_argument("level2_metric: C must be positive");
    const Level3Frame fr = level3_frame(S, x);
    FieldEval ev;
    ev.level = 2;
    ev.g = metric_chart(fr, C);
    ev.vol_density = fr.cf.haar_density;
    ev.det_vol = ev.g.determinant() / (ev.vol_density * ev.vol_density);
    return ev;
}

Eigen::MatrixXd level2_metric_blockwise(const SMap& S, const ChartPoint& x, double C) {
    const Level3Frame fr = level3_frame(S, x);
    const Eigen::MatrixXd X = complement_basis(fr);
    const int k = static_cast<int>(X.cols());
    Eigen::MatrixXd T(fr.m, fr.m);
    T.leftCols(fr.n) = fr.frame;
    T.rightCols(k) = X;
    Eigen::MatrixXd block(fr.m, fr.m);
    block.topLeftCorner(fr.n, fr.n) = fr.covel.transpose() * fr.frame;
    block.topRightCorner(fr.n, k) = fr.covel.transpose() * X;
    block.bottomLeftCorner(k, fr.n) = block.topRightCorner(fr.n, k).transpose();
    block.bottomRightCorner(k, k) = C * (X.transpose() * fr.h * X);
    const Eigen::MatrixXd Tinv = T.partialPivLu().inverse();
    const Eigen::MatrixXd g = Tinv.transpose() * block * Tinv;
    return 0.5 * (g + g.transpose());
}

double choose_C(const SMap& S, const std::vector<ChartPoint>& sample_points) {
    if (sample_points.empty()) throw std::invalid_argument("choose_C: no sample points");
    double cmin = 0.0;
    for (const auto& x : sample_points) {
        const Level3Frame fr = level3_frame(S, x);
        const Eigen::MatrixXd X = complement_basis(fr);
        const Eigen::MatrixXd cross = fr.covel.transpose() * X;  // V(e_j)(X_l)
        // Schur condition for [[I, R],[R^T, C I]] > 0 is C > sigma_max(R)^2.
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross);
        const double smax = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
        cmin = std::max(cmin, smax * smax);
    }
    return std::max(1.0, 2.0 * cmin);
}

FieldEval level1_fields(const SMap& S, const Eigen::VectorXd& y, const ChartPoint& x, double C) {
    if (x.level != 1) throw std::invalid_argument("level1_fields: point level must be 1");
    const ChartPoint x3 = x.project_to_level3();
    FieldEval base = level3_fields(S, y, x3);
    const Level3Frame fr = level3_frame(S, x3);
    const Eigen::MatrixXd g3 = metric_chart(fr, C);
    const int m = fr.m;

    FieldEval ev;
    ev.level = 1;
    ev.F = base.F;
    ev.Pprime = base.Pprime;
    ev.U = Eigen::VectorXd::Zero(m + 1);
    ev.U.head(m) = base.U;  // pullback: no ds component
    ev.V = Eigen::VectorXd::Zero(m + 1);
    ev.V.head(m) = base.V;
    ev.vol_density = base.vol_density;  // ds contributes a flat factor

    const double det_vol3 = g3.determinant() / (base.vol_density * base.vol_density);
    if (!(det_vol3 > 0.0))
        throw std::runtime_error("level1_fields: non-positive metric determinant");
    ev.g = Eigen::MatrixXd::Zero(m + 1, m + 1);
    ev.g.topLeftCorner(m, m) = g3;
    ev.g(m, m) = 1.0 / det_vol3;
    ev.det_vol = ev.g.determinant() / (ev.vol_density * ev.vol_density);

    // P(y,y) = P'(y,y) - 1/2 g(U(y),U(y))
    ev.P = ev.Pprime - 0.5 * ev.U.dot(ev.g * ev.U);
    return ev;
}

Eigen::VectorXd velocity_field(const SMap& S, const Eigen::VectorXd& y, const ChartPoint& x) {
    if (x.level == 4) {
        const ChartFrame cf = chart_frame(x.chart, x.a);
        return cf.field_coords(S.at(y));
    }
    const ChartPoint x3 = x.level == 1 ? x.project_to_level3() : x;
    const FieldEval ev = level3_fields(S, y, x3);
    if (x.level != 1) return ev.U;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(ev.U.size() + 1);
    u.head(ev.U.size()) = ev.U;
    return u;
}

}  // namespace odeflow
