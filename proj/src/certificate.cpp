#include "odeflow/certificate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "odeflow/rng.hpp"

namespace odeflow {

int vech_dim(int n) { return n * (n + 1) / 2; }

namespace {
int vech_index(int p, int q) {  // requires p <= q
    return q * (q + 1) / 2 + p;
}
}  // namespace

Eigen::VectorXd sym_to_vech(const Eigen::MatrixXd& S) {
    const int n = static_cast<int>(S.rows());
    Eigen::VectorXd v(vech_dim(n));
    for (int q = 0; q < n; ++q)
        for (int p = 0; p <= q; ++p) v[vech_index(p, q)] = S(p, q);
    return v;
}

Eigen::MatrixXd vech_to_sym(int n, const Eigen::VectorXd& v) {
    if (v.size() != vech_dim(n))
        throw std::invalid_argument("vech_to_sym: dimension mismatch");
    Eigen::MatrixXd S(n, n);
    for (int q = 0; q < n; ++q)
        for (int p = 0; p <= q; ++p) S(p, q) = S(q, p) = v[vech_index(p, q)];
    return S;
}

double ConstraintSystem::residual(const Eigen::MatrixXd& G) const {
    if (A.size() == 0) return 0.0;
    const Eigen::VectorXd r = A * sym_to_vech(G);
    const double amax = A.cwiseAbs().maxCoeff();
    const double gmax = G.cwiseAbs().maxCoeff();
    return r.cwiseAbs().maxCoeff() / ((1.0 + amax) * (1.0 + gmax));
}

ConstraintSystem constraint_system(const SymBilinearMap& B) {
    const int n = B.n();
    ConstraintSystem sys;
    sys.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) sys.monomials.push_back({i, j, k});

    sys.A = Eigen::MatrixXd::Zero(static_cast<int>(sys.monomials.size()), vech_dim(n));
    for (std::size_t row = 0; row < sys.monomials.size(); ++row) {
        const auto [i, j, k] = sys.monomials[row];
        const std::array<std::array<int, 3>, 6> perms{
            {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}}};
        // T(a,b,c) = sum_l b[l][a][b] G(l,c); collect the coefficient of each
        // vech unknown G(p,q) over all six orderings of the monomial.
        for (const auto& p3 : perms) {
            const int a = p3[0], b = p3[1], c = p3[2];
            for (int l = 0; l < n; ++l) {
                const int p = std::min(l, c), q = std::max(l, c);
                sys.A(static_cast<int>(row), vech_index(p, q)) += B.coeff(l, a, b);
            }
        }
    }
    return sys;
}

Eigen::MatrixXd constraint_null_space(const ConstraintSystem& sys, double cutoff) {
    const int cols = static_cast<int>(sys.A.cols());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.A, Eigen::ComputeFullV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double smax = sigma.size() > 0 ? sigma[0] : 0.0;
    if (smax <= 0.0) return Eigen::MatrixXd::Identity(cols, cols);  // zero map
    int rank = 0;
    for (int i = 0; i < sigma.size(); ++i)
        if (sigma[i] > cutoff * smax) ++rank;
    return svd.matrixV().rightCols(cols - rank);
}

namespace {

// Minimum eigenvalue and its eigenvector.
std::pair<double, Eigen::VectorXd> min_eig(const Eigen::MatrixXd& S) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    return {es.eigenvalues()[0], es.eigenvectors().col(0)};
}

}  // namespace

CertificateResult find_certificate(const SymBilinearMap& B, const CertificateOptions& opts) {
    const int n = B.n();
    CertificateResult res;
    const ConstraintSystem sys = constraint_system(B);
    res.null_basis = constraint_null_space(sys, opts.rank_cutoff);

    auto accept = [&](const Eigen::MatrixXd& G_raw) -> bool {
        const double tr = G_raw.trace();
        if (!(tr > 0.0)) return false;
        const InnerProduct G{G_raw * (static_cast<double>(n) / tr)};
        if (G.min_eigenvalue() <= opts.pd_margin) return false;
        if (cancellation_residual(B, G, {derive_seed(opts.seed, 17), 100}) >= opts.residual_tol)
            return false;
        res.status = CertificateStatus::found;
        res.G = G;
        res.cholesky = G.cholesky();
        res.basis_change = res.cholesky.transpose();
        return true;
    };

    // Step 1: the identity matrix.
    if (accept(Eigen::MatrixXd::Identity(n, n))) return res;

    // Steps 2-3: projected subgradient ascent of the minimum eigenvalue over
    // the unit sphere of the null space, with seeded restarts.
    const int d = static_cast<int>(res.null_basis.cols());
    if (d > 0) {
        std::vector<Eigen::MatrixXd> basis_mats;
        basis_mats.reserve(d);
        for (int i = 0; i < d; ++i)
            basis_mats.push_back(vech_to_sym(n, res.null_basis.col(i)));

        double best_val = -std::numeric_limits<double>::infinity();
        Eigen::MatrixXd best_G;
        for (int r = 0; r < opts.restarts; ++r) {
            Rng rng(derive_seed(opts.seed, 1000 + static_cast<std::uint64_t>(r)));
            Eigen::VectorXd c = rng.unit_vector(d);
            double step = 0.5;
            for (int it = 0; it < opts.ascent_iterations; ++it) {
                Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
                for (int i = 0; i < d; ++i) G += c[i] * basis_mats[i];
                const auto [lmin, v] = min_eig(G);
                Eigen::VectorXd grad(d);
                for (int i = 0; i < d; ++i) grad[i] = v.dot(basis_mats[i] * v);
                c += step * grad;
                const double cn = c.norm();
                if (cn < 1e-14) {
                    c = rng.unit_vector(d);
                } else {
                    c /= cn;
                }
                step *= 0.985;
            }
            Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < d; ++i) G += c[i] * basis_mats[i];
            const double tr = G.trace();
            if (!(tr > 0.0)) continue;
            const double val = min_eig(G * (static_cast<double>(n) / tr)).first;
            if (val > best_val) {
                best_val = val;
                best_G = G;
            }
        }
        if (best_val > opts.pd_margin && accept(best_G)) return res;
    }

    res.status = CertificateStatus::not_found;
    if (opts.search_witness_on_failure) {
        WitnessOptions wopts;
        wopts.seed = derive_seed(opts.seed, 2);
        if (auto w = parallel_witness(B, wopts)) {
            res.witness = w->y;
            res.witness_lambda = w->lambda;
        }
    }
    return res;
}

SymBilinearMap euclideanize(const SymBilinearMap& B, const CertificateResult& cert) {
    if (!cert.found())
        throw std::invalid_argument("euclideanize: certificate status must be found");
    const int n = B.n();
    const Eigen::MatrixXd& L = cert.cholesky;
    const Eigen::MatrixXd Minv =
        L.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
    // B'(y',z') = L^T B(L^{-T} y', L^{-T} z'); componentwise the k-th slice
    // becomes Minv^T (sum_l L(l,k) B_l) Minv.
    std::vector<Eigen::MatrixXd> raw(n);
    for (int k = 0; k < n; ++k) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
        for (int l = 0; l < n; ++l) acc += L(l, k) * B.slice(l);
        raw[k] = Minv.transpose() * acc * Minv;
    }
    return SymBilinearMap::symmetrize(raw);
}

namespace {

// f(y) = <B(y,y), y> (Euclidean) and its gradient B(y,y) + 2g with
// g_i = <B(y,e_i), y>.
double cubic_form(const SymBilinearMap& B, const Eigen::VectorXd& y) {
    return B.eval(y, y).dot(y);
}

Eigen::VectorXd cubic_form_grad(const SymBilinearMap& B, const Eigen::VectorXd& y) {
    const int n = B.n();
    // df(y)[z] = <B(y,y),z> + 2 <B(y,z),y>, and <B(y,e_i),y> = sum_k y_k (B_k y)_i.
    Eigen::VectorXd mixed = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < n; ++k) mixed += y[k] * (B.slice(k) * y);
    return B.eval(y, y) + 2.0 * mixed;
}

double alignment_residual(const SymBilinearMap& B, const Eigen::VectorXd& y, double* lambda_out) {
    const Eigen::VectorXd by = B.eval(y, y);
    const double lambda = by.dot(y);  // y is unit
    if (lambda_out) *lambda_out = lambda;
    return (by - lambda * y).norm();
}

}  // namespace

std::optional<ParallelWitness> parallel_witness(const SymBilinearMap& B,
                                                const WitnessOptions& opts) {
    const int n = B.n();
    for (int r = 0; r < opts.restarts; ++r) {
        Rng rng(derive_seed(opts.seed, 3000 + static_cast<std::uint64_t>(r)));
        Eigen::VectorXd y = rng.unit_vector(n);
        const double sign = cubic_form(B, y) >= 0.0 ? 1.0 : -1.0;

        // Phase 1: projected gradient ascent of sign * <B(y,y),y> on the sphere.
        double step = 0.3;
        for (int it = 0; it < opts.iterations; ++it) {
            Eigen::VectorXd grad = sign * cubic_form_grad(B, y);
            grad -= grad.dot(y) * y;
            y = (y + step * grad).normalized();
            step *= 0.99;
        }

        // Phase 2: descend the alignment residual |B(y,y) - lambda y| with a
        // finite-difference tangential gradient (the maximizer of |f| need
        // not be aligned; this polish recovers nearby aligned points).
        const double h = 1e-6;
        double cur = alignment_residual(B, y, nullptr);
        double lstep = 0.1;
        for (int it = 0; it < opts.iterations && cur > 0.25 * opts.align_tol; ++it) {
            Eigen::VectorXd grad(n);
            for (int i = 0; i < n; ++i) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
                e[i] = h;
                const double fp = alignment_residual(B, (y + e).normalized(), nullptr);
                const double fm = alignment_residual(B, (y - e).normalized(), nullptr);
                grad[i] = (fp - fm) / (2.0 * h);
            }
            grad -= grad.dot(y) * y;
            Eigen::VectorXd trial = (y - lstep * grad).normalized();
            double tval = alignment_residual(B, trial, nullptr);
            int backtrack = 0;
            while (tval > cur && backtrack < 20) {
                lstep *= 0.5;
                trial = (y - lstep * grad).normalized();
                tval = alignment_residual(B, trial, nullptr);
                ++backtrack;
            }
            if (tval >= cur) break;
            y = trial;
            cur = tval;
            lstep *= 1.5;
        }

        double lambda = 0.0;
        const double resid = alignment_residual(B, y, &lambda);
        if (resid < opts.align_tol && std::abs(lambda) > opts.lambda_floor)
            return ParallelWitness{y, lambda};
    }
    return std::nullopt;
}

}  // namespace odeflow
