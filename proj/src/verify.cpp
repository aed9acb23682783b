#include "odeflow/verify.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "odeflow/liegroup.hpp"
#include "odeflow/rng.hpp"

namespace odeflow {

ResidualReport make_report(std::string check, int samples, std::uint64_t seed,
                           std::vector<ResidualPart> parts) {
    ResidualReport rep;
    rep.check = std::move(check);
    rep.samples = samples;
    rep.seed = seed;
    rep.parts = std::move(parts);
    rep.pass = true;
    for (const auto& p : rep.parts) rep.pass = rep.pass && p.pass;
    if (!rep.parts.empty()) {
        rep.max_residual = rep.parts.front().residual;
        rep.tolerance = rep.parts.front().tolerance;
    }
    return rep;
}

ResidualReport check_transport(const SMap& S, const TransportCheckOptions& opts) {
    const int n = S.n();
    Rng rng(derive_seed(opts.seed, 101));
    double worst_analytic = 0.0;
    double worst_fd = 0.0;
    for (int s = 0; s < opts.samples; ++s) {
        const Eigen::VectorXd y = rng.normal_vector(n);
        const Eigen::VectorXd z = rng.normal_vector(n);
        const Eigen::MatrixXd Q = haar_sample(rng, n).matrix();
        const Eigen::MatrixXd Sy = S.at(y);
        const Eigen::VectorXd Byy = Sy * y;
        const double norm = (1.0 + y.squaredNorm()) * (1.0 + y.norm()) * (1e-30 + z.norm());

        const double dF_analytic = y.dot(Sy * (Q * z));
        const double analytic = std::abs(Byy.dot(Q * z) + dF_analytic) / norm;
        worst_analytic = std::max(worst_analytic, analytic);

        // Central-difference derivative of F(y,z) along Q(t) = exp(t S(y)) Q.
        const double h = opts.fd_step;
        const double fp = y.dot(((h * Sy).exp() * Q) * z);
        const double fm = y.dot(((-h * Sy).exp() * Q) * z);
        const double dF_fd = (fp - fm) / (2.0 * h);
        worst_fd = std::max(worst_fd, std::abs(dF_fd - dF_analytic) / norm);
    }
    return make_report(
        "transport", opts.samples, opts.seed,
        {{"analytic", worst_analytic, opts.analytic_tol, worst_analytic < opts.analytic_tol},
         {"fd_cross_check", worst_fd, opts.fd_tol, worst_fd < opts.fd_tol}});
}

ResidualReport check_covelocity_euler(const SMap& S, const CovelocityCheckOptions& opts) {
    const int n = S.n();
    const int d = skew_dim(n);
    Rng rng(derive_seed(opts.seed, 202));
    double worst_with_dp = 0.0;
    double worst_simplified = 0.0;
    double worst_path_gap = 0.0;
    for (int s = 0; s < opts.samples; ++s) {
        const ChartPoint x = sample_chart_point(rng, n, 3, opts.a_radius);
        const Eigen::VectorXd y = rng.normal_vector(n);
        const ChartFrame cf = chart_frame(x.chart, x.a);
        const Eigen::MatrixXd& Q = cf.Q.matrix();

        const Eigen::MatrixXd Sy = S.at(y);
        Eigen::VectorXd Byy = Sy * y;
        if (opts.shift_first_term.size() == n) Byy += opts.shift_first_term;

        const Eigen::VectorXd F = Q.transpose() * y;      // F(y,e_i)
        const Eigen::VectorXd FB = Q.transpose() * Byy;   // F(B(y,y),e_i)
        Eigen::VectorXd u_so(d);
        {
            const Eigen::VectorXd coords = cf.field_coords(Sy);
            u_so = coords;
        }
        // dF(y,e_i)/da_k = <y, W_k e_i> for the chart frame tangents W_k.
        Eigen::MatrixXd dFda(d, n);
        for (int k = 0; k < d; ++k) dFda.row(k) = (cf.frame[k].transpose() * y).transpose();

        // theta components: F(B(y,y),e_i) + sum_k u_so[k] dF_i/da_k
        const Eigen::VectorXd res_theta = FB + dFda.transpose() * u_so;
        // a components: -(sum_i F_i dF_i/da_k) + dP'/da_k
        const Eigen::VectorXd contraction_a = -(dFda * F);
        const Eigen::VectorXd dPda = dFda * F;

        const double norm = 1.0 + y.squaredNorm();
        const double with_dp =
            std::max(res_theta.cwiseAbs().maxCoeff(),
                     (contraction_a + dPda).cwiseAbs().maxCoeff()) / norm;
        const double simplified = std::max(res_theta.cwiseAbs().maxCoeff(),
                                           contraction_a.cwiseAbs().maxCoeff()) / norm;
        worst_with_dp = std::max(worst_with_dp, with_dp);
        worst_simplified = std::max(worst_simplified, simplified);
        worst_path_gap = std::max(worst_path_gap, std::abs(with_dp - simplified));
    }
    return make_report(
        "covelocity_euler", opts.samples, opts.seed,
        {{"with_pressure_differential", worst_with_dp, opts.tol, worst_with_dp < opts.tol},
         {"simplified_dp_zero", worst_simplified, opts.tol, worst_simplified < opts.tol},
         {"path_agreement", worst_path_gap, opts.tol, worst_path_gap < opts.tol}});
}

ResidualReport check_metric_compat(const SMap& S, double C, const MetricCheckOptions& opts) {
    const int n = S.n();
    Rng rng(derive_seed(opts.seed, 303));
    double worst = 0.0;
    double min_eig = std::numeric_limits<double>::infinity();
    for (int s = 0; s < opts.samples; ++s) {
        const ChartPoint x = sample_chart_point(rng, n, 3, opts.a_radius);
        const Eigen::VectorXd y = rng.normal_vector(n);
        const FieldEval fe = level3_fields(S, y, x);
        const Eigen::MatrixXd g = level2_metric(S, x, C).g;
        const double r = (g * fe.U - fe.V).cwiseAbs().maxCoeff() / (1.0 + y.norm());
        worst = std::max(worst, r);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
    return make_report("metric_compat", opts.samples, opts.seed,
                       {{"gU_equals_V", worst, opts.tol, worst < opts.tol},
                        {"g_min_eigenvalue", -min_eig, 0.0, min_eig > 0.0}});
}

ResidualReport check_unit_determinant(const SMap& S, double C,
                                      const DeterminantCheckOptions& opts) {
    const int n = S.n();
    Rng rng(derive_seed(opts.seed, 404));
    double worst = 0.0;
    const Eigen::VectorXd y = Eigen::VectorXd::Zero(n);  // determinant is y-free
    for (int s = 0; s < opts.samples; ++s) {
        const ChartPoint x = sample_chart_point(rng, n, 1, opts.a_radius);
        FieldEval fe = level1_fields(S, y, x, C);
        if (opts.ss_perturb != 0.0) {
            const int m = static_cast<int>(fe.g.rows()) - 1;
            fe.g(m, m) *= (1.0 + opts.ss_perturb);
            fe.det_vol = fe.g.determinant() / (fe.vol_density * fe.vol_density);
        }
        worst = std::max(worst, std::abs(fe.det_vol - 1.0));
    }
    return make_report("unit_determinant", opts.samples, opts.seed,
                       {{"det_minus_one", worst, opts.tol, worst < opts.tol}});
}

namespace {

/// Quadratic polynomial in the matrix entries times a trigonometric
/// monomial in the angles: f(Q,theta) = p(Q) T(theta), with
/// p(Q) = c0 + <L,Q>_F + <Q A, Q B>_F.
struct TestFunction {
    double c0 = 0.0;
    Eigen::MatrixXd L, A, B;
    std::vector<int> trig_index;  // angle index per factor
    std::vector<int> trig_k;      // frequency per factor
    std::vector<bool> trig_sin;   // sin or cos

    static TestFunction random(Rng& rng, int n, bool constant = false) {
        TestFunction f;
        f.c0 = rng.normal();
        if (constant) {
            f.L = Eigen::MatrixXd::Zero(n, n);
            f.A = Eigen::MatrixXd::Zero(n, n);
            f.B = Eigen::MatrixXd::Zero(n, n);
            return f;
        }
        f.L = rng.normal_matrix(n, n);
        f.A = rng.normal_matrix(n, n);
        f.B = rng.normal_matrix(n, n);
        for (int i = 0; i < n; ++i) {
            if (rng.uniform() < 0.5) {
                f.trig_index.push_back(i);
                f.trig_k.push_back(1 + static_cast<int>(rng.uniform_index(2)));
                f.trig_sin.push_back(rng.uniform() < 0.5);
            }
        }
        return f;
    }

    double p(const Eigen::MatrixXd& Q) const {
        return c0 + (L.array() * Q.array()).sum() + ((Q * A).array() * (Q * B).array()).sum();
    }
    double dp(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& W) const {
        return (L.array() * W.array()).sum() + ((W * A).array() * (Q * B).array()).sum() +
               ((Q * A).array() * (W * B).array()).sum();
    }
    double T(const Eigen::VectorXd& theta) const {
        double t = 1.0;
        const double two_pi = 6.283185307179586476925286766559;
        for (std::size_t i = 0; i < trig_index.size(); ++i) {
            const double arg = two_pi * trig_k[i] * theta[trig_index[i]];
            t *= trig_sin[i] ? std::sin(arg) : std::cos(arg);
        }
        return t;
    }
    double dT(const Eigen::VectorXd& theta, int axis) const {
        double t = 0.0;
        const double two_pi = 6.283185307179586476925286766559;
        for (std::size_t i = 0; i < trig_index.size(); ++i) {
            if (trig_index[i] != axis) continue;
            double prod = two_pi * trig_k[i];
            const double arg = two_pi * trig_k[i] * theta[trig_index[i]];
            prod *= trig_sin[i] ? std::cos(arg) : -std::sin(arg);
            for (std::size_t j = 0; j < trig_index.size(); ++j) {
                if (j == i) continue;
                const double argj = two_pi * trig_k[j] * theta[trig_index[j]];
                prod *= trig_sin[j] ? std::sin(argj) : std::cos(argj);
            }
            t += prod;
        }
        return t;
    }

    /// df(U(y)) at (Q, theta), with W = S(y) Q the SO(n) part of the field
    /// and F = Q^T y the torus part.
    double directional(const Eigen::MatrixXd& Q, const Eigen::VectorXd& theta,
                       const Eigen::MatrixXd& W, const Eigen::VectorXd& F) const {
        double v = dp(Q, W) * T(theta);
        const double pq = p(Q);
        for (int i = 0; i < theta.size(); ++i) {
            if (trig_index.empty()) break;
            const double dt = dT(theta, i);
            if (dt != 0.0) v += pq * dt * F[i];
        }
        return v;
    }
};

}  // namespace

ResidualReport check_divergence(const SMap& S, const Eigen::VectorXd& y,
                                const DivergenceCheckOptions& opts) {
    if (opts.mc_samples < 1000)
        throw std::invalid_argument("check_divergence: need at least 1000 samples");
    const int n = S.n();
    const int d = skew_dim(n);
    Rng frng(derive_seed(opts.seed, 505));
    std::vector<TestFunction> funcs;
    // Function 0 is constant: both sides of the integration by parts are
    // exactly zero, exercising the se = 0 branch.
    funcs.push_back(TestFunction::random(frng, n, /*constant=*/true));
    for (int f = 1; f < opts.test_functions; ++f)
        funcs.push_back(TestFunction::random(frng, n));

    const Eigen::MatrixXd Sy = S.at(y);

    // Monte Carlo integration by parts: mean of df(U(y)) over Haar x flat
    // torus must vanish within sampling error.
    Rng rng(derive_seed(opts.seed, 506));
    const int N = opts.mc_samples;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(opts.test_functions);
    Eigen::VectorXd sumsq = Eigen::VectorXd::Zero(opts.test_functions);
    for (int s = 0; s < N; ++s) {
        const Eigen::MatrixXd Q = haar_sample(rng, n).matrix();
        const Eigen::VectorXd theta = rng.uniform_vector(n, 0.0, 1.0);
        const Eigen::MatrixXd W = Sy * Q;
        const Eigen::VectorXd F = Q.transpose() * y;
        for (int f = 0; f < opts.test_functions; ++f) {
            const double v = funcs[f].directional(Q, theta, W, F);
            sum[f] += v;
            sumsq[f] += v * v;
        }
    }
    double worst_ratio = 0.0;
    for (int f = 0; f < opts.test_functions; ++f) {
        const double mean = sum[f] / N;
        const double var = std::max(0.0, sumsq[f] / N - mean * mean);
        const double se = std::sqrt(var / N);
        const double ratio = std::abs(mean) / (4.0 * se + 1e-300);
        if (se == 0.0) {
            worst_ratio = std::max(worst_ratio, mean == 0.0 ? 0.0 : 1e300);
        } else {
            worst_ratio = std::max(worst_ratio, ratio);
        }
    }

    // Exact check 1: the chart flow map of exp(t S(y)) preserves Haar
    // volume; density-weighted finite-difference Jacobian determinant.
    Rng jrng(derive_seed(opts.seed, 507));
    double worst_jac = 0.0;
    const double t = opts.flow_time;
    const Eigen::MatrixXd Ft = (t * Sy).exp();
    for (int p = 0; p < opts.jacobian_points; ++p) {
        const Eigen::VectorXd a0 = jrng.ball_vector(d, 0.2);
        auto flow_coords = [&](const Eigen::VectorXd& a) -> Eigen::VectorXd {
            const Eigen::MatrixXd Z = Ft * SkewMat::from_coords(n, a).dense().exp();
            const Eigen::MatrixXd Lg = Z.log();
            if ((Lg + Lg.transpose()).cwiseAbs().maxCoeff() > 1e-8)
                throw std::runtime_error("check_divergence: flow left the group");
            Eigen::VectorXd out(d);
            for (int k = 0; k < d; ++k) {
                const auto [i, j] = skew_index_pair(n, k);
                out[k] = 0.5 * (Lg(i, j) - Lg(j, i));
            }
            return out;
        };
        double weighted = 0.0;
        try {
            const double h = opts.fd_step;
            Eigen::MatrixXd J(d, d);
            for (int k = 0; k < d; ++k) {
                Eigen::VectorXd ap = a0, am = a0;
                ap[k] += h;
                am[k] -= h;
                J.col(k) = (flow_coords(ap) - flow_coords(am)) / (2.0 * h);
            }
            const Eigen::VectorXd a1 = flow_coords(a0);
            const double rho0 = exp_chart_density(n, SkewMat::from_coords(n, a0).dense());
            const double rho1 = exp_chart_density(n, SkewMat::from_coords(n, a1).dense());
            weighted = J.determinant() * rho1 / rho0;
        } catch (const std::exception&) {
            weighted = std::numeric_limits<double>::infinity();
        }
        worst_jac = std::max(worst_jac, std::abs(weighted - 1.0));
    }

    // Exact check 2: the torus components F(y,e_i) do not depend on the
    // angles (F is a function of Q alone).
    Rng trng(derive_seed(opts.seed, 508));
    double theta_dep = 0.0;
    {
        const ChartPoint x1 = sample_chart_point(trng, n, 3, 0.5);
        ChartPoint x2 = x1;
        x2.theta = trng.uniform_vector(n, 0.0, 1.0);
        const Eigen::VectorXd f1 = level3_fields(S, y, x1).F;
        const Eigen::VectorXd f2 = level3_fields(S, y, x2).F;
        theta_dep = (f1 - f2).cwiseAbs().maxCoeff();
    }

    return make_report(
        "divergence", N, opts.seed,
        {{"mc_integration_by_parts", worst_ratio, 1.0, worst_ratio <= 1.0},
         {"flow_jacobian", worst_jac, opts.jacobian_tol, worst_jac < opts.jacobian_tol},
         {"torus_theta_independence", theta_dep, 0.0, theta_dep == 0.0}});
}

ResidualReport check_full_euler(const SMap& S, double C, const Eigen::VectorXd& y,
                                const FullEulerCheckOptions& opts) {
    if (!(opts.fd_step > 1e-12))
        throw std::invalid_argument("check_full_euler: FD step underflow");
    const int n = S.n();
    const int d = skew_dim(n);
    const int m1 = d + n + 1;  // level-1 dimension
    Rng rng(derive_seed(opts.seed, 606));
    const double h = opts.fd_step;
    const double norm = 1.0 + y.squaredNorm();

    double worst_euler = 0.0;
    double worst_dgub = 0.0;
    for (int s = 0; s < opts.samples; ++s) {
        const ChartPoint x0 = sample_chart_point(rng, n, 1, opts.a_radius);
        Eigen::VectorXd c0(m1);
        c0.head(d) = x0.a;
        c0.segment(d, n) = x0.theta;
        c0[m1 - 1] = x0.s;

        auto fields_at = [&](const Eigen::VectorXd& c) {
            return level1_fields(
                S, y, ChartPoint::level1(x0.chart, c.head(d), c.segment(d, n), c[m1 - 1]), C);
        };

        const FieldEval fe = fields_at(c0);
        const Eigen::MatrixXd ginv = fe.g.ldlt().solve(Eigen::MatrixXd::Identity(m1, m1));
        const Eigen::VectorXd u0 = fe.U;
        const Eigen::VectorXd v0 = fe.V;

        // One pair of evaluations per coordinate supplies all the central
        // differences: metric, velocity, covelocity, pressure, and energy.
        std::vector<Eigen::MatrixXd> dg(m1);
        Eigen::MatrixXd du(m1, m1), dVjac(m1, m1);
        Eigen::VectorXd dP(m1), dE(m1);
        for (int j = 0; j < m1; ++j) {
            Eigen::VectorXd cp = c0, cm = c0;
            cp[j] += h;
            cm[j] -= h;
            const FieldEval fp = fields_at(cp);
            const FieldEval fm = fields_at(cm);
            dg[j] = (fp.g - fm.g) / (2.0 * h);
            du.col(j) = (fp.U - fm.U) / (2.0 * h);
            dVjac.col(j) = (fp.V - fm.V) / (2.0 * h);
            dP[j] = (fp.P - fm.P) / (2.0 * h);
            dE[j] = (fp.U.dot(fp.g * fp.U) - fm.U.dot(fm.g * fm.U)) / (2.0 * h);
        }

        // Christoffel symbols Gamma^i_{jk}.
        std::vector<Eigen::MatrixXd> gamma(m1, Eigen::MatrixXd::Zero(m1, m1));
        for (int i = 0; i < m1; ++i)
            for (int j = 0; j < m1; ++j)
                for (int k = j; k < m1; ++k) {
                    double v = 0.0;
                    for (int l = 0; l < m1; ++l)
                        v += ginv(i, l) * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
                    gamma[i](j, k) = gamma[i](k, j) = 0.5 * v;
                }

        // nabla_U U and grad P = g^{-1} dP.
        Eigen::VectorXd conv = du * u0;
        for (int i = 0; i < m1; ++i) conv[i] += u0.dot(gamma[i] * u0);
        const Eigen::VectorXd gradP = ginv * dP;

        const Eigen::VectorXd uB = velocity_field(S, S.at(y) * y, x0);
        const double resid = (uB + conv + gradP).cwiseAbs().maxCoeff() / norm;
        worst_euler = std::max(worst_euler, resid);

        // Identity (dgub): U ~: dV = nabla_U V - 1/2 d g(U,U), where
        // (U ~: dV)_k = U^j (d_j V_k - d_k V_j) and
        // (nabla_U V)_k = U^j d_j V_k - Gamma^l_{jk} U^j V_l.
        Eigen::VectorXd lhs(m1), covar(m1);
        for (int k = 0; k < m1; ++k) {
            double acc = 0.0;
            for (int j = 0; j < m1; ++j) acc += u0[j] * (dVjac(k, j) - dVjac(j, k));
            lhs[k] = acc;
            double cv = u0.dot(dVjac.row(k).transpose());
            for (int l = 0; l < m1; ++l) cv -= v0[l] * u0.dot(gamma[l].col(k));
            covar[k] = cv;
        }
        const Eigen::VectorXd rhs = covar - 0.5 * dE;
        worst_dgub = std::max(worst_dgub, (lhs - rhs).cwiseAbs().maxCoeff() / norm);
    }

    return make_report("full_euler", opts.samples, opts.seed,
                       {{"velocity_form_euler", worst_euler, opts.tol, worst_euler < opts.tol},
                        {"dgub_identity", worst_dgub, opts.tol, worst_dgub < opts.tol}});
}

L2GramResult l2_gram(const SMap& S, double C, int mc_samples, std::uint64_t seed) {
    if (mc_samples < 1000) throw std::invalid_argument("l2_gram: need at least 1000 samples");
    const int n = S.n();
    Rng rng(derive_seed(seed, 707));
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(n, n);
    for (int s = 0; s < mc_samples; ++s) {
        const ChartPoint x = sample_chart_point(rng, n, 1, 0.5);
        const FieldEval met = level1_fields(S, Eigen::VectorXd::Zero(n), x, C);
        // Columns: chart coordinates of U(e_j) at x.
        Eigen::MatrixXd frame(met.g.rows(), n);
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd ej = Eigen::VectorXd::Zero(n);
            ej[j] = 1.0;
            frame.col(j) = velocity_field(S, ej, x);
        }
        const Eigen::MatrixXd val = frame.transpose() * met.g * frame;
        sum += val;
        sumsq += val.cwiseProduct(val);
    }
    L2GramResult res;
    res.samples = mc_samples;
    res.seed = seed;
    res.gram = sum / mc_samples;
    res.gram = 0.5 * (res.gram + res.gram.transpose());
    Eigen::MatrixXd var = (sumsq / mc_samples - res.gram.cwiseProduct(res.gram)).cwiseMax(0.0);
    res.std_error = (var / mc_samples).cwiseSqrt();
    return res;
}

std::vector<ResidualReport> run_verification_suite(const SymBilinearMap& B_euclidean,
                                                   const SMap& S,
                                                   const VerifySuiteOptions& opts) {
    const int n = S.n();
    std::vector<ResidualReport> reports;

    // Shared constant C from sampled Schur bounds.
    Rng crng(derive_seed(opts.seed, 808));
    std::vector<ChartPoint> csamples;
    for (int i = 0; i < opts.c_samples; ++i) csamples.push_back(sample_chart_point(crng, n, 3, 0.7));
    const double C = choose_C(S, csamples);

    Rng yrng(derive_seed(opts.seed, 809));
    const Eigen::VectorXd y_div = yrng.normal_vector(n);
    const Eigen::VectorXd y_euler = yrng.normal_vector(n);

    reports.push_back(check_transport(S, {opts.seed, opts.samples_pointwise, 1e-11, 1e-6, 1e-5}));
    {
        CovelocityCheckOptions co;
        co.seed = opts.seed;
        co.samples = opts.samples_covelocity;
        reports.push_back(check_covelocity_euler(S, co));
    }
    reports.push_back(check_metric_compat(S, C, {opts.seed, opts.samples_pointwise, 1e-10, 0.7}));
    reports.push_back(
        check_unit_determinant(S, C, {opts.seed, opts.samples_pointwise, 1e-9, 0.7, 0.0}));
    {
        DivergenceCheckOptions dv;
        dv.seed = opts.seed;
        dv.mc_samples = opts.mc_divergence;
        dv.test_functions = opts.test_functions;
        reports.push_back(check_divergence(S, y_div, dv));
    }
    {
        FullEulerCheckOptions fe;
        fe.seed = opts.seed;
        fe.samples = opts.samples_full_euler;
        reports.push_back(check_full_euler(S, C, y_euler, fe));
    }
    {
        const L2GramResult lg = l2_gram(S, C, opts.mc_gram, opts.seed);
        const ConstraintSystem sys = constraint_system(B_euclidean);
        const double se_max = lg.std_error.maxCoeff();
        const double tol = 5.0 * se_max + 1e-10;
        const double resid = sys.A.size() == 0
                                 ? 0.0
                                 : (sys.A * sym_to_vech(lg.gram)).cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lg.gram);
        const double min_eig = es.eigenvalues().minCoeff();
        reports.push_back(make_report(
            "l2_gram_roundtrip", lg.samples, opts.seed,
            {{"constraint_residual", resid, tol, resid <= tol},
             {"gram_min_eigenvalue", -min_eig, -0.5, min_eig > 0.5}}));
    }
    return reports;
}

}  // namespace odeflow
