/// @file verify.hpp
/// @brief Numerical verification of every equation in the embedding tower,
/// plus the L2 Gram round trip recovering a conservation certificate from
/// the constructed flow.
///
/// Two tolerance tiers: analytic identities sit at 1e-10..1e-12 and catch
/// construction bugs; finite-difference cross-checks sit at 1e-3..1e-6 and
/// are dominated by discretization error. Residuals are normalized by the
/// natural homogeneity in |y| so tolerances are scale-free. Every check is
/// deterministic given (seed, sample count), and the deliberately broken
/// variants (negative controls) are part of the shipped test suite.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "odeflow/certificate.hpp"
#include "odeflow/embedding.hpp"
#include "odeflow/quadode.hpp"

namespace odeflow {

struct ResidualPart {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ResidualReport {
    std::string check;
    int samples = 0;
    std::uint64_t seed = 0;
    double max_residual = 0.0;  // primary part
    double tolerance = 0.0;     // primary part
    bool pass = false;          // all parts
    std::vector<ResidualPart> parts;
};

ResidualReport make_report(std::string check, int samples, std::uint64_t seed,
                           std::vector<ResidualPart> parts);

struct TransportCheckOptions {
    std::uint64_t seed = 0;
    int samples = 100;
    double analytic_tol = 1e-11;
    double fd_tol = 1e-6;
    double fd_step = 1e-5;
};

/// Transport equation F(B(y,y),z) + dF(y,z)(U(y)) = 0 on SO(n):
/// analytic residual <S(y)y, Qz> + <y, S(y)Qz> at seeded (y,z,Q), plus a
/// central-difference check of dF along the flow Q(t) = exp(t S(y)) Q.
ResidualReport check_transport(const SMap& S, const TransportCheckOptions& opts = {});

struct CovelocityCheckOptions {
    std::uint64_t seed = 0;
    int samples = 200;
    double tol = 1e-10;
    double a_radius = 0.7;
    Eigen::VectorXd shift_first_term;  // negative-control hook: B(y,y) += shift
};

/// Covelocity Euler equation at level 3:
/// V(B(y,y)) + U(y) ~: dV(y) + dP'(y,y) = 0, assembled analytically in the
/// chart. Computed twice: with the pressure differential evaluated from the
/// chart derivatives of F, and with the simplification dP' = 0 (P'(y,y) is
/// the constant |y|^2/2 here); both residuals are reported.
ResidualReport check_covelocity_euler(const SMap& S, const CovelocityCheckOptions& opts = {});

struct MetricCheckOptions {
    std::uint64_t seed = 0;
    int samples = 100;
    double tol = 1e-10;
    double a_radius = 0.7;
};

/// Metric compatibility g U(y) = V(y) in chart coordinates, and positive
/// definiteness of g, at seeded points.
ResidualReport check_metric_compat(const SMap& S, double C, const MetricCheckOptions& opts = {});

struct DeterminantCheckOptions {
    std::uint64_t seed = 0;
    int samples = 100;
    double tol = 1e-9;
    double a_radius = 0.7;
    double ss_perturb = 0.0;  // negative-control hook: scales the (s,s) entry
};

/// Unit determinant of the level-1 metric with respect to the extended
/// reference volume: |det - 1| at seeded points.
ResidualReport check_unit_determinant(const SMap& S, double C,
                                      const DeterminantCheckOptions& opts = {});

struct DivergenceCheckOptions {
    std::uint64_t seed = 0;
    int mc_samples = 10000;
    int test_functions = 20;
    double jacobian_tol = 1e-5;
    int jacobian_points = 5;
    double flow_time = 1e-2;
    double fd_step = 1e-5;
};

/// Divergence-freeness of U(y) via Monte Carlo integration by parts:
/// for each test function (quadratic polynomial in the matrix entries times
/// a trigonometric monomial in the angles), the estimate of
/// integral df(U(y)) must sit within 4 standard errors of 0. Also checks
/// that the chart flow map of exp(t S(y)) preserves Haar volume (density-
/// weighted finite-difference Jacobian determinant) and that the torus
/// components are independent of the angles. Throws std::invalid_argument
/// below 1000 samples.
ResidualReport check_divergence(const SMap& S, const Eigen::VectorXd& y,
                                const DivergenceCheckOptions& opts = {});

struct FullEulerCheckOptions {
    std::uint64_t seed = 0;
    int samples = 20;
    double tol = 1e-3;
    double fd_step = 1e-4;
    double a_radius = 0.5;
};

/// Full velocity-form Euler equation at level 1:
/// U(B(y,y)) + nabla_{U(y)} U(y) + grad_g P(y,y) = 0 with Christoffel
/// symbols from central differences of the chart metric, plus the 1-form
/// identity U ~: dV = nabla_U V - 1/2 d g(U,U) at the same tolerance.
ResidualReport check_full_euler(const SMap& S, double C, const Eigen::VectorXd& y,
                                const FullEulerCheckOptions& opts = {});

struct L2GramResult {
    Eigen::MatrixXd gram;        // Monte Carlo estimate of <U(e_i),U(e_j)>_{L2}
    Eigen::MatrixXd std_error;   // entrywise standard error of the estimate
    int samples = 0;
    std::uint64_t seed = 0;
};

/// L2 Gram matrix of the embedded velocity family over probability Haar x
/// flat torus measure (the convention is recorded here: total volume 1).
/// For this construction the pointwise integrand is constant, so the
/// estimate is exact up to roundoff and the standard error is at noise
/// level. Throws std::invalid_argument below 1000 samples.
L2GramResult l2_gram(const SMap& S, double C, int mc_samples, std::uint64_t seed = 0);

struct VerifySuiteOptions {
    std::uint64_t seed = 0;
    int samples_pointwise = 100;
    int samples_covelocity = 200;
    int samples_full_euler = 8;
    int mc_divergence = 10000;
    int test_functions = 20;
    int mc_gram = 2000;
    int c_samples = 16;
};

/// Runs the full check battery for an already-euclideanized system:
/// transport, covelocity Euler, metric compatibility, unit determinant,
/// divergence, full Euler, and the L2 Gram round trip against B's
/// constraint system. Returns one report per check (7 total).
std::vector<ResidualReport> run_verification_suite(const SymBilinearMap& B_euclidean,
                                                   const SMap& S,
                                                   const VerifySuiteOptions& opts = {});

}  // namespace odeflow
