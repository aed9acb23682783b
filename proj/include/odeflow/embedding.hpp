/// @file embedding.hpp
/// @brief The embedding tower: from a conservative bilinear map B to
/// velocity/covelocity/pressure/metric/volume data on SO(n) x (R/Z)^{n+1}.
///
/// Levels, top down:
///   level 4: M = SO(n), Haar volume; U(y)Q = S(y)Q, F(y,z)(Q) = <y, Qz>.
///   level 3: M x (R/Z)^n; U gains torus components F(y,e_i), the
///            covelocity is V(y) = sum_i F(y,e_i) dtheta_i, and the
///            modified pressure is P'(y,y) = 1/2 sum_i F(y,e_i)^2.
///   level 2: same manifold, plus the metric g built from the Gram pairing
///            on the U-frame and C times an auxiliary metric h on the
///            frame's h-orthogonal complement.
///   level 1: extra circle factor; g gains a (det_vol g)^{-1} ds^2 block so
///            that the metric volume matches the reference volume exactly.
///
/// All evaluation is pointwise in exponential charts; coordinates are
/// (a_1..a_d, theta_1..theta_n[, s]) with d = n(n-1)/2.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "odeflow/liegroup.hpp"
#include "odeflow/quadode.hpp"

namespace odeflow {

/// Linear map y -> S(y) into skew matrices with S(y) y = B(y,y), built by
/// the duality formula
///   <S(y1) y2, y3> = (2/3) (<B(y1,y2),y3> - <B(y1,y3),y2>).
class SMap {
public:
    /// Builds from B; requires B to conserve the Euclidean inner product
    /// (cancellation residual below residual_tol), otherwise throws
    /// std::invalid_argument telling the caller to euclideanize first.
    static SMap build(const SymBilinearMap& B, double residual_tol = 1e-10);

    /// Wraps explicit generator matrices. With require_skew the generators
    /// are validated; without, intentionally corrupted generators are
    /// allowed (negative controls in the verification suite).
    static SMap from_dense(std::vector<Eigen::MatrixXd> generators, bool require_skew = true);

    int n() const { return n_; }
    const Eigen::MatrixXd& generator(int j) const { return generators_[j]; }
    const std::vector<Eigen::MatrixXd>& generators() const { return generators_; }

    /// S(y) = sum_j y_j S(e_j).
    Eigen::MatrixXd at(const Eigen::VectorXd& y) const;

private:
    int n_ = 0;
    std::vector<Eigen::MatrixXd> generators_;
};

/// A point of the (leveled) manifold in an exponential chart.
/// level 4: a only; levels 3 and 2: (a, theta); level 1: (a, theta, s).
struct ChartPoint {
    Chart chart;
    Eigen::VectorXd a;      // so(n) chart coordinates, |a| <= chart.radius
    Eigen::VectorXd theta;  // torus angles in [0,1)
    double s = 0.0;         // extra circle angle, level 1 only
    int level = 3;

    static ChartPoint level4(Chart chart, Eigen::VectorXd a);
    static ChartPoint level3(Chart chart, Eigen::VectorXd a, Eigen::VectorXd theta);
    static ChartPoint level1(Chart chart, Eigen::VectorXd a, Eigen::VectorXd theta, double s);

    /// Drops the s coordinate (the level-1 -> level-3 projection).
    ChartPoint project_to_level3() const;
};

/// Seeded random chart point: Haar base, |a| <= a_radius, uniform angles.
ChartPoint sample_chart_point(Rng& rng, int n, int level, double a_radius = 0.5);

struct Level4Eval {
    Eigen::MatrixXd U4;       // tangent matrix S(y) Q
    double F = 0.0;           // <y, Q z>
    double dF_along_U = 0.0;  // <y, S(y) Q z>
};

/// Level-4 fields at Q; the transport identity F(B(y,y),z) + dF = 0 holds
/// analytically by skew-adjointness of S(y).
Level4Eval level4_fields(const SMap& S, const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                         const OrthMat& Q);

/// Field values at one chart point. Vectors are chart-frame coordinates;
/// dimensions depend on the level (d, d+n, or d+n+1 entries).
struct FieldEval {
    int level = 3;
    Eigen::VectorXd U;        // velocity, tangent coordinates
    Eigen::VectorXd V;        // covelocity, cotangent coordinates
    Eigen::VectorXd F;        // F(y, e_i), i = 1..n
    double Pprime = 0.0;      // modified pressure P'(y,y)
    double P = 0.0;           // full pressure (level 1)
    Eigen::MatrixXd g;        // metric in the chart frame (levels 2 and 1)
    double vol_density = 1.0; // reference volume density in the chart
    double det_vol = 0.0;     // det of g w.r.t. the reference volume (levels 2,1)
};

FieldEval level3_fields(const SMap& S, const Eigen::VectorXd& y, const ChartPoint& x);

/// Metric of the level-2 construction in the chart frame. Assembled through
/// h-orthogonal projectors, which is basis-free and smooth in the chart
/// coordinates (required by finite-difference Christoffel checks).
FieldEval level2_metric(const SMap& S, const ChartPoint& x, double C);

/// Reference assembly of the same metric: explicit h-orthonormal complement
/// basis, blockwise [Gram | cross; cross^T | C I], transformed back to the
/// chart frame. Agrees with level2_metric up to roundoff; kept as a
/// cross-check because the two routes share no linear algebra.
Eigen::MatrixXd level2_metric_blockwise(const SMap& S, const ChartPoint& x, double C);

/// Minimal C making the complement Schur block positive with margin, from
/// the largest singular value of the covelocity/complement pairing at each
/// sample; returns 2x the max over samples, floored at 1.
double choose_C(const SMap& S, const std::vector<ChartPoint>& sample_points);

FieldEval level1_fields(const SMap& S, const Eigen::VectorXd& y, const ChartPoint& x, double C);

/// Embedded velocity at x in chart coordinates, at the point's level.
Eigen::VectorXd velocity_field(const SMap& S, const Eigen::VectorXd& y, const ChartPoint& x);

}  // namespace odeflow
