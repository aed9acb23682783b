/// @file quadode.hpp
/// @brief Symmetric bilinear maps B : R^n x R^n -> R^n, inner products, and
/// the cancellation residual |<B(y,y),y>_G| used throughout the pipeline.
///
/// A quadratic ODE dy/dt = B(y,y) conserves the energy <y,y>_G exactly when
/// the trilinear form <B(y,y),y>_G vanishes identically. Since that is a
/// polynomial identity, it is checked numerically at seeded random points.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "odeflow/rng.hpp"

namespace odeflow {

/// Dense symmetric bilinear map stored as n component matrices:
/// B(y,z)_k = y^T slice(k) z, with each slice symmetric.
class SymBilinearMap {
public:
    SymBilinearMap() = default;

    /// Builds from raw component matrices, symmetrizing each slice:
    /// b[k][i][j] <- (raw[k][i][j] + raw[k][j][i]) / 2. Values on the
    /// diagonal B(y,y) are unchanged by this. Throws std::invalid_argument
    /// on ragged dimensions or non-finite entries.
    static SymBilinearMap symmetrize(const std::vector<Eigen::MatrixXd>& raw);

    /// Zero map on R^n.
    static SymBilinearMap zero(int n);

    int n() const { return n_; }
    double coeff(int k, int i, int j) const { return slices_[k](i, j); }
    const Eigen::MatrixXd& slice(int k) const { return slices_[k]; }

    /// B(y,z); bilinear and symmetric in (y,z).
    Eigen::VectorXd eval(const Eigen::VectorXd& y, const Eigen::VectorXd& z) const;

    /// Largest |b[k][i][j]|; scale reference for tolerances.
    double max_abs_coeff() const;

private:
    int n_ = 0;
    std::vector<Eigen::MatrixXd> slices_;
};

/// Symmetric bilinear form on R^n; positive definite when used as an
/// energy certificate.
struct InnerProduct {
    Eigen::MatrixXd gram;

    static InnerProduct identity(int n);
    static InnerProduct diagonal(const Eigen::VectorXd& d);

    int n() const { return static_cast<int>(gram.rows()); }
    double pair(const Eigen::VectorXd& y, const Eigen::VectorXd& z) const {
        return y.dot(gram * z);
    }
    double min_eigenvalue() const;
    bool is_positive_definite(double margin = 0.0) const;
    /// Lower-triangular L with gram = L L^T; throws std::runtime_error if
    /// the form is not positive definite.
    Eigen::MatrixXd cholesky() const;
};

/// <B(y1,y2), y3>_G = (B(y1,y2))^T gram y3.
double trilinear(const SymBilinearMap& B, const InnerProduct& G,
                 const Eigen::VectorXd& y1, const Eigen::VectorXd& y2,
                 const Eigen::VectorXd& y3);

struct ResidualOptions {
    std::uint64_t seed = 0;
    int samples = 100;
};

/// max over seeded random y of |<B(y,y),y>_G| / (1 + |y|^3). Zero (to
/// rounding) iff the cancellation identity holds: the residual is a cubic
/// polynomial identity, so vanishing at generic points decides it.
double cancellation_residual(const SymBilinearMap& B, const InnerProduct& G,
                             const ResidualOptions& opt = {});

}  // namespace odeflow
