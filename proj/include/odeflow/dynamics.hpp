/// @file dynamics.hpp
/// @brief Fixed-step time integration of the quadratic ODE dy/dt = B(y,y),
/// closed-form reference solutions for the rotor and pump gates, and
/// particle transport on SO(n) along the embedded flow.

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "odeflow/embedding.hpp"
#include "odeflow/gates.hpp"
#include "odeflow/quadode.hpp"

namespace odeflow {

enum class IntegrationStatus { ok, overflow, step_failure };

struct Trajectory {
    std::vector<double> times;                 // strictly increasing
    std::vector<Eigen::VectorXd> states;
    std::vector<double> energies;              // <y,y>_G per step
    IntegrationStatus status = IntegrationStatus::ok;
    std::string message;

    bool ok() const { return status == IntegrationStatus::ok; }
    std::size_t size() const { return times.size(); }
};

/// Classical fixed-step RK4; global error O(step^4). On non-finite state
/// the partial trajectory is returned with status overflow. Energies use G
/// when given, the Euclidean form otherwise.
Trajectory integrate_rk4(const SymBilinearMap& B, const Eigen::VectorXd& y0, double t0,
                         double t1, double step, const InnerProduct* G = nullptr);

/// Implicit midpoint with fixed-point iteration (at most 100 sweeps per
/// step); preserves every quadratic invariant y^T G y of the flow exactly,
/// up to the fixed-point tolerance. Non-convergence returns the partial
/// trajectory with status step_failure suggesting a smaller step.
Trajectory integrate_midpoint(const SymBilinearMap& B, const InnerProduct& G,
                              const Eigen::VectorXd& y0, double t0, double t1, double step,
                              double fp_tol = 1e-14);

struct ClosedFormParams {
    double A = 1.0;
    double omega = 1.0;
    double theta = 0.0;
    double alpha = 1.0;
};

/// Explicit solutions:
///   rotor: (A sin(a w t + th), A cos(a w t + th), w)
///   pump:  (A sech(A a t), A tanh(A a t))
/// Throws std::invalid_argument for other gate ids.
Eigen::VectorXd closed_form(GateId id, const ClosedFormParams& p, double t);

/// Integrates dQ/dt = S(y(t)) Q with exponential midpoint steps
/// Q_{k+1} = exp(h S(y(t_k + h/2))) Q_k; y at half-steps comes from cubic
/// interpolation of the stored trajectory. The trajectory must be at least
/// as fine as the requested step.
std::vector<OrthMat> particle_flow(const SMap& S, const Trajectory& y_traj, const OrthMat& Q0,
                                   double step);

/// CSV export: header t,y1..yn,energy; 17 significant digits. A failed
/// trajectory gains a trailing comment line with its status.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// CSV export of a particle flow: header t,q_1_1..q_n_n (row-major).
void write_particle_csv(std::ostream& os, const std::vector<double>& times,
                        const std::vector<OrthMat>& flow);

}  // namespace odeflow
