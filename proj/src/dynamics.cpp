#include "odeflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace odeflow {

namespace {

constexpr double kStateCap = 1e12;

double energy_of(const Eigen::VectorXd& y, const InnerProduct* G) {
    return G ? G->pair(y, y) : y.squaredNorm();
}

int step_count(double t0, double t1, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("integrate: step must be positive");
    if (!(t1 > t0)) throw std::invalid_argument("integrate: empty time span");
    return std::max(1, static_cast<int>(std::llround((t1 - t0) / step)));
}

}  // namespace

Trajectory integrate_rk4(const SymBilinearMap& B, const Eigen::VectorXd& y0, double t0,
                         double t1, double step, const InnerProduct* G) {
    if (!y0.allFinite()) throw std::invalid_argument("integrate_rk4: non-finite initial state");
    const int N = step_count(t0, t1, step);
    const double h = (t1 - t0) / N;

    Trajectory traj;
    traj.times.reserve(N + 1);
    traj.states.reserve(N + 1);
    traj.energies.reserve(N + 1);
    Eigen::VectorXd y = y0;
    traj.times.push_back(t0);
    traj.states.push_back(y);
    traj.energies.push_back(energy_of(y, G));

    auto rhs = [&](const Eigen::VectorXd& v) { return B.eval(v, v); };
    for (int k = 0; k < N; ++k) {
        const Eigen::VectorXd k1 = rhs(y);
        const Eigen::VectorXd k2 = rhs(y + 0.5 * h * k1);
        const Eigen::VectorXd k3 = rhs(y + 0.5 * h * k2);
        const Eigen::VectorXd k4 = rhs(y + h * k3);
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!y.allFinite() || y.norm() > kStateCap) {
            traj.status = IntegrationStatus::overflow;
            traj.message = "state overflow at t = " + std::to_string(t0 + (k + 1) * h);
            return traj;
        }
        traj.times.push_back(t0 + (k + 1) * h);
        traj.states.push_back(y);
        traj.energies.push_back(energy_of(y, G));
    }
    return traj;
}

Trajectory integrate_midpoint(const SymBilinearMap& B, const InnerProduct& G,
                              const Eigen::VectorXd& y0, double t0, double t1, double step,
                              double fp_tol) {
    if (!(fp_tol > 0.0))
        throw std::invalid_argument("integrate_midpoint: fp_tol must be positive");
    if (!y0.allFinite())
        throw std::invalid_argument("integrate_midpoint: non-finite initial state");
    const int N = step_count(t0, t1, step);
    const double h = (t1 - t0) / N;

    Trajectory traj;
    Eigen::VectorXd y = y0;
    traj.times.push_back(t0);
    traj.states.push_back(y);
    traj.energies.push_back(G.pair(y, y));

    for (int k = 0; k < N; ++k) {
        // Solve z = y + h B(m,m), m = (y+z)/2, by fixed-point iteration from
        // the explicit Euler predictor; after meeting the tolerance two
        // polishing sweeps push the residual to the roundoff floor.
        Eigen::VectorXd z = y + h * B.eval(y, y);
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            const Eigen::VectorXd m = 0.5 * (y + z);
            const Eigen::VectorXd znew = y + h * B.eval(m, m);
            if (!znew.allFinite() || znew.cwiseAbs().maxCoeff() > kStateCap) break;
            const double delta = (znew - z).norm();
            z = znew;
            if (delta <= fp_tol * (1.0 + z.norm())) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            traj.status = IntegrationStatus::step_failure;
            traj.message = "fixed-point iteration stalled at t = " +
                           std::to_string(t0 + k * h) + "; reduce the step";
            return traj;
        }
        for (int polish = 0; polish < 2; ++polish) {
            const Eigen::VectorXd m = 0.5 * (y + z);
            z = y + h * B.eval(m, m);
        }
        y = z;
        if (!y.allFinite() || y.norm() > kStateCap) {
            traj.status = IntegrationStatus::overflow;
            traj.message = "state overflow at t = " + std::to_string(t0 + (k + 1) * h);
            return traj;
        }
        traj.times.push_back(t0 + (k + 1) * h);
        traj.states.push_back(y);
        traj.energies.push_back(G.pair(y, y));
    }
    return traj;
}

Eigen::VectorXd closed_form(GateId id, const ClosedFormParams& p, double t) {
    switch (id) {
        case GateId::rotor: {
            Eigen::VectorXd y(3);
            const double arg = p.alpha * p.omega * t + p.theta;
            y << p.A * std::sin(arg), p.A * std::cos(arg), p.omega;
            return y;
        }
        case GateId::pump: {
            Eigen::VectorXd y(2);
            const double arg = p.A * p.alpha * t;
            y << p.A / std::cosh(arg), p.A * std::tanh(arg);
            return y;
        }
        default:
            throw std::invalid_argument("closed_form: no closed form for gate " + gate_name(id));
    }
}

namespace {

// Cubic Lagrange interpolation of a uniformly sampled trajectory.
Eigen::VectorXd interpolate_state(const Trajectory& traj, double t) {
    const std::size_t N = traj.times.size();
    const double t0 = traj.times.front();
    const double dt = traj.times[1] - traj.times[0];
    const double u = (t - t0) / dt;
    std::ptrdiff_t i1 = static_cast<std::ptrdiff_t>(std::floor(u));
    i1 = std::clamp<std::ptrdiff_t>(i1, 1, static_cast<std::ptrdiff_t>(N) - 3);
    const std::ptrdiff_t i0 = i1 - 1;
    const double x = u - static_cast<double>(i1);  // in [0,1] away from the ends
    // Nodes at x = -1, 0, 1, 2.
    const double w0 = -x * (x - 1.0) * (x - 2.0) / 6.0;
    const double w1 = (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0;
    const double w2 = -(x + 1.0) * x * (x - 2.0) / 2.0;
    const double w3 = (x + 1.0) * x * (x - 1.0) / 6.0;
    return w0 * traj.states[i0] + w1 * traj.states[i0 + 1] + w2 * traj.states[i0 + 2] +
           w3 * traj.states[i0 + 3];
}

}  // namespace

std::vector<OrthMat> particle_flow(const SMap& S, const Trajectory& y_traj, const OrthMat& Q0,
                                   double step) {
    if (y_traj.times.size() < 4)
        throw std::invalid_argument("particle_flow: trajectory too short");
    const double traj_step = y_traj.times[1] - y_traj.times[0];
    if (traj_step > step * (1.0 + 1e-12))
        throw std::invalid_argument("particle_flow: trajectory too coarse for requested step");
    const double t0 = y_traj.times.front();
    const double t1 = y_traj.times.back();
    const int N = step_count(t0, t1, step);
    const double h = (t1 - t0) / N;
    const int n = Q0.n();

    std::vector<OrthMat> flow;
    flow.reserve(N + 1);
    flow.push_back(Q0);
    Eigen::MatrixXd Q = Q0.matrix();
    for (int k = 0; k < N; ++k) {
        const double tm = t0 + (k + 0.5) * h;
        const Eigen::VectorXd ym = interpolate_state(y_traj, tm);
        const Eigen::MatrixXd Sh = h * S.at(ym);
        Q = expm(SkewMat::from_matrix(Sh, 1e-9)).matrix() * Q;
        const double defect =
            (Q.transpose() * Q - Eigen::MatrixXd::Identity(n, n)).norm();
        if (defect >= 1e-12) {
            // Polar reprojection absorbs the accumulated drift.
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(Q, Eigen::ComputeFullU | Eigen::ComputeFullV);
            Q = svd.matrixU() * svd.matrixV().transpose();
        }
        flow.push_back(OrthMat::from_matrix(Q));
    }
    return flow;
}

namespace {
void print_value(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}
}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states.front().size());
    os << "t";
    for (int i = 1; i <= n; ++i) os << ",y" << i;
    os << ",energy\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        print_value(os, traj.times[k]);
        for (int i = 0; i < n; ++i) {
            os << ',';
            print_value(os, traj.states[k][i]);
        }
        os << ',';
        print_value(os, traj.energies[k]);
        os << '\n';
    }
    if (traj.status == IntegrationStatus::overflow)
        os << "# status: overflow: " << traj.message << "\n";
    else if (traj.status == IntegrationStatus::step_failure)
        os << "# status: step_failure: " << traj.message << "\n";
}

void write_particle_csv(std::ostream& os, const std::vector<double>& times,
                        const std::vector<OrthMat>& flow) {
    if (flow.empty()) return;
    const int n = flow.front().n();
    os << "t";
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) os << ",q_" << i << "_" << j;
    os << "\n";
    for (std::size_t k = 0; k < flow.size(); ++k) {
        print_value(os, times[k]);
        const Eigen::MatrixXd& Q = flow[k].matrix();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                os << ',';
                print_value(os, Q(i, j));
            }
        os << '\n';
    }
}

}  // namespace odeflow
