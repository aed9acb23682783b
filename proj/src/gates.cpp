#include "odeflow/gates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace odeflow {

std::string gate_name(GateId id) {
    switch (id) {
        case GateId::rotor: return "rotor";
        case GateId::pump: return "pump";
        case GateId::amplifier: return "amplifier";
        case GateId::rigid_body: return "rigid_body";
        case GateId::custom: return "custom";
    }
    return "unknown";
}

std::optional<GateId> gate_from_name(const std::string& name) {
    if (name == "rotor") return GateId::rotor;
    if (name == "pump") return GateId::pump;
    if (name == "amplifier") return GateId::amplifier;
    if (name == "rigid_body") return GateId::rigid_body;
    if (name == "custom") return GateId::custom;
    return std::nullopt;
}

GateSpec GateSpec::rotor(double alpha) { return GateSpec{GateId::rotor, alpha, {}}; }
GateSpec GateSpec::pump(double alpha) { return GateSpec{GateId::pump, alpha, {}}; }
GateSpec GateSpec::amplifier(double alpha) { return GateSpec{GateId::amplifier, alpha, {}}; }
GateSpec GateSpec::rigid_body(double i1, double i2, double i3) {
    return GateSpec{GateId::rigid_body, 1.0, {i1, i2, i3}};
}

int GateSpec::dimension() const {
    switch (id) {
        case GateId::rotor: return 3;
        case GateId::pump: return 2;
        case GateId::amplifier: return 2;
        case GateId::rigid_body: return 3;
        case GateId::custom: return 0;
    }
    return 0;
}

SymBilinearMap build(const GateSpec& spec) {
    const double a = spec.alpha;
    switch (spec.id) {
        case GateId::rotor: {
            std::vector<Eigen::MatrixXd> raw(3, Eigen::MatrixXd::Zero(3, 3));
            raw[0](1, 2) = a;   // dy1 = a y2 y3
            raw[1](0, 2) = -a;  // dy2 = -a y1 y3
            return SymBilinearMap::symmetrize(raw);
        }
        case GateId::pump: {
            std::vector<Eigen::MatrixXd> raw(2, Eigen::MatrixXd::Zero(2, 2));
            raw[0](0, 1) = -a;  // dy1 = -a y1 y2
            raw[1](0, 0) = a;   // dy2 = a y1^2
            return SymBilinearMap::symmetrize(raw);
        }
        case GateId::amplifier: {
            std::vector<Eigen::MatrixXd> raw(2, Eigen::MatrixXd::Zero(2, 2));
            raw[0](1, 1) = -a;  // dy1 = -a y2^2
            raw[1](0, 1) = a;   // dy2 = a y1 y2
            return SymBilinearMap::symmetrize(raw);
        }
        case GateId::rigid_body: {
            const auto& I = spec.inertia;
            if (I[0] <= 0 || I[1] <= 0 || I[2] <= 0)
                throw std::invalid_argument("rigid_body gate: moments of inertia must be positive");
            std::vector<Eigen::MatrixXd> raw(3, Eigen::MatrixXd::Zero(3, 3));
            // dw_i = ((I_j - I_k)/I_i) w_j w_k for cyclic (i,j,k)
            raw[0](1, 2) = (I[1] - I[2]) / I[0];
            raw[1](2, 0) = (I[2] - I[0]) / I[1];
            raw[2](0, 1) = (I[0] - I[1]) / I[2];
            return SymBilinearMap::symmetrize(raw);
        }
        case GateId::custom:
            throw std::invalid_argument("build: custom gates carry their own tensor");
    }
    throw std::invalid_argument("build: unknown gate id");
}

InnerProduct named_inner_product(const GateSpec& spec) {
    if (spec.id == GateId::rigid_body) {
        Eigen::VectorXd d(3);
        d << spec.inertia[0], spec.inertia[1], spec.inertia[2];
        return InnerProduct::diagonal(d);
    }
    return InnerProduct::identity(spec.dimension());
}

SymBilinearMap direct_sum(const SymBilinearMap& a, const SymBilinearMap& b) {
    const int na = a.n(), nb = b.n(), n = na + nb;
    std::vector<Eigen::MatrixXd> raw(n, Eigen::MatrixXd::Zero(n, n));
    for (int k = 0; k < na; ++k) raw[k].topLeftCorner(na, na) = a.slice(k);
    for (int k = 0; k < nb; ++k) raw[na + k].bottomRightCorner(nb, nb) = b.slice(k);
    return SymBilinearMap::symmetrize(raw);
}

SymBilinearMap couple(const SymBilinearMap& a, const SymBilinearMap& b,
                      const std::vector<CouplingTriple>& coupling,
                      const InnerProduct& G, double reject_tol) {
    const int n = a.n() + b.n();
    if (G.n() != n)
        throw std::invalid_argument("couple: inner product dimension mismatch");

    std::vector<Eigen::MatrixXd> delta(n, Eigen::MatrixXd::Zero(n, n));
    for (const auto& t : coupling) {
        if (t.i < 0 || t.i >= n || t.j < 0 || t.j >= n || t.k < 0 || t.k >= n)
            throw std::invalid_argument("couple: triple index out of range");
        delta[t.i](t.j, t.k) += t.c;
    }
    const SymBilinearMap add = SymBilinearMap::symmetrize(delta);

    // The coupling contribution to <B(y,y),y>_G is the cubic form with
    // coefficients T(i,j,m) = sum_l add[l][i][j] G(l,m); it vanishes iff its
    // full symmetrization does, monomial by monomial.
    double worst = 0.0;
    std::array<int, 3> worst_mono{0, 0, 0};
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            for (int k = j; k < n; ++k) {
                double coeff = 0.0;
                const std::array<std::array<int, 3>, 6> perms{{{i, j, k},
                                                               {i, k, j},
                                                               {j, i, k},
                                                               {j, k, i},
                                                               {k, i, j},
                                                               {k, j, i}}};
                for (const auto& p : perms) {
                    for (int l = 0; l < n; ++l)
                        coeff += add.coeff(l, p[0], p[1]) * G.gram(l, p[2]);
                }
                if (std::abs(coeff) > std::abs(worst)) {
                    worst = coeff;
                    worst_mono = {i, j, k};
                }
            }
        }
    }
    const double scale = 1.0 + add.max_abs_coeff() * G.gram.cwiseAbs().maxCoeff();
    if (std::abs(worst) > reject_tol * scale) {
        // Identify a coupling triple touching the violated monomial.
        std::ostringstream msg;
        msg << "couple: conservation-violating coupling; monomial y" << worst_mono[0] + 1
            << "*y" << worst_mono[1] + 1 << "*y" << worst_mono[2] + 1
            << " has symmetrized G-trilinear coefficient " << worst;
        for (const auto& t : coupling) {
            std::array<int, 3> idx{t.i, t.j, t.k};
            std::sort(idx.begin(), idx.end());
            if (idx == worst_mono) {
                msg << "; offending triple (i=" << t.i + 1 << ", j=" << t.j + 1
                    << ", k=" << t.k + 1 << ", c=" << t.c << ")";
                break;
            }
        }
        throw std::invalid_argument(msg.str());
    }

    std::vector<Eigen::MatrixXd> raw(n);
    const SymBilinearMap base = direct_sum(a, b);
    for (int k = 0; k < n; ++k) raw[k] = base.slice(k) + add.slice(k);
    return SymBilinearMap::symmetrize(raw);
}

}  // namespace odeflow
