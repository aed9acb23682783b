/// @file gates.hpp
/// @brief Built-in example systems (rotor, pump, amplifier, rigid body)
/// and combinators for coupling them into larger conservative systems.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "odeflow/quadode.hpp"

namespace odeflow {

enum class GateId { rotor, pump, amplifier, rigid_body, custom };

std::string gate_name(GateId id);
std::optional<GateId> gate_from_name(const std::string& name);

struct GateSpec {
    GateId id = GateId::custom;
    double alpha = 1.0;                       // rotor / pump / amplifier
    std::array<double, 3> inertia{1.0, 1.0, 1.0};  // rigid body, all > 0

    static GateSpec rotor(double alpha = 1.0);
    static GateSpec pump(double alpha = 1.0);
    static GateSpec amplifier(double alpha = 1.0);
    static GateSpec rigid_body(double i1, double i2, double i3);

    int dimension() const;
};

/// Builds the gate's bilinear map:
///   rotor:      B(y,y) = (a y2 y3, -a y1 y3, 0)
///   pump:       B(y,y) = (-a y1 y2, a y1^2)
///   amplifier:  B(y,y) = (-a y2^2, a y1 y2)
///   rigid body: dw_i = ((I_j - I_k)/I_i) w_j w_k, (i,j,k) cyclic
/// Throws std::invalid_argument for non-positive moments of inertia.
SymBilinearMap build(const GateSpec& spec);

/// The inner product named for each built-in gate: Euclidean for
/// rotor/pump/amplifier, diag(I1,I2,I3) (kinetic energy) for the rigid body.
InnerProduct named_inner_product(const GateSpec& spec);

/// Block-diagonal sum on R^{na+nb}. If both summands conserve energy with
/// certificates Ga, Gb, the sum conserves diag(Ga, Gb).
SymBilinearMap direct_sum(const SymBilinearMap& a, const SymBilinearMap& b);

/// One coupling term: contributes c * y_j * y_k to dy_i/dt.
struct CouplingTriple {
    int i = 0, j = 0, k = 0;
    double c = 0.0;
};

/// Couples two systems with user-provided triples. The composite must
/// conserve the designated inner product G: the builder evaluates the
/// symmetrized G-trilinear form of the coupling contribution and rejects
/// (std::invalid_argument naming the offending triple) if any cubic
/// monomial coefficient exceeds reject_tol.
SymBilinearMap couple(const SymBilinearMap& a, const SymBilinearMap& b,
                      const std::vector<CouplingTriple>& coupling,
                      const InnerProduct& G, double reject_tol = 1e-12);

}  // namespace odeflow
