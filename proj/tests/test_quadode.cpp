#include <doctest.h>

#include <cmath>

#include "odeflow/gates.hpp"
#include "odeflow/quadode.hpp"
#include "oracles.hpp"

using namespace odeflow;

namespace {

// B(y,z) = (<y,e1> z + <z,e1> y)/2 violates the cancellation identity:
// B(e1,e1) = e1.
SymBilinearMap parallel_violator(int n) {
    std::vector<Eigen::MatrixXd> raw(n, Eigen::MatrixXd::Zero(n, n));
    for (int k = 0; k < n; ++k) {
        raw[k](0, k) += 0.5;
        raw[k](k, 0) += 0.5;
    }
    return SymBilinearMap::symmetrize(raw);
}

}  // namespace

TEST_CASE("symmetrize averages mismatched entries and is idempotent") {
    std::vector<Eigen::MatrixXd> raw(4, Eigen::MatrixXd::Zero(4, 4));
    raw[0](1, 2) = 1.0;  // b[0][1][2] = 1, b[0][2][1] = 0
    const SymBilinearMap B = SymBilinearMap::symmetrize(raw);
    CHECK(B.coeff(0, 1, 2) == 0.5);
    CHECK(B.coeff(0, 2, 1) == 0.5);

    // Already-symmetric input is unchanged.
    std::vector<Eigen::MatrixXd> sym_raw;
    for (int k = 0; k < B.n(); ++k) sym_raw.push_back(B.slice(k));
    const SymBilinearMap B2 = SymBilinearMap::symmetrize(sym_raw);
    for (int k = 0; k < B.n(); ++k) CHECK((B2.slice(k) - B.slice(k)).norm() == 0.0);

    // Diagonal evaluation is unchanged by symmetrization.
    Rng rng(5);
    const Eigen::VectorXd y = rng.normal_vector(4);
    std::vector<Eigen::MatrixXd> asym(4, Eigen::MatrixXd::Zero(4, 4));
    for (auto& m : asym) m = rng.normal_matrix(4, 4);
    const SymBilinearMap Bs = SymBilinearMap::symmetrize(asym);
    for (int k = 0; k < 4; ++k)
        CHECK(y.dot(asym[k] * y) == doctest::Approx(Bs.eval(y, y)[k]).epsilon(1e-14));
}

TEST_CASE("symmetrize rejects bad input") {
    std::vector<Eigen::MatrixXd> ragged(3, Eigen::MatrixXd::Zero(2, 2));
    CHECK_THROWS_AS(SymBilinearMap::symmetrize(ragged), std::invalid_argument);
    std::vector<Eigen::MatrixXd> nan(2, Eigen::MatrixXd::Zero(2, 2));
    nan[0](0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(SymBilinearMap::symmetrize(nan), std::invalid_argument);
}

TEST_CASE("rotor gate tensor matches the symmetrized equations of motion") {
    const SymBilinearMap B = build(GateSpec::rotor(1.0));
    // B((a),(b)) = ((a2 b3 + a3 b2)/2, -(a1 b3 + a3 b1)/2, 0)
    Rng rng(11);
    const Eigen::VectorXd a = rng.normal_vector(3), b = rng.normal_vector(3);
    const Eigen::VectorXd v = B.eval(a, b);
    CHECK(v[0] == doctest::Approx((a[1] * b[2] + a[2] * b[1]) / 2).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(-(a[0] * b[2] + a[2] * b[0]) / 2).epsilon(1e-14));
    CHECK(v[2] == 0.0);
}

TEST_CASE("eval: frozen values and bilinearity") {
    const SymBilinearMap rotor = build(GateSpec::rotor(1.0));
    Eigen::VectorXd y(3);
    y << 1, 2, 3;
    const Eigen::VectorXd v = rotor.eval(y, y);
    CHECK(v[0] == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(v[1] == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(v[2] == 0.0);

    // y = 0 gives 0.
    CHECK(rotor.eval(Eigen::VectorXd::Zero(3), y).norm() == 0.0);

    // pump, alpha=1: B(y,y) = (-y1 y2, y1^2)
    const SymBilinearMap pump = build(GateSpec::pump(1.0));
    Eigen::VectorXd p(2);
    p << 2.0, -3.0;
    const Eigen::VectorXd w = pump.eval(p, p);
    CHECK(w[0] == doctest::Approx(-p[0] * p[1]).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(p[0] * p[0]).epsilon(1e-15));

    // Exact symmetry and bilinearity at random points, against the loop oracle.
    Rng rng(23);
    for (int t = 0; t < 25; ++t) {
        const Eigen::VectorXd y1 = rng.normal_vector(3), y2 = rng.normal_vector(3),
                              y3 = rng.normal_vector(3);
        const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
        CHECK((rotor.eval(y1, y2) - rotor.eval(y2, y1)).norm() == 0.0);
        const Eigen::VectorXd lhs = rotor.eval(a * y1 + b * y2, y3);
        const Eigen::VectorXd rhs = a * rotor.eval(y1, y3) + b * rotor.eval(y2, y3);
        CHECK((lhs - rhs).norm() <= 1e-14 * (1.0 + rhs.norm()));
        CHECK((rotor.eval(y1, y2) - oracle::eval_loop(rotor, y1, y2)).norm() <= 1e-13);
    }
}

TEST_CASE("trilinear: rotor, rigid body, and a violator") {
    const SymBilinearMap rotor = build(GateSpec::rotor(1.0));
    Eigen::VectorXd y(3);
    y << 1, 2, 3;
    CHECK(std::abs(trilinear(rotor, InnerProduct::identity(3), y, y, y)) < 1e-14);

    const SymBilinearMap rb = build(GateSpec::rigid_body(1, 2, 3));
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
    // dw = (-1, 1, -1/3) at w = (1,1,1); sum I_i w_i dw_i = -1 + 2 - 1 = 0.
    const Eigen::VectorXd dw = rb.eval(ones, ones);
    CHECK(dw[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(dw[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dw[2] == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    Eigen::VectorXd inertia(3);
    inertia << 1, 2, 3;
    CHECK(std::abs(trilinear(rb, InnerProduct::diagonal(inertia), ones, ones, ones)) < 1e-14);

    const SymBilinearMap bad = parallel_violator(3);
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(3);
    e1[0] = 1.0;
    CHECK(trilinear(bad, InnerProduct::identity(3), e1, e1, e1) ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("cancellation_residual separates conservative from violating maps") {
    const InnerProduct id3 = InnerProduct::identity(3);
    const InnerProduct id2 = InnerProduct::identity(2);
    CHECK(cancellation_residual(build(GateSpec::rotor(1.0)), id3) < 1e-12);
    CHECK(cancellation_residual(build(GateSpec::amplifier(1.0)), id2) < 1e-12);
    CHECK(cancellation_residual(build(GateSpec::pump(1.0)), id2) < 1e-12);
    CHECK(cancellation_residual(parallel_violator(3), id3) >= 0.1);
}

TEST_CASE("polarization identity holds whenever the cubic form vanishes") {
    const SymBilinearMap rotor = build(GateSpec::rotor(1.3));
    const InnerProduct G = InnerProduct::identity(3);
    Rng rng(77);
    for (int t = 0; t < 100; ++t) {
        const Eigen::VectorXd y = rng.normal_vector(3), z = rng.normal_vector(3);
        const double lhs = trilinear(rotor, G, y, y, z) + 2.0 * trilinear(rotor, G, y, z, y);
        const double scale = (1.0 + y.norm() * y.norm()) * (1.0 + z.norm());
        CHECK(std::abs(lhs) <= 1e-12 * scale);
    }
}

TEST_CASE("inner product: PD detection and Cholesky") {
    Eigen::VectorXd d(3);
    d << 1, 2, 3;
    const InnerProduct G = InnerProduct::diagonal(d);
    CHECK(G.is_positive_definite());
    const Eigen::MatrixXd L = G.cholesky();
    CHECK((L * L.transpose() - G.gram).norm() < 1e-14);

    InnerProduct bad{Eigen::MatrixXd::Identity(2, 2)};
    bad.gram(1, 1) = -1.0;
    CHECK(!bad.is_positive_definite());
    CHECK_THROWS_AS(bad.cholesky(), std::runtime_error);
}

TEST_CASE("dimension mismatches raise invalid-input errors") {
    const SymBilinearMap rotor = build(GateSpec::rotor(1.0));
    CHECK_THROWS_AS(rotor.eval(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(trilinear(rotor, InnerProduct::identity(2), Eigen::VectorXd::Zero(3),
                              Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)),
                    std::invalid_argument);
}
