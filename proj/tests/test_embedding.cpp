#include <doctest.h>

#include <cmath>

#include "odeflow/certificate.hpp"
#include "odeflow/embedding.hpp"
#include "odeflow/gates.hpp"
#include "oracles.hpp"

using namespace odeflow;

namespace {

SMap rotor_smap() { return SMap::build(build(GateSpec::rotor(1.0))); }

}  // namespace

TEST_CASE("build_smap: rotor generators match the brute-force duality oracle") {
    const SymBilinearMap B = build(GateSpec::rotor(1.0));
    const SMap S = SMap::build(B);

    // Every entry against the oracle.
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c)
            for (int b = 0; b < 3; ++b)
                CHECK(S.generator(a)(c, b) ==
                      doctest::Approx(oracle::smap_entry(B, a, b, c)).epsilon(1e-14));

    // Frozen: S(e3) = (2/3) [[0,1,0],[-1,0,0],[0,0,0]].
    Eigen::MatrixXd s3(3, 3);
    s3 << 0, 2.0 / 3.0, 0, -2.0 / 3.0, 0, 0, 0, 0, 0;
    CHECK((S.generator(2) - s3).cwiseAbs().maxCoeff() < 1e-15);

    // Frozen: y = (1,2,3) gives S12 = 2, S13 = 2/3, S23 = -1/3 and
    // S(y) y = (6,-3,0) = B(y,y).
    Eigen::VectorXd y(3);
    y << 1, 2, 3;
    const Eigen::MatrixXd Sy = S.at(y);
    CHECK(Sy(0, 1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(Sy(0, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(Sy(1, 2) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK((Sy + Sy.transpose()).norm() == 0.0);
    Eigen::VectorXd want(3);
    want << 6, -3, 0;
    CHECK((Sy * y - want).norm() < 1e-14);
}

TEST_CASE("build_smap: zero map, precondition, and skewness") {
    const SMap S0 = SMap::build(SymBilinearMap::zero(4));
    for (int j = 0; j < 4; ++j) CHECK(S0.generator(j).norm() == 0.0);

    // Non-conservative input is rejected with a pointer to euclideanize.
    std::vector<Eigen::MatrixXd> raw(2, Eigen::MatrixXd::Zero(2, 2));
    raw[0](0, 0) = 1.0;
    CHECK_THROWS_WITH_AS(SMap::build(SymBilinearMap::symmetrize(raw)),
                         doctest::Contains("euclideanize"), std::invalid_argument);

    // Generators stored exactly skew.
    Rng rng(14);
    const SymBilinearMap B = oracle::random_conservative(5, rng);
    const SMap S = SMap::build(B);
    for (int j = 0; j < 5; ++j)
        CHECK((S.generator(j) + S.generator(j).transpose()).norm() == 0.0);
}

TEST_CASE("S-map identity S(y)y = B(y,y) for gates and random conservative maps") {
    Rng rng(15);
    std::vector<SymBilinearMap> maps = {build(GateSpec::rotor(1.0)),
                                        build(GateSpec::pump(1.0)),
                                        build(GateSpec::amplifier(1.0))};
    for (int t = 0; t < 5; ++t) maps.push_back(oracle::random_conservative(4, rng));
    for (const auto& B : maps) {
        const SMap S = SMap::build(B);
        for (int t = 0; t < 100; ++t) {
            const Eigen::VectorXd y = rng.normal_vector(B.n());
            CHECK((S.at(y) * y - B.eval(y, y)).norm() < 1e-12 * (1.0 + y.squaredNorm()));
        }
    }
}

TEST_CASE("level4_fields: frozen rotor values and the transport identity") {
    const SMap S = rotor_smap();
    Eigen::VectorXd y(3), e1(3);
    y << 1, 2, 3;
    e1 << 1, 0, 0;
    const OrthMat I3 = OrthMat::identity(3);

    // Q = I: F = <y,z>.
    const Level4Eval ev = level4_fields(S, y, e1, I3);
    CHECK(ev.F == doctest::Approx(1.0).epsilon(1e-15));

    // F(B(y,y), e1)(I) = 6 and dF along U = -6.
    const Eigen::VectorXd Byy = S.at(y) * y;
    const Level4Eval evB = level4_fields(S, Byy, e1, I3);
    CHECK(evB.F == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(ev.dF_along_U == doctest::Approx(-6.0).epsilon(1e-14));
    CHECK(std::abs(evB.F + ev.dF_along_U) < 1e-13);

    // y = 0: all fields vanish.
    const Level4Eval ev0 = level4_fields(S, Eigen::VectorXd::Zero(3), e1, I3);
    CHECK(ev0.U4.norm() == 0.0);
    CHECK(ev0.F == 0.0);

    // Transport identity at seeded random (y, z, Q).
    Rng rng(16);
    for (int t = 0; t < 100; ++t) {
        const Eigen::VectorXd yy = rng.normal_vector(3), zz = rng.normal_vector(3);
        const OrthMat Q = haar_sample(rng, 3);
        const Level4Eval a = level4_fields(S, yy, zz, Q);
        const Level4Eval b = level4_fields(S, S.at(yy) * yy, zz, Q);
        const double scale = (1.0 + yy.squaredNorm()) * (1.0 + yy.norm()) * zz.norm();
        CHECK(std::abs(b.F + a.dF_along_U) < 1e-11 * scale);
    }
}

TEST_CASE("level3_fields: Gram identity and constant modified pressure") {
    const SMap S = rotor_smap();
    Rng rng(17);
    for (int t = 0; t < 50; ++t) {
        const ChartPoint x = sample_chart_point(rng, 3, 3, 0.8);
        const Eigen::VectorXd y = rng.normal_vector(3), yp = rng.normal_vector(3);
        const FieldEval a = level3_fields(S, y, x);
        const FieldEval b = level3_fields(S, yp, x);
        // sum_i F(y,e_i) F(y',e_i) = <y,y'> for every chart point.
        CHECK(std::abs(a.F.dot(b.F) - y.dot(yp)) < 1e-12 * (1.0 + y.norm() * yp.norm()));
        // P'(y,y) = |y|^2 / 2, independent of x.
        CHECK(a.Pprime == doctest::Approx(0.5 * y.squaredNorm()).epsilon(1e-13));
        // V carries only torus components and matches F.
        CHECK(a.V.head(skew_dim(3)).norm() == 0.0);
        CHECK((a.V.tail(3) - a.F).norm() == 0.0);
    }
    // y = 0: all fields zero.
    const ChartPoint x = sample_chart_point(rng, 3, 3, 0.5);
    const FieldEval z = level3_fields(S, Eigen::VectorXd::Zero(3), x);
    CHECK(z.U.norm() == 0.0);
    CHECK(z.V.norm() == 0.0);
    CHECK(z.Pprime == 0.0);
}

TEST_CASE("level2_metric: compatibility, positivity, projector/blockwise agreement") {
    const SMap S = rotor_smap();
    Rng rng(18);
    std::vector<ChartPoint> cpts;
    for (int i = 0; i < 8; ++i) cpts.push_back(sample_chart_point(rng, 3, 3, 0.7));
    const double C = choose_C(S, cpts);
    CHECK(C >= 1.0);

    for (int t = 0; t < 20; ++t) {
        const ChartPoint x = sample_chart_point(rng, 3, 3, 0.7);
        const Eigen::VectorXd y = rng.normal_vector(3);
        const FieldEval fe = level3_fields(S, y, x);
        const FieldEval met = level2_metric(S, x, C);
        // g U(y) = V(y) in chart coordinates.
        CHECK((met.g * fe.U - fe.V).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + y.norm()));
        // g positive definite.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(met.g);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        // Independent blockwise assembly agrees.
        const Eigen::MatrixXd ref = level2_metric_blockwise(S, x, C);
        CHECK((met.g - ref).cwiseAbs().maxCoeff() < 1e-10);
        // g(U(y),U(y')) = <y,y'> stays put when C grows.
        const FieldEval met2 = level2_metric(S, x, C + 1.0);
        const Eigen::VectorXd yp = rng.normal_vector(3);
        const FieldEval fep = level3_fields(S, yp, x);
        CHECK(fe.U.dot(met.g * fep.U) == doctest::Approx(y.dot(yp)).epsilon(1e-10));
        CHECK(fe.U.dot(met2.g * fep.U) == doctest::Approx(y.dot(yp)).epsilon(1e-10));
    }
}

TEST_CASE("choose_C: determinism and monotonicity of the PD margin") {
    const SMap S = rotor_smap();
    Rng r1(19), r2(19);
    std::vector<ChartPoint> s1, s2;
    for (int i = 0; i < 6; ++i) {
        s1.push_back(sample_chart_point(r1, 3, 3, 0.7));
        s2.push_back(sample_chart_point(r2, 3, 3, 0.7));
    }
    CHECK(choose_C(S, s1) == choose_C(S, s2));

    // Doubling the safety factor never decreases the minimum eigenvalue at
    // fresh samples (the complement block grows monotonically with C).
    const double C = choose_C(S, s1);
    Rng rng(20);
    for (int t = 0; t < 10; ++t) {
        const ChartPoint x = sample_chart_point(rng, 3, 3, 0.7);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e1(level2_metric(S, x, C).g);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e2(level2_metric(S, x, 2.0 * C).g);
        CHECK(e2.eigenvalues().minCoeff() >= e1.eigenvalues().minCoeff() - 1e-12);
    }
}

TEST_CASE("level1_fields: unit determinant, block energy, zero pressure") {
    const SMap S = rotor_smap();
    Rng rng(21);
    std::vector<ChartPoint> cpts;
    for (int i = 0; i < 8; ++i) cpts.push_back(sample_chart_point(rng, 3, 3, 0.7));
    const double C = choose_C(S, cpts);

    for (int t = 0; t < 20; ++t) {
        const ChartPoint x = sample_chart_point(rng, 3, 1, 0.7);
        const Eigen::VectorXd y = rng.normal_vector(3);
        const FieldEval fe = level1_fields(S, y, x, C);
        CHECK(std::abs(fe.det_vol - 1.0) < 1e-10);
        // g(U(y),U(y)) = |y|^2: U has no s component and the Gram is Euclidean.
        CHECK(fe.U.dot(fe.g * fe.U) == doctest::Approx(y.squaredNorm()).epsilon(1e-10));
        // P(y,y) = 0 identically for this construction.
        CHECK(std::abs(fe.P) < 1e-10 * (1.0 + y.squaredNorm()));
        // Pullback consistency: level-1 values agree with level-3 values at
        // the projected point exactly.
        const FieldEval f3 = level3_fields(S, y, x.project_to_level3());
        CHECK((fe.U.head(f3.U.size()) - f3.U).norm() == 0.0);
        CHECK(fe.U[fe.U.size() - 1] == 0.0);
        CHECK((fe.V.head(f3.V.size()) - f3.V).norm() == 0.0);
        CHECK(fe.Pprime == f3.Pprime);
    }

    // Base point a = 0: chart density is exactly 1 and the determinant
    // residual drops to roundoff.
    Rng rr(22);
    Chart chart{haar_sample(rr, 3), 1.0};
    const ChartPoint x0 = ChartPoint::level1(chart, Eigen::VectorXd::Zero(3),
                                             rr.uniform_vector(3, 0, 1), 0.25);
    const FieldEval fe0 = level1_fields(S, Eigen::VectorXd::Zero(3), x0, C);
    CHECK(std::abs(fe0.det_vol - 1.0) < 1e-12);
}

TEST_CASE("velocity_field: linearity, injectivity witness, rotor steady mode") {
    const SMap S = rotor_smap();
    Rng rng(23);
    const ChartPoint x = sample_chart_point(rng, 3, 3, 0.6);
    const Eigen::VectorXd y = rng.normal_vector(3), z = rng.normal_vector(3);

    CHECK(velocity_field(S, Eigen::VectorXd::Zero(3), x).norm() == 0.0);
    const Eigen::VectorXd sum = velocity_field(S, y + z, x);
    const Eigen::VectorXd parts = velocity_field(S, y, x) + velocity_field(S, z, x);
    CHECK((sum - parts).cwiseAbs().maxCoeff() < 1e-13 * (1.0 + parts.cwiseAbs().maxCoeff()));

    // V(y)(U(y)) = |y|^2 > 0 witnesses injectivity.
    const FieldEval fe = level3_fields(S, y, x);
    CHECK(fe.V.dot(fe.U) == doctest::Approx(y.squaredNorm()).epsilon(1e-12));

    // Steady rotor mode y = (0,0,w): SO(3) part is w S(e3) Q, torus part
    // w Q^T e3.
    const double w = 1.7;
    Eigen::VectorXd ysteady(3);
    ysteady << 0, 0, w;
    const ChartFrame cf = chart_frame(x.chart, x.a);
    const Eigen::VectorXd u = velocity_field(S, ysteady, x);
    const Eigen::VectorXd so_expected = cf.field_coords(w * S.generator(2));
    CHECK((u.head(3) - so_expected).norm() < 1e-12);
    Eigen::VectorXd e3(3);
    e3 << 0, 0, 1;
    CHECK((u.tail(3) - w * (cf.Q.matrix().transpose() * e3)).norm() < 1e-13);
}

TEST_CASE("desk scale n = 6: the whole tower holds on SO(6) x T^7") {
    Rng gen(55);
    const SymBilinearMap B = oracle::random_conservative(6, gen);
    const SMap S = SMap::build(B);
    Rng rng(56);
    std::vector<ChartPoint> cpts;
    for (int i = 0; i < 4; ++i) cpts.push_back(sample_chart_point(rng, 6, 3, 0.7));
    const double C = choose_C(S, cpts);

    for (int t = 0; t < 5; ++t) {
        const ChartPoint x3 = sample_chart_point(rng, 6, 3, 0.7);
        const Eigen::VectorXd y = rng.normal_vector(6), yp = rng.normal_vector(6);
        const FieldEval fe = level3_fields(S, y, x3);
        const FieldEval fep = level3_fields(S, yp, x3);
        CHECK(std::abs(fe.F.dot(fep.F) - y.dot(yp)) < 1e-12 * (1.0 + y.norm() * yp.norm()));
        const Eigen::MatrixXd g = level2_metric(S, x3, C).g;
        CHECK((g * fe.U - fe.V).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + y.norm()));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        CHECK(es.eigenvalues().minCoeff() > 0.0);

        const ChartPoint x1 = sample_chart_point(rng, 6, 1, 0.7);
        const FieldEval f1 = level1_fields(S, y, x1, C);
        CHECK(std::abs(f1.det_vol - 1.0) < 1e-9);
        CHECK(std::abs(f1.P) < 1e-9 * (1.0 + y.squaredNorm()));
    }
}

TEST_CASE("chart radius violations surface as invalid-input errors") {
    const SMap S = rotor_smap();
    Rng rng(24);
    ChartPoint x = sample_chart_point(rng, 3, 3, 0.5);
    x.a = Eigen::VectorXd::Zero(3);
    x.a[0] = 1.2;  // outside |a| <= 1
    CHECK_THROWS_AS(level3_fields(S, Eigen::VectorXd::Ones(3), x), std::invalid_argument);
}
