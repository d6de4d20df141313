// test_numerics.cpp — Jacobi eigensolver and DOPRI5 integrator.

#include <doctest.h>

#include <numbers>

#include "nmdyn/numerics.hpp"
#include "test_support.hpp"

using namespace nmdyn;

TEST_CASE("identity has a double eigenvalue 1") {
    const auto r = hermitian_eigen(ComplexMatrix::Identity(2, 2));
    CHECK(r.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(r.eigenvalues(1) == doctest::Approx(1.0));
}

TEST_CASE("diag(2,1) sorts ascending with swapped eigenvectors") {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = 1.0;
    const auto r = hermitian_eigen(a);
    CHECK(r.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(r.eigenvalues(1) == doctest::Approx(2.0));
    CHECK(std::abs(r.eigenvectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(r.eigenvectors(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("random Hermitian matrices: residual, orthonormality, reconstruction") {
    testing::InstanceGenerator gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = gen.integer(1, 8);
        const ComplexMatrix a = gen.hermitian(n, 5.0);
        const auto r = hermitian_eigen(a);
        const double scale = a.norm();
        for (Eigen::Index k = 0; k < n; ++k)
            CHECK((a * r.eigenvectors.col(k) - r.eigenvalues(k) * r.eigenvectors.col(k)).norm() <= 1e-10 * scale);
        CHECK((r.eigenvectors.adjoint() * r.eigenvectors - ComplexMatrix::Identity(n, n)).norm() < 1e-12);
        const ComplexMatrix back = r.eigenvectors * r.eigenvalues.cast<Complex>().asDiagonal() * r.eigenvectors.adjoint();
        CHECK((back - a).norm() <= 1e-9 * scale);
        for (Eigen::Index k = 1; k < n; ++k) CHECK(r.eigenvalues(k - 1) <= r.eigenvalues(k));
    }
}

TEST_CASE("Jacobi eigenvalues agree with Eigen's tridiagonal QR") {
    testing::InstanceGenerator gen(12);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = gen.integer(1, 12);
        const ComplexMatrix a = gen.hermitian(n, 10.0);
        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(a);
        const auto r = hermitian_eigen(a);
        CHECK((r.eigenvalues - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + a.norm()));
    }
}

TEST_CASE("degenerate spectrum keeps an orthonormal basis") {
    testing::InstanceGenerator gen(13);
    const ComplexMatrix q = gen.hermitian(4, 1.0).householderQr().householderQ();
    RealVector d(4);
    d << -1.0, 2.0, 2.0, 2.0;
    const ComplexMatrix a = q * d.cast<Complex>().asDiagonal() * q.adjoint();
    const auto r = hermitian_eigen(a);
    CHECK((r.eigenvalues - d).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((r.eigenvectors.adjoint() * r.eigenvectors - ComplexMatrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("real and single-precision scalars") {
    Eigen::MatrixXd a(3, 3);
    a << 2, -1, 0, -1, 2, -1, 0, -1, 2;
    const auto r = hermitian_eigen(a);
    CHECK(r.eigenvalues(0) == doctest::Approx(2.0 - std::sqrt(2.0)));
    CHECK(r.eigenvalues(2) == doctest::Approx(2.0 + std::sqrt(2.0)));

    const auto rf = hermitian_eigen(a.cast<float>().eval());
    CHECK(rf.eigenvalues(1) == doctest::Approx(2.0f).epsilon(1e-5));
}

TEST_CASE("non-Hermitian input is rejected") {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 1) = 1.0;
    CHECK_FALSE(is_hermitian(a));
    try {
        (void)hermitian_eigen(a);
        FAIL("expected NotHermitian");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotHermitian);
    }
}

TEST_CASE("hermiticity tolerance is relative") {
    ComplexMatrix a = ComplexMatrix::Identity(2, 2) * 1e6;
    a(0, 1) = Complex(0.0, 1e-7);
    a(1, 0) = Complex(0.0, -1e-7 + 1e-7 * 1e-8);
    CHECK(is_hermitian(a));
    a(1, 0) += 1e-3;
    CHECK_FALSE(is_hermitian(a));
}

TEST_CASE("ODE: zero generator leaves the state constant") {
    ComplexVector y0(2);
    y0 << 1.0, 0.0;
    const auto ys = integrate_linear_ode(ComplexMatrix::Zero(2, 2).eval(), y0, TimeGrid::uniform(5.0, 10));
    for (const auto& y : ys) CHECK((y - y0).norm() < 1e-15);
}

TEST_CASE("ODE: scalar phase rotation") {
    const ComplexMatrix m = ComplexMatrix::Identity(1, 1);
    ComplexVector y0(1);
    y0 << 1.0;
    const auto ys = integrate_linear_ode(m, y0, TimeGrid::uniform(std::numbers::pi, 1));
    CHECK(std::abs(ys.back()(0) - Complex(-1.0, 0.0)) < 1e-9);
}

TEST_CASE("ODE: sigma_x at pi/2 gives (0, -i)") {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    ComplexVector y0(2);
    y0 << 1.0, 0.0;
    const auto ys = integrate_linear_ode(m, y0, TimeGrid::uniform(std::numbers::pi / 2, 4));
    CHECK(std::abs(ys.back()(0)) < 1e-9);
    CHECK(std::abs(ys.back()(1) - Complex(0.0, -1.0)) < 1e-9);
    // Dense output at intermediate points against cos t, −i sin t.
    for (std::size_t k = 0; k < ys.size(); ++k) {
        const double t = std::numbers::pi / 2 * double(k) / 4.0;
        CHECK(std::abs(ys[k](0) - std::cos(t)) < 1e-9);
        CHECK(std::abs(ys[k](1) - Complex(0.0, -std::sin(t))) < 1e-9);
    }
}

TEST_CASE("ODE: unitarity probe for Hermitian generators") {
    testing::InstanceGenerator gen(21);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index n = gen.integer(1, 6);
        const ComplexMatrix m = gen.hermitian(n, 10.0);
        const ComplexVector y0 = gen.unit_vector(n);
        // Drift grows like ‖M‖·t·rtol; at the default rtol it reaches ~1e-8 for ‖M‖t ≈ 50.
        OdeOptions tight;
        tight.rtol = 1e-10;
        tight.atol = 1e-13;
        const auto ys = integrate_linear_ode(m, y0, TimeGrid::uniform(10.0, 200), tight);
        for (const auto& y : ys) CHECK(std::abs(y.norm() - 1.0) < 1e-8);
    }
}

TEST_CASE("ODE: matches the matrix exponential of a non-Hermitian generator") {
    testing::InstanceGenerator gen(22);
    const Eigen::Index n = 4;
    ComplexMatrix m = gen.hermitian(n, 3.0);
    m.diagonal() -= Complex(0.0, 0.5) * RealVector::LinSpaced(n, 0.0, 1.5).cast<Complex>();
    const ComplexVector y0 = gen.unit_vector(n);
    const Eigen::ComplexEigenSolver<ComplexMatrix> es(m);
    const ComplexMatrix& p = es.eigenvectors();
    const ComplexVector coeff = p.partialPivLu().solve(y0);
    const TimeGrid grid = TimeGrid::uniform(5.0, 5);
    const auto ys = integrate_linear_ode(m, y0, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const ComplexVector phase = (Complex(0.0, -grid[k]) * es.eigenvalues()).array().exp();
        const ComplexVector exact = p * (phase.array() * coeff.array()).matrix();
        CHECK((ys[k] - exact).norm() < 1e-8);
    }
}

TEST_CASE("ODE: tightening tolerances changes the endpoint by less than 10x the tolerance") {
    testing::InstanceGenerator gen(23);
    const ComplexMatrix m = gen.hermitian(3, 4.0);
    const ComplexVector y0 = gen.unit_vector(3);
    const TimeGrid grid = TimeGrid::uniform(10.0, 1);
    OdeOptions loose;
    loose.rtol = 1e-7;
    loose.atol = 1e-10;
    OdeOptions tight = loose;
    tight.rtol /= 2;
    tight.atol /= 2;
    const auto a = integrate_linear_ode(m, y0, grid, loose);
    const auto b = integrate_linear_ode(m, y0, grid, tight);
    CHECK((a.back() - b.back()).norm() < 10 * loose.rtol);
}

TEST_CASE("ODE: dimension mismatch throws") {
    ComplexVector y0(3);
    y0.setOnes();
    CHECK_THROWS_AS(integrate_linear_ode(ComplexMatrix::Identity(2, 2).eval(), y0, TimeGrid::uniform(1.0, 1)), Error);
}

TEST_CASE("time grid validation") {
    CHECK_THROWS(TimeGrid({0.0, 1.0, 1.0}));
    CHECK_THROWS(TimeGrid({0.5, 1.0}));
    const TimeGrid g = TimeGrid::uniform(3.0, 3);
    CHECK(g.size() == 4);
    CHECK(g.back() == 3.0);
}
