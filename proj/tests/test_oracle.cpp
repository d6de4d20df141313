// test_oracle.cpp — direct memory-equation solvers and trajectory comparison.

#include <doctest.h>

#include <numbers>

#include "nmdyn/oracle.hpp"
#include "test_support.hpp"

using namespace nmdyn;

namespace {

const Complex I(0.0, 1.0);

ComplexVector unit(Eigen::Index n, Eigen::Index which) {
    ComplexVector v = ComplexVector::Zero(n);
    v(which) = 1.0;
    return v;
}

double sup_norm(const OracleTrajectory& t) {
    double s = 0.0;
    for (const auto& x : t.states) s = std::max(s, x.norm());
    return s;
}

}  // namespace

TEST_CASE("memoryless limit is a phase rotation") {
    const auto traj = solve_integro_differential(SystemHamiltonian::diagonal({1.0}), zero_kernel(), unit(1, 0),
                                                 std::numbers::pi, 1000);
    const double h = traj.step();
    CHECK(std::abs(traj.states.back()(0) + 1.0) < std::numbers::pi * h * h);
}

TEST_CASE("single Lorentz peak agrees with the pseudomode solution") {
    const SystemHamiltonian hs = SystemHamiltonian::diagonal({0.3});
    const BathModel bath({{0.8, 1.2, -0.4}});
    const InitialState init = InitialState::excited(1, 0);
    const std::size_t steps = 4000;
    const Trajectory ref = simulate(hs, bath, init, TimeGrid::uniform(10.0, steps));
    auto solve = [&](std::size_t s) { return solve_integro_differential(hs, lorentz_kernel(bath), init.psi(), 10.0, s); };
    const double raw = compare_trajectories(ref, solve(steps));
    const double extrapolated = compare_trajectories(ref, richardson_extrapolate(solve, steps));
    CHECK(raw < 1e-4);
    CHECK(extrapolated < 1e-6);
    CHECK(compare_trajectories(ref, richardson_extrapolate(solve, steps), {TrajectoryNorm::L2}) < 1e-6);
}

TEST_CASE("second-order convergence toward the pseudomode solution") {
    testing::InstanceGenerator gen(61);
    const SystemHamiltonian hs(gen.hermitian(2, 1.5));
    const BathModel bath(gen.peaks(2, 0.2, 1.0, 0.5, 1.5));
    const ComplexVector psi = gen.unit_vector(2);
    const InitialState init(psi, 0.0);
    const Trajectory ref = simulate(hs, bath, init, TimeGrid::uniform(5.0, 200));
    const double e1 = compare_trajectories(ref, solve_integro_differential(hs, lorentz_kernel(bath), psi, 5.0, 200));
    const double e2 = compare_trajectories(ref, solve_integro_differential(hs, lorentz_kernel(bath), psi, 5.0, 400));
    const double order = std::log2(e1 / e2);
    CHECK(order >= 1.7);
    CHECK(order <= 2.3);
}

TEST_CASE("step-doubling differences scale as h squared") {
    const SystemHamiltonian hs = SystemHamiltonian::diagonal({0.5});
    const BathModel bath({{0.7, 0.8, 0.2}});
    const auto kernel = lorentz_kernel(bath);
    const auto a = solve_integro_differential(hs, kernel, unit(1, 0), 5.0, 250);
    const auto b = solve_integro_differential(hs, kernel, unit(1, 0), 5.0, 500);
    const auto c = solve_integro_differential(hs, kernel, unit(1, 0), 5.0, 1000);
    const double order = std::log2(compare_trajectories(a, b) / compare_trajectories(b, c));
    CHECK(order >= 1.7);
    CHECK(order <= 2.3);
}

TEST_CASE("zero Ohmic coefficient reproduces the plain solver exactly") {
    const SystemHamiltonian hs = SystemHamiltonian::diagonal({0.2, -0.4});
    const BathModel bath({{0.5, 1.0, 0.0}});
    const ComplexVector psi = unit(2, 1);
    const auto plain = solve_integro_differential(hs, lorentz_kernel(bath), psi, 3.0, 300);
    const auto renorm = solve_renormalized(hs, 0.0, lorentz_kernel(bath), psi, 3.0, 300);
    for (std::size_t k = 0; k < plain.states.size(); ++k) CHECK(plain.states[k] == renorm.states[k]);

    const double cutoffs[] = {5.0, 9.0};
    for (const auto& member : solve_cutoff_family(hs, 0.0, cutoffs, lorentz_kernel(bath), psi, 3.0, 300))
        for (std::size_t k = 0; k < plain.states.size(); ++k) CHECK(plain.states[k] == member.states[k]);
}

TEST_CASE("renormalized scalar equation without memory decays exponentially") {
    const double e = 1.3, eta = 0.8;
    const Complex c = renormalization_factor(eta);
    const auto traj = solve_renormalized(SystemHamiltonian::diagonal({e}), eta, zero_kernel(), unit(1, 0), 4.0, 2000);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const double t = traj.grid[k];
        worst = std::max(worst, std::abs(traj.states[k](0) - c * std::exp(-I * e * t * c)));
    }
    CHECK(worst < 1e-5);
    // |ψ| decays at rate E·(η/2)/(1 + (η/2)²).
    const double rate = e * (eta / 2) / (1 + eta * eta / 4);
    CHECK(std::abs(traj.states.back()(0)) == doctest::Approx(std::abs(c) * std::exp(-rate * 4.0)).epsilon(1e-5));
}

TEST_CASE("renormalized equation with a Lorentz peak agrees with the pseudomode solution") {
    const SystemHamiltonian hs = SystemHamiltonian::diagonal({1.0});
    const BathModel bath({{0.6, 1.0, 0.3}}, 1.0);
    const InitialState init = InitialState::excited(1, 0);
    const std::size_t steps = 4000;
    const Trajectory ref = simulate(hs, bath, init, TimeGrid::uniform(10.0, steps));
    auto solve = [&](std::size_t s) {
        return solve_renormalized(hs, 1.0, lorentz_kernel(bath), init.psi(), 10.0, s);
    };
    CHECK(compare_trajectories(ref, richardson_extrapolate(solve, steps)) < 1e-6);
}

TEST_CASE("finite-cutoff family converges toward the renormalized solution") {
    const SystemHamiltonian hr = SystemHamiltonian::diagonal({1.0});
    const double t_max = 2.0, eta = 0.5;
    const double cutoffs[] = {20.0, 40.0, 80.0};
    const std::size_t steps = 8000;
    for (const bool with_peak : {false, true}) {
        const KernelFunction kc = with_peak ? lorentz_kernel(BathModel({{0.5, 1.0, 0.3}})) : zero_kernel();
        const auto family = solve_cutoff_family(hr, eta, cutoffs, kc, unit(1, 0), t_max, steps);
        const auto limit = solve_renormalized(hr, eta, kc, unit(1, 0), t_max, steps);
        std::vector<double> at_one;
        for (const auto& member : family) {
            at_one.push_back(std::abs(member.states[steps / 2](0) - limit.states[steps / 2](0)));
            // Counterterm and kernel cancel: trajectories stay bounded.
            CHECK(sup_norm(member) <= 2.0);
        }
        CHECK(at_one[1] < at_one[0]);
        CHECK(at_one[2] < at_one[1]);
    }
}

TEST_CASE("cutoff family rejects steps coarser than 0.1/Omega") {
    const double cutoffs[] = {100.0};
    try {
        (void)solve_cutoff_family(SystemHamiltonian::diagonal({1.0}), 0.5, cutoffs, zero_kernel(), unit(1, 0), 1.0, 100);
        FAIL("expected StepTooCoarse");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::StepTooCoarse);
    }
}

TEST_CASE("oracle norm never exceeds the initial norm by more than 10h") {
    testing::InstanceGenerator gen(62);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::Index n = gen.integer(1, 3);
        const SystemHamiltonian hs(gen.hermitian(n, 2.0));
        const BathModel bath(gen.peaks(gen.integer(1, 3), 0.1, 2.0, 0.1, 2.0));
        const ComplexVector psi = gen.unit_vector(n);
        const auto traj = solve_integro_differential(hs, lorentz_kernel(bath), psi, 10.0, 1000);
        CHECK(sup_norm(traj) <= 1.0 + 10.0 * traj.step());
    }
}

TEST_CASE("comparison of a trajectory with itself is zero") {
    const auto a = solve_integro_differential(SystemHamiltonian::diagonal({1.0}), zero_kernel(), unit(1, 0), 1.0, 50);
    CHECK(compare_trajectories(a, a) == 0.0);
    CHECK(compare_trajectories(a, a, {TrajectoryNorm::L2}) == 0.0);
}

TEST_CASE("one-step shift measures h times the largest derivative") {
    const double e = 2.0;
    const auto a = solve_integro_differential(SystemHamiltonian::diagonal({e}), zero_kernel(), unit(1, 0), 2.0, 400);
    const double h = a.step();
    std::vector<double> times(a.grid.points().begin(), a.grid.points().end() - 1);
    const TimeGrid grid(times);
    const std::vector<ComplexVector> now(a.states.begin(), a.states.end() - 1);
    const std::vector<ComplexVector> next(a.states.begin() + 1, a.states.end());
    CHECK(compare_trajectories(grid, now, grid, next) == doctest::Approx(e * h).epsilon(1e-2));
}

TEST_CASE("comparison on nested grids uses the shared points") {
    const SystemHamiltonian hs = SystemHamiltonian::diagonal({0.7});
    const auto coarse = solve_integro_differential(hs, zero_kernel(), unit(1, 0), 1.0, 100);
    const auto fine = solve_integro_differential(hs, zero_kernel(), unit(1, 0), 1.0, 300);
    CHECK(compare_trajectories(coarse, fine) < 1e-4);
    const auto odd = solve_integro_differential(hs, zero_kernel(), unit(1, 0), 1.0, 70);
    CHECK_THROWS_AS(compare_trajectories(coarse, odd), Error);
}

TEST_CASE("comparison window restricts the time range") {
    const SystemHamiltonian hs = SystemHamiltonian::diagonal({0.7});
    auto a = solve_integro_differential(hs, zero_kernel(), unit(1, 0), 1.0, 100);
    auto b = a;
    b.states[10](0) += 1.0;
    CHECK(compare_trajectories(a, b) == doctest::Approx(1.0));
    CompareOptions late;
    late.t_from = 0.5;
    CHECK(compare_trajectories(a, b, late) == 0.0);
}
