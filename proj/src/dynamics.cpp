// dynamics.cpp

#include "nmdyn/dynamics.hpp"

#include <limits>

namespace nmdyn {

namespace {

Trajectory package(const TimeGrid& grid, std::vector<ComplexVector> states, Eigen::Index levels,
                   std::size_t peaks) {
    Trajectory traj{grid, {}};
    traj.states.reserve(states.size());
    for (auto& s : states) traj.states.push_back(ExtendedState{levels, peaks, std::move(s)});
    return traj;
}

}  // namespace

Trajectory evolve(const EffectiveHamiltonian& h_eff, const InitialState& init, const TimeGrid& grid,
                  const EvolveOptions& options) {
    if (init.levels() != h_eff.levels)
        throw Error(ErrorKind::DimensionMismatch, "initial state and Hamiltonian level counts differ");

    ComplexVector y0 = ComplexVector::Zero(h_eff.dimension());
    if (h_eff.eta != 0.0 && options.scaling == InitialScaling::Renormalized)
        y0.head(h_eff.levels) = renormalization_factor(h_eff.eta) * init.psi();
    else
        y0.head(h_eff.levels) = init.psi();

    return package(grid, integrate_linear_ode(h_eff.matrix, y0, grid, options.ode), h_eff.levels,
                   h_eff.peaks);
}

Trajectory evolve_closed(const SystemHamiltonian& h, const InitialState& init, const TimeGrid& grid,
                         const OdeOptions& options) {
    if (init.levels() != h.levels())
        throw Error(ErrorKind::DimensionMismatch, "initial state and Hamiltonian level counts differ");
    return package(grid, integrate_linear_ode(h.matrix(), init.psi(), grid, options), h.levels(), 0);
}

Trajectory simulate(const SystemHamiltonian& h, const BathModel& bath, const InitialState& init,
                    const TimeGrid& grid, const EvolveOptions& options) {
    if (bath.peak_count() == 0 && bath.eta() == 0.0) return evolve_closed(h, init, grid, options.ode);
    return evolve(build_effective_hamiltonian(h, bath), init, grid, options);
}

std::vector<ComplexVector> system_parts(const Trajectory& traj) {
    std::vector<ComplexVector> out;
    out.reserve(traj.states.size());
    for (const auto& s : traj.states) out.emplace_back(s.system_part());
    return out;
}

ReducedDensityMatrix reduced_density(const Eigen::Ref<const ComplexVector>& psi_t, const InitialState& init) {
    const Eigen::Index n = psi_t.size();
    if (n != init.levels())
        throw Error(ErrorKind::DimensionMismatch, "state and initial condition level counts differ");
    const double norm2 = psi_t.squaredNorm();
    if (std::sqrt(norm2) > 1.0 + kNormSlack)
        throw Error(ErrorKind::NormExceeded, "excited-state norm exceeds 1; integration failed or model is not dilatable");

    ComplexMatrix rho(n + 1, n + 1);
    const Complex psi0 = init.psi0();
    rho(0, 0) = 1.0 - norm2;
    for (Eigen::Index i = 0; i < n; ++i) {
        rho(0, i + 1) = psi0 * std::conj(psi_t(i));
        rho(i + 1, 0) = std::conj(psi0) * psi_t(i);
        for (Eigen::Index j = 0; j < n; ++j) rho(i + 1, j + 1) = psi_t(i) * std::conj(psi_t(j));
    }
    return ReducedDensityMatrix{std::move(rho)};
}

ReducedDensityMatrix reduced_density(const ExtendedState& state, const InitialState& init) {
    return reduced_density(state.system_part(), init);
}

std::vector<Observation> observables(const Trajectory& traj, const InitialState& init) {
    std::vector<Observation> out;
    out.reserve(traj.states.size());
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const auto psi = traj.states[k].system_part();
        const double excited = psi.squaredNorm();
        out.push_back(Observation{traj.grid[k], excited, 1.0 - excited, reduced_density(psi, init)});
    }
    return out;
}

DensityDiagnostics diagnose(const ReducedDensityMatrix& rho) {
    DensityDiagnostics d;
    d.asymmetry = hermiticity_defect(rho.matrix);
    d.trace_deviation = std::abs(rho.matrix.trace() - 1.0);
    const auto eig = hermitian_eigen(rho.matrix);
    const Eigen::Index m = eig.eigenvalues.size();
    d.min_eigenvalue = eig.eigenvalues(0);
    d.third_eigenvalue = m >= 3 ? eig.eigenvalues(m - 3) : 0.0;
    return d;
}

double max_norm_increase(const Trajectory& traj) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < traj.states.size(); ++k)
        worst = std::max(worst, traj.states[k].data.norm() - traj.states[k - 1].data.norm());
    return traj.states.size() < 2 ? 0.0 : worst;
}

}  // namespace nmdyn
