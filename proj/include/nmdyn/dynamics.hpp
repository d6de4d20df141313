// dynamics.hpp — integration of d/dt ψ̃ = −i H_eff ψ̃ and reconstruction of the
// (N+1)×(N+1) reduced density matrix
//
//   ρ_S(t) = ⎡ 1 − ‖ψ(t)‖²        ψ₀(0) ⟨ψ(t)| ⎤
//            ⎣ ψ₀(0)* |ψ(t)⟩     |ψ(t)⟩⟨ψ(t)| ⎦
//
// Index 0 is the ground state.

#pragma once

#include <span>
#include <vector>

#include "nmdyn/pseudomode.hpp"

namespace nmdyn {

// |ψ⟩ ⊕ |φ_1⟩ ⊕ … ⊕ |φ_K⟩
struct ExtendedState {
    Eigen::Index levels = 0;
    std::size_t peaks = 0;
    ComplexVector data;

    auto system_part() const { return data.head(levels); }
    auto pseudomode(std::size_t j) const {
        return data.segment(static_cast<Eigen::Index>(j + 1) * levels, levels);
    }
};

struct Trajectory {
    TimeGrid grid;
    std::vector<ExtendedState> states;
};

// Renormalized: for η > 0 the system part starts from ψ(0)/(1 + iη/2).
enum class InitialScaling { Renormalized, Unrenormalized };

struct EvolveOptions {
    OdeOptions ode;
    InitialScaling scaling = InitialScaling::Renormalized;
};

Trajectory evolve(const EffectiveHamiltonian& h_eff, const InitialState& init, const TimeGrid& grid,
                  const EvolveOptions& options = {});

// K = 0, η = 0: plain unitary evolution under H_S.
Trajectory evolve_closed(const SystemHamiltonian& h, const InitialState& init, const TimeGrid& grid,
                         const OdeOptions& options = {});

// Chooses evolve_closed for an empty reservoir and the pseudomode path otherwise.
Trajectory simulate(const SystemHamiltonian& h, const BathModel& bath, const InitialState& init,
                    const TimeGrid& grid, const EvolveOptions& options = {});

std::vector<ComplexVector> system_parts(const Trajectory& traj);

struct ReducedDensityMatrix {
    ComplexMatrix matrix;
};

inline constexpr double kNormSlack = 1e-9;
inline constexpr double kDensityTolerance = 1e-10;

// Throws NormExceeded when ‖ψ(t)‖ > 1 + 1e-9.
ReducedDensityMatrix reduced_density(const Eigen::Ref<const ComplexVector>& psi_t, const InitialState& init);
ReducedDensityMatrix reduced_density(const ExtendedState& state, const InitialState& init);

struct Observation {
    double t = 0.0;
    double excited_population = 0.0;
    double ground_population = 0.0;
    ReducedDensityMatrix rho;
};

std::vector<Observation> observables(const Trajectory& traj, const InitialState& init);

struct DensityDiagnostics {
    double asymmetry = 0.0;         // max |ρ − ρ†|
    double trace_deviation = 0.0;   // |tr ρ − 1|
    double min_eigenvalue = 0.0;
    double third_eigenvalue = 0.0;  // third largest, 0 when N + 1 < 3

    bool ok(double tol = kDensityTolerance) const {
        return asymmetry < tol && trace_deviation < tol && min_eigenvalue > -tol && third_eigenvalue < tol;
    }
};

DensityDiagnostics diagnose(const ReducedDensityMatrix& rho);

// Largest step-to-step growth of ‖ψ̃(t_k)‖ along the trajectory (≤ 0 when non-increasing).
double max_norm_increase(const Trajectory& traj);

}  // namespace nmdyn
