// oracle.hpp — direct solvers for the memory equation
//
//   d/dt ψ(t) = −i H ψ(t) − ∫₀ᵗ ds G(t − s) ψ(s)
//
// on a uniform grid, independent of the pseudomode construction. The memory
// integral uses the product trapezoidal rule (ψ piecewise linear, kernel
// moments per lag from Gauss–Legendre), time stepping is an explicit Euler
// predictor with one trapezoidal corrector. Global error is O(h²).

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nmdyn/dynamics.hpp"

namespace nmdyn {

using KernelFunction = std::function<Complex(double)>;

struct OracleTrajectory {
    TimeGrid grid;                       // uniform
    std::vector<ComplexVector> states;   // ψ(t_k)

    double step() const { return grid.size() > 1 ? grid[1] - grid[0] : 0.0; }
};

OracleTrajectory solve_integro_differential(const SystemHamiltonian& h, const KernelFunction& kernel,
                                            const ComplexVector& psi0, double t_max, std::size_t steps);

// Renormalized equation: generator and kernel scaled by 1/(1 + iη/2), start
// vector ψ(0)/(1 + iη/2). Reduces exactly to solve_integro_differential at η = 0.
OracleTrajectory solve_renormalized(const SystemHamiltonian& h_r, double eta, const KernelFunction& kernel_c,
                                    const ComplexVector& psi0, double t_max, std::size_t steps);

// Finite-cutoff family: for each Ω solves the memory equation with
// H_r + ηΩ/π and kernel G_Ω + G_c. Throws StepTooCoarse if h > 0.1/Ω.
std::vector<OracleTrajectory> solve_cutoff_family(const SystemHamiltonian& h_r, double eta,
                                                  std::span<const double> cutoffs, const KernelFunction& kernel_c,
                                                  const ComplexVector& psi0, double t_max, std::size_t steps);

inline constexpr double kMaxCutoffStepRatio = 0.1;

// Runs `solve` at steps, 2·steps and 4·steps and removes the h² and h³ error
// terms; the result lives on the `steps` grid.
OracleTrajectory richardson_extrapolate(const std::function<OracleTrajectory(std::size_t)>& solve,
                                        std::size_t steps);

enum class TrajectoryNorm { Sup, L2 };

struct CompareOptions {
    TrajectoryNorm norm = TrajectoryNorm::Sup;
    double t_from = -std::numeric_limits<double>::infinity();
    double t_to = std::numeric_limits<double>::infinity();
};

// Norm of ‖a(t) − b(t)‖₂ over the grid points the two trajectories share.
// Every point of the coarser grid must appear in the finer one (GridMismatch otherwise).
double compare_trajectories(const TimeGrid& grid_a, std::span<const ComplexVector> a, const TimeGrid& grid_b,
                            std::span<const ComplexVector> b, const CompareOptions& options = {});
double compare_trajectories(const OracleTrajectory& a, const OracleTrajectory& b,
                            const CompareOptions& options = {});
double compare_trajectories(const Trajectory& a, const OracleTrajectory& b, const CompareOptions& options = {});

// Convenience kernels.
KernelFunction lorentz_kernel(const BathModel& bath);
KernelFunction zero_kernel();

}  // namespace nmdyn
