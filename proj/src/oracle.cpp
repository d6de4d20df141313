// oracle.cpp

#include "nmdyn/oracle.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace nmdyn {

namespace {

// 8-point Gauss–Legendre on [-1, 1].
constexpr std::array<double, 4> kGaussNodes = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                               0.9602898564975363};
constexpr std::array<double, 4> kGaussWeights = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                                 0.1012285362903763};

struct LagWeights {
    std::vector<Complex> a;   // weight of the older end of interval l
    std::vector<Complex> b;   // weight of the newer end
};

// A_l = ∫_{lh}^{(l+1)h} G(u)(u − lh)/h du,  B_l = ∫ G(u)((l+1)h − u)/h du.
LagWeights lag_weights(const KernelFunction& kernel, double h, std::size_t count) {
    LagWeights w{std::vector<Complex>(count), std::vector<Complex>(count)};
    for (std::size_t l = 0; l < count; ++l) {
        const double lo = static_cast<double>(l) * h;
        Complex a(0.0, 0.0), b(0.0, 0.0);
        for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
            for (const double sign : {-1.0, 1.0}) {
                const double x = 0.5 * (1.0 + sign * kGaussNodes[q]);  // position in [0, 1]
                const Complex g = kernel(lo + x * h) * (0.5 * kGaussWeights[q] * h);
                a += g * x;
                b += g * (1.0 - x);
            }
        }
        w.a[l] = a;
        w.b[l] = b;
    }
    return w;
}

// dψ/dt = −i A ψ − κ ∫ G ψ, ψ(0) = start.
OracleTrajectory solve_memory_equation(const ComplexMatrix& generator, Complex kernel_scale, bool scaled,
                                       const KernelFunction& kernel, const ComplexVector& start, double t_max,
                                       std::size_t steps) {
    if (steps < 10) throw Error(ErrorKind::InvalidArgument, "oracle needs at least 10 steps");
    if (!(t_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_max must be > 0");
    if (generator.rows() != start.size())
        throw Error(ErrorKind::DimensionMismatch, "Hamiltonian and initial vector dimensions differ");

    const Eigen::Index n = start.size();
    const auto total = static_cast<Eigen::Index>(steps);
    const TimeGrid grid = TimeGrid::uniform(t_max, steps);
    const double h = t_max / static_cast<double>(steps);

    LagWeights lw = lag_weights(kernel, h, steps);
    if (scaled) {
        for (auto& x : lw.a) x *= kernel_scale;
        for (auto& x : lw.b) x *= kernel_scale;
    }
    const Complex b0 = lw.b[0];
    // combined[total − l] = A_{l−1} + B_l for lag l ≥ 1, laid out so that the
    // weights for ψ_1 … ψ_{m−1} at step m form one contiguous segment.
    ComplexVector combined = ComplexVector::Zero(total);
    for (Eigen::Index l = 1; l < total; ++l)
        combined(total - l) = lw.a[std::size_t(l - 1)] + lw.b[std::size_t(l)];

    const ComplexMatrix minus_i_gen = Complex(0.0, -1.0) * generator;
    ComplexMatrix history(n, total + 1);
    history.col(0) = start;

    // Memory sum at step m without its ψ_m term.
    auto history_sum = [&](Eigen::Index m) -> ComplexVector {
        ComplexVector s = lw.a[std::size_t(m - 1)] * history.col(0);
        if (m >= 2) s.noalias() += history.middleCols(1, m - 1) * combined.segment(total - m + 1, m - 1);
        return s;
    };
    auto rate = [&](const ComplexVector& psi, const ComplexVector& hist) -> ComplexVector {
        return minus_i_gen * psi - (hist + b0 * psi);
    };

    ComplexVector f_now = minus_i_gen * start;   // no memory at t = 0
    for (Eigen::Index m = 0; m < total; ++m) {
        const ComplexVector psi = history.col(m);
        const ComplexVector hist = history_sum(m + 1);
        const ComplexVector predicted = psi + h * f_now;
        const ComplexVector corrected = psi + (0.5 * h) * (f_now + rate(predicted, hist));
        history.col(m + 1) = corrected;
        f_now = rate(corrected, hist);
    }

    OracleTrajectory out{grid, {}};
    out.states.reserve(steps + 1);
    for (Eigen::Index k = 0; k <= total; ++k) out.states.emplace_back(history.col(k));
    return out;
}

}  // namespace

OracleTrajectory solve_integro_differential(const SystemHamiltonian& h, const KernelFunction& kernel,
                                            const ComplexVector& psi0, double t_max, std::size_t steps) {
    return solve_memory_equation(h.matrix(), Complex(1.0, 0.0), false, kernel, psi0, t_max, steps);
}

OracleTrajectory solve_renormalized(const SystemHamiltonian& h_r, double eta, const KernelFunction& kernel_c,
                                    const ComplexVector& psi0, double t_max, std::size_t steps) {
    if (!(eta >= 0.0)) throw Error(ErrorKind::InvalidArgument, "eta must be >= 0");
    if (eta == 0.0) return solve_integro_differential(h_r, kernel_c, psi0, t_max, steps);
    const Complex c = renormalization_factor(eta);
    const ComplexMatrix gen = c * h_r.matrix();
    const ComplexVector start = c * psi0;
    return solve_memory_equation(gen, c, true, kernel_c, start, t_max, steps);
}

std::vector<OracleTrajectory> solve_cutoff_family(const SystemHamiltonian& h_r, double eta,
                                                  std::span<const double> cutoffs, const KernelFunction& kernel_c,
                                                  const ComplexVector& psi0, double t_max, std::size_t steps) {
    const double h = t_max / static_cast<double>(steps);
    for (const double omega : cutoffs) {
        if (!(omega > 0.0)) throw Error(ErrorKind::InvalidArgument, "cutoff must be > 0");
        if (h > kMaxCutoffStepRatio / omega)
            throw Error(ErrorKind::StepTooCoarse, "oracle step exceeds 0.1/Omega for Omega = " + std::to_string(omega));
    }
    std::vector<OracleTrajectory> out;
    out.reserve(cutoffs.size());
    for (const double omega : cutoffs) {
        const SystemHamiltonian shifted = counterterm_shift(h_r, eta, omega);
        KernelFunction kernel = [&kernel_c, eta, omega](double t) {
            return ohmic_cutoff_correlation(eta, omega, t) + kernel_c(t);
        };
        out.push_back(solve_integro_differential(shifted, kernel, psi0, t_max, steps));
    }
    return out;
}

OracleTrajectory richardson_extrapolate(const std::function<OracleTrajectory(std::size_t)>& solve,
                                        std::size_t steps) {
    const OracleTrajectory coarse = solve(steps);
    const OracleTrajectory mid = solve(2 * steps);
    const OracleTrajectory fine = solve(4 * steps);
    if (coarse.states.size() != steps + 1 || mid.states.size() != 2 * steps + 1 ||
        fine.states.size() != 4 * steps + 1)
        throw Error(ErrorKind::GridMismatch, "solver did not return the requested grid");

    OracleTrajectory out{coarse.grid, {}};
    out.states.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        // Each level removes one power: (4·y(h/2) − y(h))/3 kills h², (8·r(h/2) − r(h))/7 kills h³.
        const ComplexVector r_coarse = (4.0 * mid.states[2 * k] - coarse.states[k]) / 3.0;
        const ComplexVector r_fine = (4.0 * fine.states[4 * k] - mid.states[2 * k]) / 3.0;
        out.states.push_back((8.0 * r_fine - r_coarse) / 7.0);
    }
    return out;
}

double compare_trajectories(const TimeGrid& grid_a, std::span<const ComplexVector> a, const TimeGrid& grid_b,
                            std::span<const ComplexVector> b, const CompareOptions& options) {
    if (grid_a.size() != a.size() || grid_b.size() != b.size())
        throw Error(ErrorKind::GridMismatch, "trajectory length differs from its grid");

    const bool a_coarse = grid_a.size() <= grid_b.size();
    const TimeGrid& gc = a_coarse ? grid_a : grid_b;
    const TimeGrid& gf = a_coarse ? grid_b : grid_a;
    const auto sc = a_coarse ? a : b;
    const auto sf = a_coarse ? b : a;
    const double scale = std::max(1.0, std::abs(gf.back()));
    const double match_tol = 1e-9 * scale;

    std::vector<double> times;
    std::vector<double> diffs;
    std::size_t j = 0;
    for (std::size_t i = 0; i < gc.size(); ++i) {
        while (j < gf.size() && gf[j] < gc[i] - match_tol) ++j;
        if (j == gf.size() || std::abs(gf[j] - gc[i]) > match_tol)
            throw Error(ErrorKind::GridMismatch, "grid point t = " + std::to_string(gc[i]) + " has no counterpart");
        if (sc[i].size() != sf[j].size())
            throw Error(ErrorKind::DimensionMismatch, "trajectory state dimensions differ");
        if (gc[i] >= options.t_from && gc[i] <= options.t_to) {
            times.push_back(gc[i]);
            diffs.push_back((sc[i] - sf[j]).norm());
        }
    }
    if (diffs.empty()) return 0.0;

    if (options.norm == TrajectoryNorm::Sup) return *std::max_element(diffs.begin(), diffs.end());
    double integral = 0.0;
    for (std::size_t k = 1; k < diffs.size(); ++k)
        integral += 0.5 * (times[k] - times[k - 1]) * (diffs[k] * diffs[k] + diffs[k - 1] * diffs[k - 1]);
    return std::sqrt(integral);
}

double compare_trajectories(const OracleTrajectory& a, const OracleTrajectory& b, const CompareOptions& options) {
    return compare_trajectories(a.grid, a.states, b.grid, b.states, options);
}

double compare_trajectories(const Trajectory& a, const OracleTrajectory& b, const CompareOptions& options) {
    const auto parts = system_parts(a);
    return compare_trajectories(a.grid, parts, b.grid, b.states, options);
}

KernelFunction lorentz_kernel(const BathModel& bath) {
    return [lorentz = bath.lorentz_part()](double t) { return correlation(lorentz, t); };
}

KernelFunction zero_kernel() {
    return [](double) { return Complex(0.0, 0.0); };
}

}  // namespace nmdyn
