// model.hpp — system Hamiltonian, reservoir model, initial state.
//
// Units: ħ = 1; every energy/frequency shares one unit and times its inverse.
// The reservoir is described by K Lorentz peaks plus an optional Ohmic part
//
//   J(ω) = Σ_j γ_j g_j² / ((γ_j/2)² + (ω − ε_j)²) + η ω [e^{−|ω|/Ω}]
//   G(t) = Σ_j g_j² e^{−γ_j|t|/2 − iε_j t}     [− iη 2tΩ³ / (π(1 + (Ωt)²)²)]
//
// where the bracketed factors are present only when a cutoff Ω is given.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "nmdyn/numerics.hpp"

namespace nmdyn {

// N×N Hermitian block of the system Hamiltonian on the excited subspace.
class SystemHamiltonian {
public:
    explicit SystemHamiltonian(ComplexMatrix matrix);

    static SystemHamiltonian diagonal(const std::vector<double>& energies);

    Eigen::Index levels() const noexcept { return matrix_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }

private:
    ComplexMatrix matrix_;
};

struct LorentzPeak {
    double g = 1.0;
    double gamma = 1.0;
    double epsilon = 0.0;

    bool operator==(const LorentzPeak&) const = default;
};

class BathModel {
public:
    BathModel() = default;
    BathModel(std::vector<LorentzPeak> peaks, double eta = 0.0, std::optional<double> cutoff = std::nullopt);

    const std::vector<LorentzPeak>& peaks() const noexcept { return peaks_; }
    std::size_t peak_count() const noexcept { return peaks_.size(); }
    double eta() const noexcept { return eta_; }
    const std::optional<double>& cutoff() const noexcept { return cutoff_; }

    // Lorentz part only: same peaks, η = 0, no cutoff.
    BathModel lorentz_part() const { return BathModel(peaks_); }
    // Σ_j g_j²/γ_j
    double peak_strength() const noexcept;

    bool operator==(const BathModel&) const = default;

private:
    std::vector<LorentzPeak> peaks_;
    double eta_ = 0.0;
    std::optional<double> cutoff_;
};

// Factorized initial state: ψ₀(0)|0⟩ + |ψ(0)⟩ with ‖ψ‖² + |ψ₀|² = 1.
class InitialState {
public:
    InitialState(ComplexVector psi, Complex psi0);

    static InitialState excited(Eigen::Index levels, Eigen::Index which);

    const ComplexVector& psi() const noexcept { return psi_; }
    Complex psi0() const noexcept { return psi0_; }
    Eigen::Index levels() const noexcept { return psi_.size(); }

private:
    ComplexVector psi_;
    Complex psi0_;
};

inline constexpr double kNormalizationTolerance = 1e-12;

double spectral_density(const BathModel& bath, double omega);

// Pointwise G(t). Throws OhmicWithoutCutoff when η > 0 and no cutoff is set.
Complex correlation(const BathModel& bath, double t);

// G_Ω(t) alone (the Ohmic-with-cutoff part).
Complex ohmic_cutoff_correlation(double eta, double cutoff, double t);

// H_r + (ηΩ/π)·I
SystemHamiltonian counterterm_shift(const SystemHamiltonian& h_r, double eta, double cutoff);

// Trapezoidal evaluation of ∫_{−ω_max}^{ω_max} dω/(2π) e^{−iωt} J(ω) with
// `steps` intervals. Only used to certify `correlation`.
Complex fourier_inverse(const BathModel& bath, double t, double omega_max, std::size_t steps);

}  // namespace nmdyn
