// pseudomode.hpp — effective non-Hermitian Hamiltonian on ⊕^{K+1} C^N, its
// optical potential, the eigenbasis block decomposition and the Markovian
// dilation certificate.
//
// With c = 1/(1 + iη/2) and H_r the (renormalized) system Hamiltonian:
//
//         ⎡ c·H_r   c·g_1 I   …   c·g_K I         ⎤
//   H_eff=⎢ g_1 I   (ε_1 − iγ_1/2) I              ⎥
//         ⎢  ⋮                 ⋱                  ⎥
//         ⎣ g_K I                 (ε_K − iγ_K/2) I⎦
//
// For η = 0 this reduces to c = 1 and H_r = H_S.

#pragma once

#include <vector>

#include "nmdyn/model.hpp"

namespace nmdyn {

// 1/(1 + iη/2); exactly 1 when η = 0.
Complex renormalization_factor(double eta);

struct EffectiveHamiltonian {
    Eigen::Index levels = 0;   // N
    std::size_t peaks = 0;     // K
    double eta = 0.0;
    ComplexMatrix matrix;      // (K+1)N square

    Eigen::Index dimension() const noexcept { return matrix.rows(); }
};

struct OpticalPotential {
    ComplexMatrix matrix;
};

struct EffectiveBlock {
    Eigen::Index alpha = 0;
    double energy = 0.0;       // E_α, eigenvalue of H_r
    ComplexMatrix matrix;      // (K+1) square
};

struct SpectralCheck {
    bool pass = false;
    double min_eigenvalue = 0.0;
    double tolerance = 0.0;
};

struct BlockDilation {
    double energy = 0.0;
    double min_eigenvalue = 0.0;
    bool pass = false;
};

struct DilationReport {
    bool spectral_pass = false;
    double min_eigenvalue_v = 0.0;
    double psd_tolerance = 0.0;
    bool closed_form_pass = false;
    double threshold = 0.0;          // (η/4) Σ g_j²/γ_j
    double min_eigenvalue_h = 0.0;   // smallest E_α
    std::vector<BlockDilation> per_block;
};

// Throws EmptyBath when K = 0 and η = 0.
EffectiveHamiltonian build_effective_hamiltonian(const SystemHamiltonian& h, const BathModel& bath);

// V = (i/2)(H_eff − H_eff†)
OpticalPotential optical_potential(const EffectiveHamiltonian& h_eff);
OpticalPotential optical_potential(const ComplexMatrix& h_eff);

std::vector<EffectiveBlock> block_decompose(const SystemHamiltonian& h, const BathModel& bath);

// Non-negativity within 1e-10·(1 + ‖V‖_F).
SpectralCheck check_dilation_spectral(const OpticalPotential& v);

DilationReport check_dilation_closed_form(const SystemHamiltonian& h_r, const BathModel& bath);

}  // namespace nmdyn
