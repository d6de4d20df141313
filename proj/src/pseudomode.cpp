// pseudomode.cpp

#include "nmdyn/pseudomode.hpp"

namespace nmdyn {

namespace {

constexpr double kPsdRelativeTolerance = 1e-10;

ComplexMatrix assemble(const SystemHamiltonian& h, const BathModel& bath) {
    const Eigen::Index n = h.levels();
    const auto k = static_cast<Eigen::Index>(bath.peak_count());
    const Complex c = renormalization_factor(bath.eta());
    const bool renormalized = bath.eta() != 0.0;

    ComplexMatrix m = ComplexMatrix::Zero((k + 1) * n, (k + 1) * n);
    if (renormalized)
        m.topLeftCorner(n, n) = c * h.matrix();
    else
        m.topLeftCorner(n, n) = h.matrix();

    for (Eigen::Index j = 1; j <= k; ++j) {
        const auto& peak = bath.peaks()[static_cast<std::size_t>(j - 1)];
        const Complex row_coupling = renormalized ? c * peak.g : Complex(peak.g);
        const Complex damped(peak.epsilon, -0.5 * peak.gamma);
        for (Eigen::Index i = 0; i < n; ++i) {
            m(i, j * n + i) = row_coupling;
            m(j * n + i, i) = peak.g;
            m(j * n + i, j * n + i) = damped;
        }
    }
    return m;
}

ComplexMatrix block_matrix(double energy, const BathModel& bath) {
    const auto k = static_cast<Eigen::Index>(bath.peak_count());
    const Complex c = renormalization_factor(bath.eta());
    const bool renormalized = bath.eta() != 0.0;

    ComplexMatrix b = ComplexMatrix::Zero(k + 1, k + 1);
    b(0, 0) = renormalized ? c * energy : Complex(energy);
    for (Eigen::Index j = 1; j <= k; ++j) {
        const auto& peak = bath.peaks()[static_cast<std::size_t>(j - 1)];
        b(0, j) = renormalized ? c * peak.g : Complex(peak.g);
        b(j, 0) = peak.g;
        b(j, j) = Complex(peak.epsilon, -0.5 * peak.gamma);
    }
    return b;
}

}  // namespace

Complex renormalization_factor(double eta) {
    if (eta == 0.0) return {1.0, 0.0};
    return Complex(1.0, 0.0) / Complex(1.0, 0.5 * eta);
}

EffectiveHamiltonian build_effective_hamiltonian(const SystemHamiltonian& h, const BathModel& bath) {
    if (bath.peak_count() == 0 && bath.eta() == 0.0)
        throw Error(ErrorKind::EmptyBath, "no reservoir: integrate the system Hamiltonian directly");
    return EffectiveHamiltonian{h.levels(), bath.peak_count(), bath.eta(), assemble(h, bath)};
}

OpticalPotential optical_potential(const ComplexMatrix& h_eff) {
    const Complex half_i(0.0, 0.5);
    return OpticalPotential{half_i * (h_eff - h_eff.adjoint())};
}

OpticalPotential optical_potential(const EffectiveHamiltonian& h_eff) {
    return optical_potential(h_eff.matrix);
}

std::vector<EffectiveBlock> block_decompose(const SystemHamiltonian& h, const BathModel& bath) {
    const auto eig = hermitian_eigen(h.matrix());
    std::vector<EffectiveBlock> blocks;
    blocks.reserve(static_cast<std::size_t>(h.levels()));
    for (Eigen::Index a = 0; a < h.levels(); ++a) {
        const double e = eig.eigenvalues(a);
        blocks.push_back(EffectiveBlock{a, e, block_matrix(e, bath)});
    }
    return blocks;
}

SpectralCheck check_dilation_spectral(const OpticalPotential& v) {
    const double tol = kPsdRelativeTolerance * (1.0 + v.matrix.norm());
    const double lo = min_eigenvalue(v.matrix);
    return SpectralCheck{lo >= -tol, lo, tol};
}

DilationReport check_dilation_closed_form(const SystemHamiltonian& h_r, const BathModel& bath) {
    DilationReport report;
    report.threshold = 0.25 * bath.eta() * bath.peak_strength();

    const auto eig = hermitian_eigen(h_r.matrix());
    report.min_eigenvalue_h = eig.eigenvalues(0);
    report.closed_form_pass = bath.eta() == 0.0 || report.min_eigenvalue_h >= report.threshold;

    const auto spectral = check_dilation_spectral(optical_potential(assemble(h_r, bath)));
    report.spectral_pass = spectral.pass;
    report.min_eigenvalue_v = spectral.min_eigenvalue;
    report.psd_tolerance = spectral.tolerance;

    for (Eigen::Index a = 0; a < h_r.levels(); ++a) {
        const double e = eig.eigenvalues(a);
        const auto v_block = optical_potential(block_matrix(e, bath));
        const auto block_check = check_dilation_spectral(v_block);
        report.per_block.push_back(BlockDilation{e, block_check.min_eigenvalue, block_check.pass});
    }
    return report;
}

}  // namespace nmdyn
