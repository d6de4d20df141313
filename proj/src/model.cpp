// model.cpp

#include "nmdyn/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nmdyn {

SystemHamiltonian::SystemHamiltonian(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols())
        throw Error(ErrorKind::DimensionMismatch, "system Hamiltonian must be a non-empty square matrix");
    if (!matrix_.allFinite())
        throw Error(ErrorKind::InvalidArgument, "system Hamiltonian has non-finite entries");
    if (!is_hermitian(matrix_))
        throw Error(ErrorKind::NotHermitian, "system Hamiltonian is not Hermitian");
    // Project onto the exactly Hermitian part; idempotent for Hermitian input.
    matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
}

SystemHamiltonian SystemHamiltonian::diagonal(const std::vector<double>& energies) {
    ComplexMatrix m = ComplexMatrix::Zero(Eigen::Index(energies.size()), Eigen::Index(energies.size()));
    for (std::size_t i = 0; i < energies.size(); ++i) m(Eigen::Index(i), Eigen::Index(i)) = energies[i];
    return SystemHamiltonian(std::move(m));
}

BathModel::BathModel(std::vector<LorentzPeak> peaks, double eta, std::optional<double> cutoff)
    : peaks_(std::move(peaks)), eta_(eta), cutoff_(cutoff) {
    for (std::size_t j = 0; j < peaks_.size(); ++j) {
        const auto& p = peaks_[j];
        const std::string where = "peak " + std::to_string(j);
        if (!(p.g > 0.0) || !std::isfinite(p.g))
            throw Error(ErrorKind::InvalidArgument, where + ": coupling g must be > 0");
        if (!(p.gamma > 0.0) || !std::isfinite(p.gamma))
            throw Error(ErrorKind::InvalidArgument, where + ": width gamma must be > 0");
        if (!std::isfinite(p.epsilon))
            throw Error(ErrorKind::InvalidArgument, where + ": center epsilon must be finite");
    }
    if (!(eta_ >= 0.0) || !std::isfinite(eta_))
        throw Error(ErrorKind::InvalidArgument, "Ohmic coefficient eta must be >= 0");
    if (cutoff_ && (!(*cutoff_ > 0.0) || !std::isfinite(*cutoff_)))
        throw Error(ErrorKind::InvalidArgument, "cutoff must be > 0 when present");
}

double BathModel::peak_strength() const noexcept {
    double s = 0.0;
    for (const auto& p : peaks_) s += p.g * p.g / p.gamma;
    return s;
}

InitialState::InitialState(ComplexVector psi, Complex psi0) : psi_(std::move(psi)), psi0_(psi0) {
    if (psi_.size() == 0) throw Error(ErrorKind::DimensionMismatch, "initial excited amplitudes are empty");
    if (!psi_.allFinite() || !std::isfinite(psi0_.real()) || !std::isfinite(psi0_.imag()))
        throw Error(ErrorKind::InvalidArgument, "initial state has non-finite entries");
    const double total = psi_.squaredNorm() + std::norm(psi0_);
    if (std::abs(total - 1.0) > kNormalizationTolerance)
        throw Error(ErrorKind::InvalidArgument,
                    "initial state is not normalized (norm^2 = " + std::to_string(total) + ")");
}

InitialState InitialState::excited(Eigen::Index levels, Eigen::Index which) {
    ComplexVector psi = ComplexVector::Zero(levels);
    psi(which) = 1.0;
    return InitialState(std::move(psi), 0.0);
}

double spectral_density(const BathModel& bath, double omega) {
    double j = 0.0;
    for (const auto& p : bath.peaks()) {
        const double half = 0.5 * p.gamma;
        const double d = omega - p.epsilon;
        j += p.gamma * p.g * p.g / (half * half + d * d);
    }
    if (bath.eta() > 0.0) {
        double ohmic = bath.eta() * omega;
        if (bath.cutoff()) ohmic *= std::exp(-std::abs(omega) / *bath.cutoff());
        j += ohmic;
    }
    return j;
}

// iη d/dt f_Ω(t) with f_Ω(t) = Ω / (π(1 + (Ωt)²)), the exact transform of ηω e^{−|ω|/Ω}.
Complex ohmic_cutoff_correlation(double eta, double cutoff, double t) {
    const double wt = cutoff * t;
    const double denom = 1.0 + wt * wt;
    return {0.0, -eta * 2.0 * t * cutoff * cutoff * cutoff / (std::numbers::pi * denom * denom)};
}

Complex correlation(const BathModel& bath, double t) {
    if (bath.eta() > 0.0 && !bath.cutoff())
        throw Error(ErrorKind::OhmicWithoutCutoff,
                    "pure Ohmic reservoir has no pointwise correlation function; use the renormalized solver");
    Complex g(0.0, 0.0);
    for (const auto& p : bath.peaks())
        g += p.g * p.g * std::exp(Complex(-0.5 * p.gamma * std::abs(t), -p.epsilon * t));
    if (bath.eta() > 0.0) g += ohmic_cutoff_correlation(bath.eta(), *bath.cutoff(), t);
    return g;
}

SystemHamiltonian counterterm_shift(const SystemHamiltonian& h_r, double eta, double cutoff) {
    if (!(eta >= 0.0)) throw Error(ErrorKind::InvalidArgument, "eta must be >= 0");
    if (!(cutoff > 0.0)) throw Error(ErrorKind::InvalidArgument, "cutoff must be > 0");
    const double shift = eta * cutoff / std::numbers::pi;
    ComplexMatrix m = h_r.matrix();
    m.diagonal().array() += shift;
    return SystemHamiltonian(std::move(m));
}

Complex fourier_inverse(const BathModel& bath, double t, double omega_max, std::size_t steps) {
    if (steps == 0 || !(omega_max > 0.0))
        throw Error(ErrorKind::InvalidArgument, "quadrature needs omega_max > 0 and steps >= 1");
    if (bath.eta() > 0.0 && !bath.cutoff())
        throw Error(ErrorKind::OhmicWithoutCutoff, "Ohmic spectral density needs a cutoff for inversion");
    const double dw = 2.0 * omega_max / static_cast<double>(steps);
    // Blocked accumulation keeps rounding small for ~1e7 nodes.
    std::vector<Complex> partial;
    Complex block(0.0, 0.0);
    constexpr std::size_t kBlock = 4096;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double w = -omega_max + static_cast<double>(k) * dw;
        const double weight = (k == 0 || k == steps) ? 0.5 : 1.0;
        block += weight * spectral_density(bath, w) * std::exp(Complex(0.0, -w * t));
        if ((k + 1) % kBlock == 0) {
            partial.push_back(block);
            block = 0.0;
        }
    }
    partial.push_back(block);
    Complex sum(0.0, 0.0);
    for (const auto& b : partial) sum += b;
    return sum * dw / (2.0 * std::numbers::pi);
}

}  // namespace nmdyn
