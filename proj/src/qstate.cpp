#include "qpp/qstate.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "qpp/errors.hpp"
#include "qpp/kernels.hpp"

namespace qpp {

void check_qubit_count(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw CapacityError(fmt::format("qubit count {} outside supported range 1..{}", n, kMaxQubits));
    }
}

int qubits_for_dimension(std::size_t dim) {
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw DomainError(fmt::format("dimension {} is not a power of two >= 2", dim));
    }
    int n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    return n;
}

QuantumState QuantumState::basis(std::size_t x, int n) {
    check_qubit_count(n);
    const std::size_t dim = std::size_t{1} << n;
    if (x >= dim) {
        throw DomainError(fmt::format("basis index {} out of range 0,..{}", x, dim));
    }
    std::vector<Amplitude> amps(dim);
    amps[x] = 1.0;
    return QuantumState(n, std::move(amps));
}

QuantumState QuantumState::from_amplitudes(std::vector<Amplitude> amplitudes) {
    const int n = qubits_for_dimension(amplitudes.size());
    check_qubit_count(n);
    for (const auto& a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw DomainError("non-finite amplitude");
        }
    }
    const double norm = kernels::omp::norm_squared(amplitudes);
    if (std::abs(norm - 1.0) > kNormTol) {
        throw DomainError(fmt::format("state is not normalized (sum |psi x|^2 = {:.17g})", norm));
    }
    return QuantumState(n, std::move(amplitudes));
}

double QuantumState::norm_squared() const { return kernels::omp::norm_squared(amplitudes_); }

Amplitude inner_product(const QuantumState& psi, const QuantumState& phi) {
    if (psi.n_qubits() != phi.n_qubits()) {
        throw DomainError(fmt::format("inner product of {}- and {}-qubit states", psi.n_qubits(), phi.n_qubits()));
    }
    return kernels::omp::inner_product(psi.amplitudes(), phi.amplitudes());
}

QuantumState tensor(const QuantumState& psi, const QuantumState& phi) {
    const int total = psi.n_qubits() + phi.n_qubits();
    if (total > kMaxQubits) {
        throw CapacityError(fmt::format("tensor product needs {} qubits (max {})", total, kMaxQubits));
    }
    const std::size_t low = phi.dim();
    std::vector<Amplitude> out(psi.dim() * low);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = psi[i / low] * phi[i % low];
    }
    return QuantumState::from_amplitudes(std::move(out));
}

double max_abs_difference(std::span<const Amplitude> a, std::span<const Amplitude> b) {
    if (a.size() != b.size()) throw DomainError("length mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

bool state_approx_eq(const QuantumState& psi, const QuantumState& phi, double tol) {
    if (psi.n_qubits() != phi.n_qubits()) {
        throw DomainError("comparing states of different sizes");
    }
    return max_abs_difference(psi.amplitudes(), phi.amplitudes()) <= tol;
}

}  // namespace qpp
