#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qpp {

using Amplitude = std::complex<double>;

inline constexpr int kMaxQubits = 12;
/// Tolerance on sum |psi x|^2 = 1 for every stored state.
inline constexpr double kNormTol = 1e-9;

/// Throws CapacityError unless 1 <= n <= kMaxQubits.
void check_qubit_count(int n);

/// log2 of a power-of-two dimension; DomainError otherwise.
int qubits_for_dimension(std::size_t dim);

/// Pure state of an n-qubit register: a unit-norm function 0,..2^n -> C.
///
/// Instances are immutable and always satisfy the normalization invariant;
/// there is no implicit renormalization.
class QuantumState {
public:
    /// The computational basis ket |x> on n qubits.
    static QuantumState basis(std::size_t x, int n);
    static QuantumState zero(int n) { return basis(0, n); }
    /// Validates length (a power of two within capacity), finiteness and norm.
    static QuantumState from_amplitudes(std::vector<Amplitude> amplitudes);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return amplitudes_.size(); }
    std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
    Amplitude operator[](std::size_t x) const { return amplitudes_[x]; }
    double norm_squared() const;

private:
    QuantumState(int n, std::vector<Amplitude> amplitudes)
        : n_qubits_(n), amplitudes_(std::move(amplitudes)) {}

    int n_qubits_;
    std::vector<Amplitude> amplitudes_;
};

/// <psi|phi> = sum_x conj(psi x) * phi x.
Amplitude inner_product(const QuantumState& psi, const QuantumState& phi);

/// (psi (x) phi) i = psi(i div 2^n) * phi(i mod 2^n), n = phi.n_qubits().
QuantumState tensor(const QuantumState& psi, const QuantumState& phi);

/// Componentwise comparison, max_x |psi x - phi x| <= tol. No global-phase
/// quotient: states are functions, not rays.
bool state_approx_eq(const QuantumState& psi, const QuantumState& phi, double tol);

double max_abs_difference(std::span<const Amplitude> a, std::span<const Amplitude> b);

}  // namespace qpp
