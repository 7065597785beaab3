#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "qpp/matrix.hpp"
#include "qpp/qstate.hpp"

namespace qpp {

/// Largest register for which an operator is materialized as a dense matrix.
inline constexpr int kMaxDenseQubits = 8;

/// Linear map on the state space of an n-qubit register.
///
/// Structured forms (Hadamard layer, phase oracle, inversion about mean) are
/// applied functionally in O(2^n) or O(n 2^n) and are unitary by
/// construction. A dense matrix is the fallback; it is checked for
/// unitarity when built through `dense`. Operators are immutable and cheap
/// to copy.
///
/// Only H, U_f, M and I are built in. Further gates can be added as new
/// forms with an `apply_raw` case and an `adjoint` rule.
class Operator {
public:
    enum class Kind { Identity, Dense, HadamardAll, PhaseOracle, InversionAboutMean, Composed, TensorProd };

    static Operator identity(int n);
    static Operator hadamard_all(int n);
    /// U_f with (U_f psi) x = (-1)^(f x) psi x; table length 2^n, entries 0/1.
    static Operator phase_oracle(std::vector<std::uint8_t> table);
    /// M psi = lambda x . 2 * (sum psi / N) - psi x
    static Operator inversion_about_mean(int n);
    /// Unitary dense matrix; ValidationError when U^dagger U != I within 1e-9.
    static Operator dense(Matrix m);
    /// Arbitrary dense linear map (measurement operators, tests). Not checked.
    static Operator linear_map(Matrix m);

    int n_qubits() const noexcept;
    std::size_t dim() const noexcept { return std::size_t{1} << n_qubits(); }
    Kind kind() const noexcept;

    /// Applies the map to an arbitrary (not necessarily unit) vector.
    std::vector<Amplitude> apply_raw(std::span<const Amplitude> in) const;
    /// Dense materialization, column x = U |x>. Limited to kMaxDenseQubits.
    Matrix to_dense() const;

    /// Operands of Composed (in application order) and TensorProd (high, low).
    std::span<const Operator> operands() const noexcept;
    /// Truth table of a PhaseOracle; empty for other kinds.
    std::span<const std::uint8_t> oracle_table() const noexcept;
    /// Matrix of a Dense operator; nullptr otherwise.
    const Matrix* matrix() const noexcept;

    struct Impl;

private:
    explicit Operator(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    friend Operator compose(const Operator& u, const Operator& v);
    friend Operator tensor_op(const Operator& u, const Operator& v);
    friend Operator adjoint(const Operator& u);

    std::shared_ptr<const Impl> impl_;
};

/// psi := U psi. The result must satisfy the normalization invariant.
QuantumState apply(const Operator& u, const QuantumState& psi);

/// The operator with <psi|U phi> = <U^dagger psi|phi>.
Operator adjoint(const Operator& u);

/// u after v: apply(compose(u, v), psi) = apply(u, apply(v, psi)).
Operator compose(const Operator& u, const Operator& v);

/// (U (x) V)(psi (x) phi) = (U psi) (x) (V phi); U acts on the high qubits.
Operator tensor_op(const Operator& u, const Operator& v);

/// max-entry distance of U^dagger U from I is at most tol. CapacityError
/// above kMaxDenseQubits.
bool is_unitary(const Operator& u, double tol = 1e-9);

}  // namespace qpp
