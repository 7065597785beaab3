#pragma once

#include <cstddef>
#include <vector>

#include "qpp/matrix.hpp"
#include "qpp/qstate.hpp"

namespace qpp {

/// Outcomes with probability at or below this are dropped.
inline constexpr double kProbEps = 1e-12;
/// Tolerance for completeness, idempotence and orthonormality checks.
inline constexpr double kMeasureTol = 1e-9;

/// General measurement M_0,..2^n with sum_m M_m^dagger M_m = I.
/// Fewer than 2^n operators are padded with zero operators.
class MeasurementCollection {
public:
    MeasurementCollection(int n_qubits, std::vector<Matrix> operators);

    int n_qubits() const noexcept { return n_qubits_; }
    const std::vector<Matrix>& operators() const noexcept { return operators_; }

private:
    int n_qubits_;
    std::vector<Matrix> operators_;
};

/// Projective measurement O = sum_m lambda_m P_m. Outcome m is the index of
/// the eigenpair.
class Observable {
public:
    struct Eigenpair {
        double eigenvalue;
        Matrix projector;
    };

    explicit Observable(std::vector<Eigenpair> eigenpairs);

    int n_qubits() const noexcept { return n_qubits_; }
    const std::vector<Eigenpair>& eigenpairs() const noexcept { return eigenpairs_; }

private:
    int n_qubits_;
    std::vector<Eigenpair> eigenpairs_;
};

/// Orthonormal basis b_0,..2^n.
class MeasurementBasis {
public:
    explicit MeasurementBasis(std::vector<QuantumState> vectors);
    static MeasurementBasis computational(int n);

    int n_qubits() const noexcept { return vectors_.front().n_qubits(); }
    const std::vector<QuantumState>& vectors() const noexcept { return vectors_; }

private:
    std::vector<QuantumState> vectors_;
};

struct MeasurementOutcome {
    std::size_t outcome;
    QuantumState post_state;
    double probability;
};

/// Joint distribution of (r', psi'), ordered by outcome.
struct MeasurementOutcomeDist {
    std::vector<MeasurementOutcome> entries;

    double total_probability() const;
    /// Probability of outcome r (0 when absent).
    double probability_of(std::size_t r) const;
};

MeasurementOutcomeDist measure_general(const MeasurementCollection& m, const QuantumState& psi);
MeasurementOutcomeDist measure_observable(const Observable& o, const QuantumState& psi);
MeasurementOutcomeDist measure_in_basis(const MeasurementBasis& b, const QuantumState& psi);
MeasurementOutcomeDist measure_computational(const QuantumState& psi);

}  // namespace qpp
