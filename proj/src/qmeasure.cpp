#include "qpp/qmeasure.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qpp/errors.hpp"
#include "qpp/kernels.hpp"

namespace qpp {

namespace {

int check_square_family(const std::vector<Matrix>& ms) {
    if (ms.empty()) throw ValidationError("empty operator family");
    const int n = qubits_for_dimension(ms.front().dim());
    check_qubit_count(n);
    for (const auto& m : ms) {
        if (m.dim() != ms.front().dim()) throw ValidationError("operators of different dimensions");
    }
    return n;
}

// (M psi / sqrt p, p) for p = <psi|M^dagger M psi> = |M psi|^2.
void push_outcome(MeasurementOutcomeDist& out, std::size_t r, std::vector<Amplitude> image) {
    const double p = kernels::omp::norm_squared(image);
    if (p <= kProbEps) return;
    const double scale = 1.0 / std::sqrt(p);
    for (auto& a : image) a *= scale;
    out.entries.push_back({r, QuantumState::from_amplitudes(std::move(image)), p});
}

void check_dims(int expected, const QuantumState& psi) {
    if (psi.n_qubits() != expected) {
        throw DomainError(fmt::format("{}-qubit measurement applied to {}-qubit state", expected, psi.n_qubits()));
    }
}

}  // namespace

MeasurementCollection::MeasurementCollection(int n_qubits, std::vector<Matrix> operators)
    : n_qubits_(n_qubits), operators_(std::move(operators)) {
    check_qubit_count(n_qubits);
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (operators_.size() > dim) {
        throw ValidationError(fmt::format("{} measurement operators for {} outcomes", operators_.size(), dim));
    }
    if (operators_.empty()) throw ValidationError("empty measurement collection");
    if (check_square_family(operators_) != n_qubits) throw ValidationError("operator dimension does not match register");
    operators_.resize(dim, Matrix(dim));
    Matrix sum(dim);
    for (const auto& m : operators_) sum += m.adjoint() * m;
    const double err = max_abs_difference(sum, Matrix::identity(dim));
    if (err > kMeasureTol) {
        throw ValidationError(fmt::format("completeness equation violated (max deviation {:.3g})", err));
    }
}

Observable::Observable(std::vector<Eigenpair> eigenpairs) : eigenpairs_(std::move(eigenpairs)) {
    std::vector<Matrix> projectors;
    projectors.reserve(eigenpairs_.size());
    for (const auto& e : eigenpairs_) projectors.push_back(e.projector);
    n_qubits_ = check_square_family(projectors);
    const std::size_t dim = std::size_t{1} << n_qubits_;
    if (projectors.size() > dim) throw ValidationError("more eigenpairs than outcomes");
    Matrix sum(dim);
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        const Matrix& p = projectors[i];
        if (max_abs_difference(p * p, p) > kMeasureTol) {
            throw ValidationError(fmt::format("projector {} is not idempotent", i));
        }
        if (max_abs_difference(p.adjoint(), p) > kMeasureTol) {
            throw ValidationError(fmt::format("projector {} is not Hermitian", i));
        }
        for (std::size_t j = i + 1; j < projectors.size(); ++j) {
            if (max_abs_difference(p * projectors[j], Matrix(dim)) > kMeasureTol) {
                throw ValidationError(fmt::format("projectors {} and {} are not orthogonal", i, j));
            }
        }
        sum += p;
    }
    if (max_abs_difference(sum, Matrix::identity(dim)) > kMeasureTol) {
        throw ValidationError("projectors do not sum to the identity");
    }
}

MeasurementBasis::MeasurementBasis(std::vector<QuantumState> vectors) : vectors_(std::move(vectors)) {
    if (vectors_.empty()) throw ValidationError("empty basis");
    const int n = vectors_.front().n_qubits();
    const std::size_t dim = std::size_t{1} << n;
    if (vectors_.size() != dim) {
        throw ValidationError(fmt::format("basis of {} vectors for a {}-dimensional space", vectors_.size(), dim));
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (vectors_[i].n_qubits() != n) throw ValidationError("basis vectors of different sizes");
        for (std::size_t j = i; j < dim; ++j) {
            const Amplitude ip = inner_product(vectors_[i], vectors_[j]);
            const double expected = i == j ? 1.0 : 0.0;
            if (std::abs(ip - expected) > kMeasureTol) {
                throw ValidationError(fmt::format("basis is not orthonormal at ({}, {})", i, j));
            }
        }
    }
}

MeasurementBasis MeasurementBasis::computational(int n) {
    check_qubit_count(n);
    std::vector<QuantumState> kets;
    for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) kets.push_back(QuantumState::basis(x, n));
    return MeasurementBasis(std::move(kets));
}

double MeasurementOutcomeDist::total_probability() const {
    double total = 0.0;
    for (const auto& e : entries) total += e.probability;
    return total;
}

double MeasurementOutcomeDist::probability_of(std::size_t r) const {
    for (const auto& e : entries) {
        if (e.outcome == r) return e.probability;
    }
    return 0.0;
}

MeasurementOutcomeDist measure_general(const MeasurementCollection& m, const QuantumState& psi) {
    check_dims(m.n_qubits(), psi);
    MeasurementOutcomeDist out;
    std::vector<Amplitude> image(psi.dim());
    for (std::size_t r = 0; r < m.operators().size(); ++r) {
        kernels::omp::matvec(m.operators()[r], psi.amplitudes(), image);
        push_outcome(out, r, image);
    }
    return out;
}

MeasurementOutcomeDist measure_observable(const Observable& o, const QuantumState& psi) {
    check_dims(o.n_qubits(), psi);
    MeasurementOutcomeDist out;
    std::vector<Amplitude> image(psi.dim());
    for (std::size_t r = 0; r < o.eigenpairs().size(); ++r) {
        kernels::omp::matvec(o.eigenpairs()[r].projector, psi.amplitudes(), image);
        push_outcome(out, r, image);
    }
    return out;
}

MeasurementOutcomeDist measure_in_basis(const MeasurementBasis& b, const QuantumState& psi) {
    check_dims(b.n_qubits(), psi);
    MeasurementOutcomeDist out;
    for (std::size_t r = 0; r < b.vectors().size(); ++r) {
        const double p = std::norm(inner_product(b.vectors()[r], psi));
        if (p > kProbEps) out.entries.push_back({r, b.vectors()[r], p});
    }
    return out;
}

MeasurementOutcomeDist measure_computational(const QuantumState& psi) {
    MeasurementOutcomeDist out;
    for (std::size_t r = 0; r < psi.dim(); ++r) {
        const double p = std::norm(psi[r]);
        if (p > kProbEps) out.entries.push_back({r, QuantumState::basis(r, psi.n_qubits()), p});
    }
    return out;
}

}  // namespace qpp
