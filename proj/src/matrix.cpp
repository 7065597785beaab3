#include "qpp/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "qpp/errors.hpp"
#include "qpp/kernels.hpp"

namespace qpp {

Matrix::Matrix(std::size_t dim, std::vector<Amplitude> row_major) : dim_(dim), data_(std::move(row_major)) {
    if (data_.size() != dim * dim) throw DomainError("matrix data does not match dimension");
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::outer(std::span<const Amplitude> a, std::span<const Amplitude> b) {
    if (a.size() != b.size()) throw DomainError("outer product of vectors with different lengths");
    Matrix m(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t c = 0; c < b.size(); ++c) m(r, c) = a[r] * std::conj(b[c]);
    }
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    }
    return out;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (other.dim_ != dim_) throw DomainError("matrix dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix Matrix::operator*(const Matrix& other) const { return kernels::omp::matmul(*this, other); }

double max_abs_difference(const Matrix& a, const Matrix& b) {
    if (a.dim_ != b.dim_) throw DomainError("matrix dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data_.size(); ++i) worst = std::max(worst, std::abs(a.data_[i] - b.data_[i]));
    return worst;
}

}  // namespace qpp
