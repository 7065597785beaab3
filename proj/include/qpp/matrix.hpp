#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qpp/qstate.hpp"

namespace qpp {

/// Square complex matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
    Matrix(std::size_t dim, std::vector<Amplitude> row_major);

    static Matrix identity(std::size_t dim);
    /// |a><b|
    static Matrix outer(std::span<const Amplitude> a, std::span<const Amplitude> b);

    std::size_t dim() const noexcept { return dim_; }
    Amplitude& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    Amplitude operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
    std::span<const Amplitude> row(std::size_t r) const { return {data_.data() + r * dim_, dim_}; }
    std::span<const Amplitude> data() const noexcept { return data_; }

    Matrix adjoint() const;
    Matrix& operator+=(const Matrix& other);
    Matrix operator*(const Matrix& other) const;

    /// max |a_rc - b_rc|
    friend double max_abs_difference(const Matrix& a, const Matrix& b);

private:
    std::size_t dim_ = 0;
    std::vector<Amplitude> data_;
};

}  // namespace qpp
