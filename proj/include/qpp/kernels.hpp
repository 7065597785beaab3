#pragma once

// State-vector kernels. Every kernel exists twice with identical signatures:
// `serial` is the plain reference loop kept for testing, `omp` is the
// OpenMP-parallel version the library calls. Reductions in `omp` sum fixed
// blocks and then combine partials in block order, so results do not depend
// on the thread count.

#include <cstddef>
#include <cstdint>
#include <span>

#include "qpp/matrix.hpp"
#include "qpp/qstate.hpp"

namespace qpp::kernels {

/// Below this many amplitudes the OpenMP kernels stay on one thread.
inline constexpr std::size_t kParallelThreshold = 2048;
inline constexpr std::size_t kReductionBlock = 1024;

namespace serial {

/// H applied to every qubit, in place. Length must be a power of two.
void hadamard_all(std::span<Amplitude> psi);
/// psi x := (-1)^(table x) * psi x
void phase_flip(std::span<Amplitude> psi, std::span<const std::uint8_t> table);
/// psi x := 2 * mean(psi) - psi x
void inversion_about_mean(std::span<Amplitude> psi);
void matvec(const Matrix& m, std::span<const Amplitude> in, std::span<Amplitude> out);
Matrix matmul(const Matrix& a, const Matrix& b);
Amplitude inner_product(std::span<const Amplitude> a, std::span<const Amplitude> b);
double norm_squared(std::span<const Amplitude> psi);

}  // namespace serial

namespace omp {

void hadamard_all(std::span<Amplitude> psi);
void phase_flip(std::span<Amplitude> psi, std::span<const std::uint8_t> table);
void inversion_about_mean(std::span<Amplitude> psi);
void matvec(const Matrix& m, std::span<const Amplitude> in, std::span<Amplitude> out);
Matrix matmul(const Matrix& a, const Matrix& b);
Amplitude inner_product(std::span<const Amplitude> a, std::span<const Amplitude> b);
double norm_squared(std::span<const Amplitude> psi);

}  // namespace omp

}  // namespace qpp::kernels
