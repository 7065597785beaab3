#include <cmath>

#include "qpp/errors.hpp"
#include "qpp/kernels.hpp"

namespace qpp::kernels::serial {

void hadamard_all(std::span<Amplitude> psi) {
    const std::size_t dim = psi.size();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t stride = 1; stride < dim; stride <<= 1) {
        for (std::size_t base = 0; base < dim; base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                const Amplitude a = psi[i];
                const Amplitude b = psi[i + stride];
                psi[i] = (a + b) * inv_sqrt2;
                psi[i + stride] = (a - b) * inv_sqrt2;
            }
        }
    }
}

void phase_flip(std::span<Amplitude> psi, std::span<const std::uint8_t> table) {
    for (std::size_t x = 0; x < psi.size(); ++x) {
        if (table[x] != 0) psi[x] = -psi[x];
    }
}

void inversion_about_mean(std::span<Amplitude> psi) {
    Amplitude sum = 0.0;
    for (const auto& a : psi) sum += a;
    const Amplitude twice_mean = 2.0 * sum / static_cast<double>(psi.size());
    for (auto& a : psi) a = twice_mean - a;
}

void matvec(const Matrix& m, std::span<const Amplitude> in, std::span<Amplitude> out) {
    if (in.size() != m.dim() || out.size() != m.dim()) throw DomainError("matvec dimension mismatch");
    for (std::size_t r = 0; r < m.dim(); ++r) {
        Amplitude acc = 0.0;
        for (std::size_t c = 0; c < m.dim(); ++c) acc += m(r, c) * in[c];
        out[r] = acc;
    }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw DomainError("matmul dimension mismatch");
    const std::size_t dim = a.dim();
    Matrix out(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t k = 0; k < dim; ++k) {
            const Amplitude lhs = a(r, k);
            if (lhs == Amplitude{}) continue;
            for (std::size_t c = 0; c < dim; ++c) out(r, c) += lhs * b(k, c);
        }
    }
    return out;
}

Amplitude inner_product(std::span<const Amplitude> a, std::span<const Amplitude> b) {
    if (a.size() != b.size()) throw DomainError("inner product length mismatch");
    Amplitude acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double norm_squared(std::span<const Amplitude> psi) {
    double acc = 0.0;
    for (const auto& a : psi) acc += std::norm(a);
    return acc;
}

}  // namespace qpp::kernels::serial
