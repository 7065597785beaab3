#include <cmath>
#include <vector>

#include "qpp/errors.hpp"
#include "qpp/kernels.hpp"

namespace qpp::kernels::omp {

namespace {

using Index = std::ptrdiff_t;

bool parallel(std::size_t work) { return work >= kParallelThreshold; }

// Sums f(i) over [0, n) in fixed blocks; the block partials are added in
// order afterwards.
template <typename T, typename F>
T blocked_sum(std::size_t n, F&& f) {
    const Index blocks = static_cast<Index>((n + kReductionBlock - 1) / kReductionBlock);
    std::vector<T> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static) if (parallel(n))
    for (Index blk = 0; blk < blocks; ++blk) {
        const std::size_t lo = static_cast<std::size_t>(blk) * kReductionBlock;
        const std::size_t hi = std::min(n, lo + kReductionBlock);
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += f(i);
        partial[static_cast<std::size_t>(blk)] = acc;
    }
    T total{};
    for (const auto& p : partial) total += p;
    return total;
}

}  // namespace

void hadamard_all(std::span<Amplitude> psi) {
    const std::size_t dim = psi.size();
    const Index pairs = static_cast<Index>(dim / 2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t stride = 1; stride < dim; stride <<= 1) {
#pragma omp parallel for schedule(static) if (parallel(dim))
        for (Index p = 0; p < pairs; ++p) {
            const std::size_t up = static_cast<std::size_t>(p);
            const std::size_t low = up & (stride - 1);
            const std::size_t i = ((up - low) << 1) | low;
            const Amplitude a = psi[i];
            const Amplitude b = psi[i + stride];
            psi[i] = (a + b) * inv_sqrt2;
            psi[i + stride] = (a - b) * inv_sqrt2;
        }
    }
}

void phase_flip(std::span<Amplitude> psi, std::span<const std::uint8_t> table) {
    const Index dim = static_cast<Index>(psi.size());
#pragma omp parallel for schedule(static) if (parallel(psi.size()))
    for (Index x = 0; x < dim; ++x) {
        if (table[static_cast<std::size_t>(x)] != 0) psi[static_cast<std::size_t>(x)] *= -1.0;
    }
}

void inversion_about_mean(std::span<Amplitude> psi) {
    const Amplitude sum = blocked_sum<Amplitude>(psi.size(), [&](std::size_t i) { return psi[i]; });
    const Amplitude twice_mean = 2.0 * sum / static_cast<double>(psi.size());
    const Index dim = static_cast<Index>(psi.size());
#pragma omp parallel for schedule(static) if (parallel(psi.size()))
    for (Index x = 0; x < dim; ++x) {
        auto& a = psi[static_cast<std::size_t>(x)];
        a = twice_mean - a;
    }
}

void matvec(const Matrix& m, std::span<const Amplitude> in, std::span<Amplitude> out) {
    if (in.size() != m.dim() || out.size() != m.dim()) throw DomainError("matvec dimension mismatch");
    const Index dim = static_cast<Index>(m.dim());
#pragma omp parallel for schedule(static) if (parallel(m.dim() * m.dim()))
    for (Index r = 0; r < dim; ++r) {
        const auto row = m.row(static_cast<std::size_t>(r));
        Amplitude acc = 0.0;
        for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * in[c];
        out[static_cast<std::size_t>(r)] = acc;
    }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw DomainError("matmul dimension mismatch");
    const std::size_t dim = a.dim();
    Matrix out(dim);
    const Index rows = static_cast<Index>(dim);
#pragma omp parallel for schedule(static) if (parallel(dim * dim))
    for (Index r = 0; r < rows; ++r) {
        const std::size_t ur = static_cast<std::size_t>(r);
        for (std::size_t k = 0; k < dim; ++k) {
            const Amplitude lhs = a(ur, k);
            if (lhs == Amplitude{}) continue;
            for (std::size_t c = 0; c < dim; ++c) out(ur, c) += lhs * b(k, c);
        }
    }
    return out;
}

Amplitude inner_product(std::span<const Amplitude> a, std::span<const Amplitude> b) {
    if (a.size() != b.size()) throw DomainError("inner product length mismatch");
    return blocked_sum<Amplitude>(a.size(), [&](std::size_t i) { return std::conj(a[i]) * b[i]; });
}

double norm_squared(std::span<const Amplitude> psi) {
    return blocked_sum<double>(psi.size(), [&](std::size_t i) { return std::norm(psi[i]); });
}

}  // namespace qpp::kernels::omp
