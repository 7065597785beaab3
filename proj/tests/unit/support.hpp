#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qpp/matrix.hpp"
#include "qpp/qstate.hpp"

namespace qpp::testing {

inline QuantumState random_state(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    std::vector<Amplitude> a(std::size_t{1} << n);
    double norm = 0.0;
    for (auto& z : a) {
        z = {g(rng), g(rng)};
        norm += std::norm(z);
    }
    for (auto& z : a) z /= std::sqrt(norm);
    return QuantumState::from_amplitudes(std::move(a));
}

inline std::vector<Amplitude> random_vector(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> g;
    std::vector<Amplitude> a(dim);
    for (auto& z : a) z = {g(rng), g(rng)};
    return a;
}

// Gram-Schmidt on a random complex matrix, columns orthonormalized.
inline Matrix random_unitary(std::mt19937_64& rng, std::size_t dim) {
    std::vector<std::vector<Amplitude>> cols;
    while (cols.size() < dim) {
        auto v = random_vector(rng, dim);
        for (const auto& c : cols) {
            Amplitude dot{};
            for (std::size_t i = 0; i < dim; ++i) dot += std::conj(c[i]) * v[i];
            for (std::size_t i = 0; i < dim; ++i) v[i] -= dot * c[i];
        }
        double norm = 0.0;
        for (const auto& z : v) norm += std::norm(z);
        norm = std::sqrt(norm);
        if (norm < 1e-6) continue;
        for (auto& z : v) z /= norm;
        cols.push_back(std::move(v));
    }
    Matrix m(dim);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t r = 0; r < dim; ++r) m(r, c) = cols[c][r];
    }
    return m;
}

}  // namespace qpp::testing
