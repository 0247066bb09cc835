#pragma once

// Random inputs and reference conversions shared by the unit tests.

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "chaocav/linalg.hpp"

namespace testing_support {

using chaocav::Complex;

template <std::size_t N>
chaocav::SquareMatrix<N> random_hermitian(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> n01;
    chaocav::SquareMatrix<N> m;
    for (std::size_t i = 0; i < N; ++i) {
        m(i, i) = scale * n01(rng);
        for (std::size_t j = i + 1; j < N; ++j) {
            m(i, j) = scale * Complex{n01(rng), n01(rng)};
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

template <std::size_t N>
chaocav::ComplexVector<N> random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> n01;
    chaocav::ComplexVector<N> v;
    double s = 0.0;
    for (auto& z : v) {
        z = {n01(rng), n01(rng)};
        s += std::norm(z);
    }
    for (auto& z : v) z /= std::sqrt(s);
    return v;
}

// Random mixed state: a weighted sum of random pure states.
template <std::size_t N>
chaocav::SquareMatrix<N> random_density(std::mt19937_64& rng, int terms = 3) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    chaocav::SquareMatrix<N> rho;
    double total = 0.0;
    for (int k = 0; k < terms; ++k) {
        const double w = u(rng);
        rho += chaocav::SquareMatrix<N>::projector(random_state<N>(rng)) * Complex{w};
        total += w;
    }
    return rho * Complex{1.0 / total};
}

inline chaocav::ComplexMatrix2 random_unitary2(std::mt19937_64& rng) {
    // exp(-i H) for a random Hermitian H, via its eigen-decomposition
    const auto h = random_hermitian<2>(rng);
    const auto es = chaocav::eig_hermitian_system(h);
    chaocav::ComplexMatrix2 u;
    for (std::size_t k = 0; k < 2; ++k)
        u += chaocav::ComplexMatrix2::outer(es.vectors[k], es.vectors[k]) * std::polar(1.0, -es.values[k]);
    return u;
}

template <std::size_t N>
Eigen::Matrix<std::complex<double>, N, N> to_eigen(const chaocav::SquareMatrix<N>& m) {
    Eigen::Matrix<std::complex<double>, N, N> e;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return e;
}

}  // namespace testing_support
