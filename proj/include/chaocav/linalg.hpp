#pragma once

// Small fixed-size complex linear algebra for qubit density matrices.
//
// Basis order is fixed for every module: single qubit (|g>, |e>), two
// qubits (|gg>, |ge>, |eg>, |ee>), three qubits likewise with qubit 1 as the
// most significant index. A matrix of dimension 2^k is read as k qubits
// numbered 1..k from the left.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "chaocav/errors.hpp"

namespace chaocav {

using Complex = std::complex<double>;

namespace tol {
inline constexpr double density_hermitian = 1e-12;
inline constexpr double density_trace = 1e-12;
inline constexpr double density_eigen_floor = -1e-10;
inline constexpr double input_hermitian = 1e-9;
inline constexpr double jacobi_offdiag = 1e-13;
}  // namespace tol

template <std::size_t N>
using ComplexVector = std::array<Complex, N>;

template <std::size_t N>
class SquareMatrix {
public:
    static constexpr std::size_t dim = N;

    constexpr SquareMatrix() = default;

    static SquareMatrix identity() {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static SquareMatrix diagonal(const std::array<double, N>& d) {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
        return m;
    }

    // |v><w|
    static SquareMatrix outer(const ComplexVector<N>& v, const ComplexVector<N>& w) {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) m(i, j) = v[i] * std::conj(w[j]);
        return m;
    }

    static SquareMatrix projector(const ComplexVector<N>& v) { return outer(v, v); }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * N + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * N + j]; }

    SquareMatrix adjoint() const {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) m(i, j) = std::conj((*this)(j, i));
        return m;
    }

    Complex trace() const {
        Complex t{};
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    // max_{ij} |m_ij - conj(m_ji)|
    double hermiticity_error() const {
        double e = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i; j < N; ++j)
                e = std::max(e, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return e;
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
            return std::isfinite(z.real()) && std::isfinite(z.imag());
        });
    }

    SquareMatrix& operator+=(const SquareMatrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) data_[k] += o.data_[k];
        return *this;
    }
    SquareMatrix& operator-=(const SquareMatrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) data_[k] -= o.data_[k];
        return *this;
    }
    SquareMatrix& operator*=(Complex s) {
        for (auto& z : data_) z *= s;
        return *this;
    }

    friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
    friend SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
    friend SquareMatrix operator*(SquareMatrix a, Complex s) { return a *= s; }
    friend SquareMatrix operator*(Complex s, SquareMatrix a) { return a *= s; }

    friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{}) continue;
                for (std::size_t j = 0; j < N; ++j) m(i, j) += aik * b(k, j);
            }
        return m;
    }

    friend ComplexVector<N> operator*(const SquareMatrix& a, const ComplexVector<N>& v) {
        ComplexVector<N> r{};
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) r[i] += a(i, j) * v[j];
        return r;
    }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

    // Largest entrywise modulus of a - b.
    friend double max_abs_diff(const SquareMatrix& a, const SquareMatrix& b) {
        double e = 0.0;
        for (std::size_t k = 0; k < N * N; ++k) e = std::max(e, std::abs(a.data_[k] - b.data_[k]));
        return e;
    }

private:
    std::array<Complex, N * N> data_{};
};

using ComplexMatrix2 = SquareMatrix<2>;
using ComplexMatrix4 = SquareMatrix<4>;
using ComplexMatrix8 = SquareMatrix<8>;

template <std::size_t N>
SquareMatrix<N> commutator(const SquareMatrix<N>& a, const SquareMatrix<N>& b) {
    return a * b - b * a;
}

// Kronecker product; a occupies the more significant index.
template <std::size_t N, std::size_t M>
SquareMatrix<N * M> tensor(const SquareMatrix<N>& a, const SquareMatrix<M>& b) {
    SquareMatrix<N * M> m;
    for (std::size_t i1 = 0; i1 < N; ++i1)
        for (std::size_t j1 = 0; j1 < N; ++j1)
            for (std::size_t i2 = 0; i2 < M; ++i2)
                for (std::size_t j2 = 0; j2 < M; ++j2)
                    m(i1 * M + i2, j1 * M + j2) = a(i1, j1) * b(i2, j2);
    return m;
}

template <std::size_t N, std::size_t M>
ComplexVector<N * M> tensor(const ComplexVector<N>& a, const ComplexVector<M>& b) {
    ComplexVector<N * M> v{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < M; ++j) v[i * M + j] = a[i] * b[j];
    return v;
}

template <std::size_t N>
double norm_squared(const ComplexVector<N>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0,
                           [](double s, const Complex& z) { return s + std::norm(z); });
}

namespace detail {

template <std::size_t N>
void require_hermitian(const SquareMatrix<N>& m, double tolerance, const char* who) {
    if (!m.all_finite()) throw ValidationError(std::string(who) + ": non-finite matrix entry");
    const double err = m.hermiticity_error();
    if (err > tolerance) {
        std::ostringstream os;
        os << who << ": matrix is not Hermitian (max |m_ij - conj(m_ji)| = " << err
           << " > " << tolerance << ")";
        throw ValidationError(os.str());
    }
}

constexpr std::size_t log2_exact(std::size_t n) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

}  // namespace detail

template <std::size_t N>
struct EigenSystem {
    std::array<double, N> values{};               // ascending
    std::array<ComplexVector<N>, N> vectors{};    // vectors[k] pairs with values[k]
};

// Cyclic complex Jacobi. Each rotation first removes the phase of the pivot
// entry, then applies a real plane rotation; iteration stops once the
// off-diagonal Frobenius norm falls below tol::jacobi_offdiag (scaled by the
// matrix norm when that exceeds one).
template <std::size_t N>
EigenSystem<N> eig_hermitian_system(const SquareMatrix<N>& input) {
    detail::require_hermitian(input, tol::input_hermitian, "eig_hermitian");

    // Work on the exactly Hermitian part.
    SquareMatrix<N> a = (input + input.adjoint()) * Complex{0.5};
    SquareMatrix<N> v = SquareMatrix<N>::identity();

    const double scale = std::max(1.0, a.frobenius_norm());
    auto off_norm = [&a] {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    constexpr int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_norm() >= tol::jacobi_offdiag * scale; ++sweep) {
        for (std::size_t p = 0; p + 1 < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double h = std::abs(a(p, q));
                if (h == 0.0) continue;
                const Complex phase = std::conj(a(p, q)) / h;  // e^{-i arg a_pq}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = 0.5 * std::atan(2.0 * h / (aqq - app));
                const double c = std::cos(theta);
                const double s = std::sin(theta);

                // Columns p and q of the unitary J = D R.
                SquareMatrix<N> j = SquareMatrix<N>::identity();
                j(p, p) = c;
                j(p, q) = s;
                j(q, p) = -s * phase;
                j(q, q) = c * phase;

                a = j.adjoint() * a * j;
                v = v * j;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::array<std::size_t, N> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&a](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    EigenSystem<N> es;
    for (std::size_t k = 0; k < N; ++k) {
        es.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < N; ++i) es.vectors[k][i] = v(i, order[k]);
    }
    return es;
}

template <std::size_t N>
std::array<double, N> eig_hermitian(const SquareMatrix<N>& m) {
    return eig_hermitian_system(m).values;
}

// Transpose of one qubit's indices of a two-qubit operator. Exact index
// shuffle: applying it twice reproduces the input bit for bit.
inline ComplexMatrix4 partial_transpose(const ComplexMatrix4& rho, int subsystem) {
    if (subsystem != 1 && subsystem != 2)
        throw ValidationError("partial_transpose: subsystem must be 1 or 2");
    detail::require_hermitian(rho, tol::input_hermitian, "partial_transpose");
    ComplexMatrix4 out;
    for (std::size_t i1 = 0; i1 < 2; ++i1)
        for (std::size_t i2 = 0; i2 < 2; ++i2)
            for (std::size_t j1 = 0; j1 < 2; ++j1)
                for (std::size_t j2 = 0; j2 < 2; ++j2) {
                    const std::size_t row = i1 * 2 + i2;
                    const std::size_t col = j1 * 2 + j2;
                    if (subsystem == 1)
                        out(j1 * 2 + i2, i1 * 2 + j2) = rho(row, col);
                    else
                        out(i1 * 2 + j2, j1 * 2 + i2) = rho(row, col);
                }
    return out;
}

// Reduced operator on the qubits listed in `keep` (1-based, ascending).
// TotalQubits is explicit: partial_trace<3>(rho8, std::array{3}).
template <std::size_t TotalQubits, std::size_t Kept>
SquareMatrix<(std::size_t{1} << Kept)> partial_trace(
    const SquareMatrix<(std::size_t{1} << TotalQubits)>& rho, const std::array<int, Kept>& keep) {
    static_assert(Kept >= 1 && Kept <= TotalQubits, "partial_trace: bad number of kept qubits");
    for (std::size_t k = 0; k < Kept; ++k) {
        if (keep[k] < 1 || keep[k] > static_cast<int>(TotalQubits))
            throw ValidationError("partial_trace: subsystem index out of range");
        if (k > 0 && keep[k] <= keep[k - 1])
            throw ValidationError("partial_trace: subsystem indices must be strictly ascending");
    }
    constexpr std::size_t full_dim = std::size_t{1} << TotalQubits;
    constexpr std::size_t out_dim = std::size_t{1} << Kept;

    std::array<bool, TotalQubits> kept{};
    for (int q : keep) kept[q - 1] = true;

    // Bit of qubit q (1-based) within a full index.
    auto bit = [](std::size_t index, std::size_t q) {
        return (index >> (TotalQubits - q)) & std::size_t{1};
    };
    auto reduced_index = [&](std::size_t index) {
        std::size_t r = 0;
        for (int q : keep) r = (r << 1) | bit(index, static_cast<std::size_t>(q));
        return r;
    };
    auto traced_match = [&](std::size_t a, std::size_t b) {
        for (std::size_t q = 1; q <= TotalQubits; ++q)
            if (!kept[q - 1] && bit(a, q) != bit(b, q)) return false;
        return true;
    };

    SquareMatrix<out_dim> out;
    for (std::size_t i = 0; i < full_dim; ++i)
        for (std::size_t j = 0; j < full_dim; ++j)
            if (traced_match(i, j)) out(reduced_index(i), reduced_index(j)) += rho(i, j);
    return out;
}

// tr(rho_a rho_b); real part, the imaginary part vanishes for Hermitian inputs.
template <std::size_t N>
double purity_overlap(const SquareMatrix<N>& rho_a, const SquareMatrix<N>& rho_b) {
    Complex s{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k) s += rho_a(i, k) * rho_b(k, i);
    return s.real();
}

// Diagnostic for the density-matrix invariants, empty when all hold.
template <std::size_t N>
std::optional<std::string> density_violation(const SquareMatrix<N>& rho) {
    std::ostringstream os;
    if (!rho.all_finite()) return std::string("non-finite entry");
    if (const double h = rho.hermiticity_error(); h > tol::density_hermitian) {
        os << "Hermiticity error " << h;
        return os.str();
    }
    if (const Complex t = rho.trace(); std::abs(t - 1.0) > tol::density_trace) {
        os << "trace " << t.real() << (t.imag() >= 0 ? "+" : "") << t.imag() << "i != 1";
        return os.str();
    }
    const double lowest = eig_hermitian(rho).front();
    if (lowest < tol::density_eigen_floor) {
        os << "eigenvalue " << lowest << " below floor " << tol::density_eigen_floor;
        return os.str();
    }
    return std::nullopt;
}

template <std::size_t N>
void require_density(const SquareMatrix<N>& rho, const char* who) {
    if (auto why = density_violation(rho))
        throw ValidationError(std::string(who) + ": invalid density matrix: " + *why);
}

namespace pauli {
inline ComplexMatrix2 x() {
    ComplexMatrix2 m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}
inline ComplexMatrix2 z() {
    // (|g>, |e>) order: sigma_z = |e><e| - |g><g|.
    return ComplexMatrix2::diagonal({-1.0, 1.0});
}
inline ComplexMatrix2 raising() {
    ComplexMatrix2 m;
    m(1, 0) = 1.0;  // |e><g|
    return m;
}
inline ComplexMatrix2 lowering() { return raising().adjoint(); }
}  // namespace pauli

}  // namespace chaocav
