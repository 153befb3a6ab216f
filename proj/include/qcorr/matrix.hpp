#pragma once
/**
 * @file matrix.hpp
 * @brief Fixed-size dense complex matrices for one, two and three qubits.
 *
 * Everything here works on Matrix<N> with N in {2, 4, 8}. The sizes are tiny,
 * so storage is a flat std::array and every routine is a plain loop.
 *
 * Qubit ordering: for a multi-qubit matrix, qubit A is the most significant
 * index bit. Within one qubit, index 0 is |1> (the +1 eigenvector of sigma_z)
 * and index 1 is |0>, so the three-qubit index 0 is |111> and index 7 is |000>.
 */

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <span>

#include "qcorr/errors.hpp"

namespace qcorr {

using cplx = std::complex<double>;

template <std::size_t N>
concept QubitDimension = (N == 2 || N == 4 || N == 8);

template <std::size_t N>
    requires QubitDimension<N>
class Matrix {
public:
    static constexpr std::size_t dim = N;
    static constexpr std::size_t qubits = std::countr_zero(N);

    constexpr Matrix() = default;

    /// Row-major initialization from exactly N*N entries.
    explicit Matrix(std::span<const cplx, N * N> entries)
    {
        std::copy(entries.begin(), entries.end(), data_.begin());
    }

    static Matrix identity()
    {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(std::span<const double, N> values)
    {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = values[i];
        return m;
    }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * N + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * N + j]; }

    std::span<const cplx, N * N> entries() const { return data_; }

    Matrix adjoint() const
    {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) m(i, j) = std::conj((*this)(j, i));
        return m;
    }

    Matrix conjugate() const
    {
        Matrix m;
        for (std::size_t k = 0; k < N * N; ++k) m.data_[k] = std::conj(data_[k]);
        return m;
    }

    Matrix transpose() const
    {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) m(i, j) = (*this)(j, i);
        return m;
    }

    cplx trace() const
    {
        cplx t = 0.0;
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    Matrix& operator+=(const Matrix& o)
    {
        for (std::size_t k = 0; k < N * N; ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o)
    {
        for (std::size_t k = 0; k < N * N; ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(cplx s)
    {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        Matrix c;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const cplx aik = a(i, k);
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < N; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::array<cplx, N * N> data_{};
};

using Matrix2 = Matrix<2>;
using Matrix4 = Matrix<4>;
using Matrix8 = Matrix<8>;

template <std::size_t N>
std::ostream& operator<<(std::ostream& os, const Matrix<N>& m)
{
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) os << (j ? " " : "") << m(i, j);
        os << '\n';
    }
    return os;
}

/// Largest entrywise modulus of a - b.
template <std::size_t N>
double max_abs_diff(const Matrix<N>& a, const Matrix<N>& b)
{
    double d = 0.0;
    for (std::size_t k = 0; k < N * N; ++k) d = std::max(d, std::abs(a.entries()[k] - b.entries()[k]));
    return d;
}

template <std::size_t N>
double hermiticity_defect(const Matrix<N>& m)
{
    return max_abs_diff(m, m.adjoint());
}

template <std::size_t N>
bool is_hermitian(const Matrix<N>& m, double tol = 1e-12)
{
    return hermiticity_defect(m) <= tol;
}

// ---------------------------------------------------------------------------
// Pauli matrices in the (|1>, |0>) single-qubit ordering.

namespace pauli {
inline Matrix2 x()
{
    Matrix2 m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}
inline Matrix2 y()
{
    Matrix2 m;
    m(0, 1) = cplx(0.0, -1.0);
    m(1, 0) = cplx(0.0, 1.0);
    return m;
}
inline Matrix2 z()
{
    Matrix2 m;
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}
} // namespace pauli

// ---------------------------------------------------------------------------
// Kronecker product

template <std::size_t N, std::size_t M>
concept Kroneckerable = QubitDimension<N> && QubitDimension<M> && QubitDimension<N * M>;

/// Entry (i*M + k, j*M + l) of the result is a(i, j) * b(k, l).
/// Products larger than 8x8 are rejected at compile time.
template <std::size_t N, std::size_t M>
    requires Kroneckerable<N, M>
Matrix<N * M> kron(const Matrix<N>& a, const Matrix<M>& b)
{
    Matrix<N * M> out;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            const cplx aij = a(i, j);
            for (std::size_t k = 0; k < M; ++k)
                for (std::size_t l = 0; l < M; ++l) out(i * M + k, j * M + l) = aij * b(k, l);
        }
    return out;
}

template <std::size_t N, std::size_t M, std::size_t K>
    requires Kroneckerable<N, M> && Kroneckerable<N * M, K>
Matrix<N * M * K> kron(const Matrix<N>& a, const Matrix<M>& b, const Matrix<K>& c)
{
    return kron(kron(a, b), c);
}

// ---------------------------------------------------------------------------
// Hermitian eigenproblem: cyclic complex Jacobi.

template <std::size_t N>
struct Spectrum {
    std::array<double, N> values{}; ///< descending

    double sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }
    double min() const { return values.back(); }
    double max() const { return values.front(); }
};

template <std::size_t N>
struct Eigensystem {
    Spectrum<N> spectrum;
    Matrix<N> vectors; ///< column k is the eigenvector of spectrum.values[k]
};

inline constexpr double kJacobiTolerance = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;

namespace detail {

template <std::size_t N>
double off_diagonal_norm(const Matrix<N>& a)
{
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// A <- J^H A J and V <- V J, where J is the identity except for the 2x2 block
// u on rows/columns (p, q).
template <std::size_t N>
void apply_plane_unitary(Matrix<N>& a, Matrix<N>* v, std::size_t p, std::size_t q,
                         const std::array<cplx, 4>& u)
{
    for (std::size_t k = 0; k < N; ++k) {
        const cplx akp = a(k, p), akq = a(k, q);
        a(k, p) = akp * u[0] + akq * u[2];
        a(k, q) = akp * u[1] + akq * u[3];
    }
    for (std::size_t k = 0; k < N; ++k) {
        const cplx apk = a(p, k), aqk = a(q, k);
        a(p, k) = std::conj(u[0]) * apk + std::conj(u[2]) * aqk;
        a(q, k) = std::conj(u[1]) * apk + std::conj(u[3]) * aqk;
    }
    if (v != nullptr) {
        for (std::size_t k = 0; k < N; ++k) {
            const cplx vkp = (*v)(k, p), vkq = (*v)(k, q);
            (*v)(k, p) = vkp * u[0] + vkq * u[2];
            (*v)(k, q) = vkp * u[1] + vkq * u[3];
        }
    }
}

template <std::size_t N>
Eigensystem<N> jacobi(Matrix<N> a, bool want_vectors)
{
    Matrix<N> v = Matrix<N>::identity();
    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) < kJacobiTolerance) break;
        for (std::size_t p = 0; p + 1 < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) continue;
                const cplx phase = a(p, q) / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
                const cplx ph = std::conj(phase);
                apply_plane_unitary(a, want_vectors ? &v : nullptr, p, q, {c, s, -s * ph, c * ph});
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::array<std::size_t, N> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    Eigensystem<N> out;
    for (std::size_t k = 0; k < N; ++k) {
        out.spectrum.values[k] = a(order[k], order[k]).real();
        if (want_vectors)
            for (std::size_t i = 0; i < N; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

} // namespace detail

/// Eigenvalues of a Hermitian matrix, descending. Throws ContractError when
/// the input is not Hermitian within 1e-12.
template <std::size_t N>
Spectrum<N> hermitian_eigenvalues(const Matrix<N>& m)
{
    detail::require(is_hermitian(m), "hermitian_eigenvalues: matrix is not Hermitian");
    return detail::jacobi(m, false).spectrum;
}

template <std::size_t N>
Eigensystem<N> hermitian_eigensystem(const Matrix<N>& m)
{
    detail::require(is_hermitian(m), "hermitian_eigensystem: matrix is not Hermitian");
    return detail::jacobi(m, true);
}

// ---------------------------------------------------------------------------
// Subsystems

enum class Subsystem { A = 0, B = 1, C = 2 };

/// Set of qubit labels, stored as a bitmask (bit k <-> qubit k).
class SubsystemSet {
public:
    constexpr SubsystemSet() = default;
    constexpr SubsystemSet(std::initializer_list<Subsystem> labels)
    {
        for (auto s : labels) {
            const unsigned bit = 1u << static_cast<unsigned>(s);
            if (mask_ & bit) duplicate_ = true;
            mask_ |= bit;
        }
    }
    constexpr bool contains(Subsystem s) const { return mask_ & (1u << static_cast<unsigned>(s)); }
    constexpr int size() const { return std::popcount(mask_); }
    constexpr unsigned mask() const { return mask_; }
    constexpr bool has_duplicates() const { return duplicate_; }

private:
    unsigned mask_ = 0;
    bool duplicate_ = false;
};

namespace detail {

// Index bit of qubit k in an n-qubit register (A is the most significant).
constexpr std::size_t qubit_bit(std::size_t qubit, std::size_t n_qubits)
{
    return std::size_t{1} << (n_qubits - 1 - qubit);
}

} // namespace detail

/// Reduced state on the qubits in `keep`; the result dimension K is 2^|keep|.
/// Kept qubits stay in their original relative order.
template <std::size_t K, std::size_t N>
Matrix<K> partial_trace(const Matrix<N>& rho, SubsystemSet keep)
{
    constexpr std::size_t n = Matrix<N>::qubits;
    constexpr std::size_t k_qubits = Matrix<K>::qubits;
    detail::require(!keep.has_duplicates(), "partial_trace: repeated subsystem label");
    detail::require(keep.mask() < (1u << n), "partial_trace: subsystem label outside the register");
    detail::require(keep.size() == static_cast<int>(k_qubits) && k_qubits < n,
                    "partial_trace: kept subsystem count does not match result dimension");

    std::array<std::size_t, k_qubits> kept{};
    std::array<std::size_t, n - k_qubits> traced{};
    for (std::size_t q = 0, ik = 0, it = 0; q < n; ++q) {
        if (keep.contains(static_cast<Subsystem>(q)))
            kept[ik++] = q;
        else
            traced[it++] = q;
    }

    auto embed = [&](std::size_t kept_index, std::size_t traced_index) {
        std::size_t full = 0;
        for (std::size_t j = 0; j < k_qubits; ++j)
            if (kept_index & detail::qubit_bit(j, k_qubits)) full |= detail::qubit_bit(kept[j], n);
        for (std::size_t j = 0; j < traced.size(); ++j)
            if (traced_index & detail::qubit_bit(j, traced.size())) full |= detail::qubit_bit(traced[j], n);
        return full;
    };

    Matrix<K> out;
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) {
            cplx s = 0.0;
            for (std::size_t e = 0; e < (N / K); ++e) s += rho(embed(i, e), embed(j, e));
            out(i, j) = s;
        }
    return out;
}

/// Partial transpose with respect to one qubit.
template <std::size_t N>
Matrix<N> partial_transpose(const Matrix<N>& rho, Subsystem part)
{
    constexpr std::size_t n = Matrix<N>::qubits;
    detail::require(static_cast<std::size_t>(part) < n, "partial_transpose: subsystem outside the register");
    const std::size_t bit = detail::qubit_bit(static_cast<std::size_t>(part), n);
    Matrix<N> out;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            const std::size_t ii = (i & ~bit) | (j & bit);
            const std::size_t jj = (j & ~bit) | (i & bit);
            out(i, j) = rho(ii, jj);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Entropy

inline constexpr double kNegativeEigenvalueLimit = -1e-8;
inline constexpr double kNegligibleEigenvalue = 1e-14;

/// -sum p log2 p with 0 log 0 = 0; entries below 1e-14 are dropped.
inline double shannon_bits(std::span<const double> probabilities)
{
    double h = 0.0;
    for (double p : probabilities)
        if (p > kNegligibleEigenvalue) h -= p * std::log2(p);
    return h;
}

/// Von Neumann entropy in bits.
template <std::size_t N>
double von_neumann_entropy(const Matrix<N>& rho)
{
    const auto spec = hermitian_eigenvalues(rho);
    detail::require(spec.min() >= kNegativeEigenvalueLimit, "von_neumann_entropy: matrix is not positive semidefinite");
    return shannon_bits(spec.values);
}

/// Trace 1, Hermitian and PSD within `tol`.
template <std::size_t N>
bool is_density_matrix(const Matrix<N>& rho, double tol = 1e-10)
{
    if (!is_hermitian(rho, std::max(tol, 1e-12))) return false;
    if (std::abs(rho.trace() - 1.0) > tol) return false;
    return hermitian_eigenvalues(rho).min() >= -tol;
}

} // namespace qcorr
