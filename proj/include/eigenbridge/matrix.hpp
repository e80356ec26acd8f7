#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

namespace eigenbridge {

using Complex = std::complex<double>;

enum class Field { Real, Complex };

template <class T>
struct FieldOf;
template <>
struct FieldOf<double> {
    static constexpr Field value = Field::Real;
};
template <>
struct FieldOf<Complex> {
    static constexpr Field value = Field::Complex;
};

template <class T>
concept Scalar = std::is_same_v<T, double> || std::is_same_v<T, Complex>;

template <class T>
constexpr bool is_complex_v = std::is_same_v<T, Complex>;

inline double conj(double x) noexcept { return x; }
inline Complex conj(const Complex& z) noexcept { return std::conj(z); }
inline double real_part(double x) noexcept { return x; }
inline double real_part(const Complex& z) noexcept { return z.real(); }
inline double abs2(double x) noexcept { return x * x; }
inline double abs2(const Complex& z) noexcept { return std::norm(z); }

/// Dense column-major matrix over the reals or the complex numbers.
template <Scalar T>
class Matrix {
public:
    using value_type = T;
    static constexpr Field field = FieldOf<T>::value;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        data_.resize(rows_ * cols_);
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    /// Row-major initializer, convenient for small hand-written matrices.
    static Matrix from_rows(std::initializer_list<std::initializer_list<T>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        Matrix m(r, c);
        std::size_t i = 0;
        for (const auto& row : rows) {
            std::size_t j = 0;
            for (const auto& v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    static Matrix from_columns(const std::vector<std::vector<T>>& columns) {
        const std::size_t c = columns.size();
        const std::size_t r = c == 0 ? 0 : columns.front().size();
        Matrix m(r, c);
        for (std::size_t j = 0; j < c; ++j) std::copy(columns[j].begin(), columns[j].end(), m.col(j).begin());
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[c * rows_ + r]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[c * rows_ + r]; }

    std::span<T> col(std::size_t c) noexcept { return {data_.data() + c * rows_, rows_}; }
    std::span<const T> col(std::size_t c) const noexcept { return {data_.data() + c * rows_, rows_}; }

    [[nodiscard]] std::vector<T> column_copy(std::size_t c) const { return {col(c).begin(), col(c).end()}; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    [[nodiscard]] bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](const T& v) {
            if constexpr (is_complex_v<T>) return std::isfinite(v.real()) && std::isfinite(v.imag());
            else return std::isfinite(v);
        });
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;

template <Scalar T>
Matrix<T> adjoint(const Matrix<T>& a) {
    Matrix<T> out(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out(j, i) = conj(a(i, j));
    return out;
}

template <Scalar T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> out(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto oc = out.col(j);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T bkj = b(k, j);
            auto ac = a.col(k);
            for (std::size_t i = 0; i < a.rows(); ++i) oc[i] += ac[i] * bkj;
        }
    }
    return out;
}

/// a^* b without materializing the adjoint.
template <Scalar T>
Matrix<T> adjoint_multiply(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> out(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto bc = b.col(j);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            auto ac = a.col(i);
            T acc{};
            for (std::size_t k = 0; k < a.rows(); ++k) acc += conj(ac[k]) * bc[k];
            out(i, j) = acc;
        }
    }
    return out;
}

template <Scalar T>
double max_abs(const Matrix<T>& a) noexcept {
    double m = 0.0;
    for (const auto& v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

template <Scalar T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) noexcept {
    double m = 0.0;
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::abs(da[i] - db[i]));
    return m;
}

/// max-norm of (Q^* Q - I).
template <Scalar T>
double orthonormality_defect(const Matrix<T>& q) {
    return max_abs_diff(adjoint_multiply(q, q), Matrix<T>::identity(q.cols()));
}

template <Scalar T>
T dot(std::span<const T> x, std::span<const T> y) noexcept {
    T acc{};
    for (std::size_t i = 0; i < x.size(); ++i) acc += conj(x[i]) * y[i];
    return acc;
}

template <Scalar T>
double norm2(std::span<const T> x) noexcept {
    double acc = 0.0;
    for (const auto& v : x) acc += abs2(v);
    return std::sqrt(acc);
}

}  // namespace eigenbridge
