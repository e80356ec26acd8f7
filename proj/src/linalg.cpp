#include "eigenbridge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "eigenbridge/error.hpp"

namespace eigenbridge {

namespace {

constexpr double kRankTol = 1e-12;
constexpr double kSymmetryTol = 1e-10;
constexpr double kPoleTol = 1e-14;

// Real symmetric tridiagonal form T of a Hermitian matrix A = Q T Q^*, with
// Q = H_0 H_1 ... H_{n-2} and H_i = I - tau_i v_i v_i^* acting on rows/columns
// i+1..n-1.
template <Scalar T>
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;  // off[i] couples i and i+1; off[n-1] == 0
    std::vector<std::vector<T>> reflectors;
    std::vector<T> taus;
};

template <Scalar T>
void check_hermitian(const Matrix<T>& s) {
    if (!s.square()) throw Error(Errc::NotSymmetric, "matrix is not square");
    const std::size_t n = s.rows();
    double defect = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j; i < n; ++i) defect = std::max(defect, std::abs(s(i, j) - conj(s(j, i))));
    if (defect >= kSymmetryTol * (1.0 + max_abs(s)))
        throw Error(Errc::NotSymmetric, "asymmetry " + std::to_string(defect));
}

template <Scalar T>
Tridiagonal<T> tridiagonalize(Matrix<T> a) {
    const std::size_t n = a.rows();
    Tridiagonal<T> out;
    out.diag.assign(n, 0.0);
    out.off.assign(n, 0.0);
    out.reflectors.resize(n > 1 ? n - 1 : 0);
    out.taus.assign(n > 1 ? n - 1 : 0, T{});

    std::vector<T> w;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t k = n - 1 - i;  // trailing block size
        const std::size_t base = i + 1;
        out.diag[i] = real_part(a(i, i));

        // Householder vector annihilating a(i+2:n, i); beta is real.
        const T alpha = a(base, i);
        double xnorm2 = 0.0;
        for (std::size_t r = base + 1; r < n; ++r) xnorm2 += abs2(a(r, i));
        std::vector<T>& v = out.reflectors[i];
        v.assign(k, T{});
        v[0] = T(1);
        T tau{};
        double beta = real_part(alpha);
        const bool trivial = xnorm2 == 0.0 && (!is_complex_v<T> || std::abs(alpha - T(real_part(alpha))) == 0.0);
        if (!trivial) {
            beta = -std::copysign(std::sqrt(abs2(alpha) + xnorm2), real_part(alpha));
            tau = (T(beta) - alpha) / beta;
            const T scale = T(1) / (alpha - T(beta));
            for (std::size_t r = 1; r < k; ++r) v[r] = a(base + r, i) * scale;
        }
        out.taus[i] = tau;
        out.off[i] = beta;
        if (trivial) continue;

        // Trailing block B <- H^* B H as a Hermitian rank-2 update.
        w.assign(k, T{});
        for (std::size_t c = 0; c < k; ++c) {
            const T vc = v[c];
            const T* bc = &a(base, base + c);
            T* wp = w.data();
#pragma omp simd
            for (std::size_t r = 0; r < k; ++r) wp[r] += bc[r] * vc;
        }
        for (auto& x : w) x *= tau;
        T wv{};
        for (std::size_t r = 0; r < k; ++r) wv += conj(w[r]) * v[r];
        const T shift = -0.5 * tau * wv;
        for (std::size_t r = 0; r < k; ++r) w[r] += shift * v[r];
        for (std::size_t c = 0; c < k; ++c) {
            const T cw = conj(w[c]);
            const T cv = conj(v[c]);
            T* bc = &a(base, base + c);
            const T* vp = v.data();
            const T* wp = w.data();
#pragma omp simd
            for (std::size_t r = 0; r < k; ++r) bc[r] -= vp[r] * cw + wp[r] * cv;
        }
    }
    if (n > 0) out.diag[n - 1] = real_part(a(n - 1, n - 1));
    return out;
}

// z <- z H_0 H_1 ... H_{n-2}; z has n columns and any number of rows.
template <Scalar T>
void apply_reflectors_right(const Tridiagonal<T>& t, Matrix<T>& z) {
    const std::size_t rows = z.rows();
    if (rows == 0) return;
    std::vector<T> s(rows);
    for (std::size_t i = 0; i < t.reflectors.size(); ++i) {
        const T tau = t.taus[i];
        if (tau == T{}) continue;
        const auto& v = t.reflectors[i];
        std::fill(s.begin(), s.end(), T{});
        for (std::size_t c = 0; c < v.size(); ++c) {
            const T vc = v[c];
            const T* zc = z.col(i + 1 + c).data();
            T* sp = s.data();
#pragma omp simd
            for (std::size_t r = 0; r < rows; ++r) sp[r] += zc[r] * vc;
        }
        for (std::size_t c = 0; c < v.size(); ++c) {
            const T f = tau * conj(v[c]);
            T* zc = z.col(i + 1 + c).data();
            const T* sp = s.data();
#pragma omp simd
            for (std::size_t r = 0; r < rows; ++r) zc[r] -= sp[r] * f;
        }
    }
}

// Implicitly shifted QL on a symmetric tridiagonal matrix. Rotations are
// applied to the columns of z (any row count, n columns).
template <Scalar T>
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, Matrix<T>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return;
    e[n - 1] = 0.0;
    const std::size_t rows = z.rows();
    const long max_iter = 50L * n;
    long total_iter = 0;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int l = 0; l < n; ++l) {
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++total_iter > max_iter)
                throw Error(Errc::NoConvergence, "QL iteration exceeded " + std::to_string(max_iter) + " sweeps");

            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            int i = m - 1;
            bool deflated = false;
            for (; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (rows > 0) {
                    T* zi = z.col(i).data();
                    T* zi1 = z.col(i + 1).data();
#pragma omp simd
                    for (std::size_t k = 0; k < rows; ++k) {
                        const T fz = zi1[k];
                        zi1[k] = s * zi[k] + c * fz;
                        zi[k] = c * zi[k] - s * fz;
                    }
                }
            }
            if (deflated) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
}

template <Scalar T>
void sort_ascending(std::vector<double>& d, Matrix<T>& z) {
    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    std::vector<double> sorted(d.size());
    Matrix<T> zs(z.rows(), z.cols());
    for (std::size_t j = 0; j < order.size(); ++j) {
        sorted[j] = d[order[j]];
        if (z.rows() > 0) std::copy(z.col(order[j]).begin(), z.col(order[j]).end(), zs.col(j).begin());
    }
    d = std::move(sorted);
    z = std::move(zs);
}

template <Scalar T>
void normalize_phases(Matrix<T>& q) {
    for (std::size_t j = 0; j < q.cols(); ++j) {
        auto col = q.col(j);
        std::size_t best = 0;
        double best_abs = -1.0;
        for (std::size_t i = 0; i < col.size(); ++i) {
            const double a = std::abs(col[i]);
            if (a > best_abs) {
                best_abs = a;
                best = i;
            }
        }
        if (best_abs <= 0.0) continue;
        const T phase = conj(col[best]) / best_abs;
        for (auto& x : col) x *= phase;
        col[best] = T(best_abs);
    }
}

}  // namespace

template <Scalar T>
QrFactors<T> gram_schmidt(const Matrix<T>& m) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    if (cols > rows) throw Error(Errc::RankDeficient, "more columns than rows");
    QrFactors<T> out{m, Matrix<T>(cols, cols)};
    auto& q = out.q;
    auto& r = out.r;
    for (std::size_t j = 0; j < cols; ++j) {
        auto qj = q.col(j);
        const double original = norm2<T>(m.col(j));
        for (std::size_t i = 0; i < j; ++i) {
            auto qi = q.col(i);
            const T rij = dot<T>(qi, qj);
            r(i, j) = rij;
            for (std::size_t k = 0; k < rows; ++k) qj[k] -= rij * qi[k];
        }
        const double rjj = norm2<T>(qj);
        if (!(rjj > kRankTol * original) || original == 0.0)
            throw Error(Errc::RankDeficient, "column " + std::to_string(j) + " is numerically dependent");
        r(j, j) = T(rjj);
        for (auto& x : qj) x /= rjj;
    }
    return out;
}

template <Scalar T>
SpectralDecomposition<T> sym_eig(const Matrix<T>& s) {
    check_hermitian(s);
    auto t = tridiagonalize(s);
    Matrix<T> z = Matrix<T>::identity(s.rows());
    apply_reflectors_right(t, z);
    tridiagonal_ql(t.diag, t.off, z);
    sort_ascending(t.diag, z);
    normalize_phases(z);
    return {std::move(t.diag), std::move(z)};
}

template <Scalar T>
ProjectedSpectrum<T> sym_eig_projected(const Matrix<T>& s, const Matrix<T>& probes) {
    check_hermitian(s);
    if (probes.rows() != s.rows()) throw Error(Errc::LengthMismatch, "probe length differs from matrix size");
    auto t = tridiagonalize(s);
    // Rows of z are p_k^*; after the sweep z = P^* U, so z(k, i) = conj(u_i^* p_k).
    Matrix<T> z = adjoint(probes);
    apply_reflectors_right(t, z);
    tridiagonal_ql(t.diag, t.off, z);
    sort_ascending(t.diag, z);
    return {std::move(t.diag), adjoint(z)};
}

template <Scalar T>
std::vector<double> sym_eigenvalues(const Matrix<T>& s) {
    check_hermitian(s);
    auto t = tridiagonalize(s);
    Matrix<T> z(0, s.rows());
    tridiagonal_ql(t.diag, t.off, z);
    std::sort(t.diag.begin(), t.diag.end());
    return std::move(t.diag);
}

template <Scalar T>
ProjectedSpectrum<T> project(const SpectralDecomposition<T>& d, const Matrix<T>& probes) {
    return {d.eigenvalues, adjoint_multiply(d.eigenvectors, probes)};
}

template <Scalar T>
Matrix<T> scaled_gram(const Matrix<T>& v, double scale) {
    const std::size_t n = v.rows();
    const std::size_t s = v.cols();
    const Matrix<T> vt = adjoint(v);  // column r of vt is conj(row r of v)
    Matrix<T> out(n, n);
    constexpr std::size_t block = 4;
    for (std::size_t c0 = 0; c0 < n; c0 += block) {
        const std::size_t cb = std::min(block, n - c0);
        for (std::size_t r = c0; r < n; ++r) {
            const T* xr = vt.col(r).data();
            T acc[block] = {};
            for (std::size_t c = 0; c < cb && c0 + c <= r; ++c) {
                const T* xc = vt.col(c0 + c).data();
                T sum{};
                if constexpr (is_complex_v<T>) {
                    for (std::size_t j = 0; j < s; ++j) sum += xr[j] * std::conj(xc[j]);
                } else {
#pragma omp simd reduction(+ : sum)
                    for (std::size_t j = 0; j < s; ++j) sum += xr[j] * xc[j];
                }
                acc[c] = sum;
            }
            // entry (r, c) = sum_j v(r,j) conj(v(c,j)) = sum_j conj(xr[j]) xc[j]
            for (std::size_t c = 0; c < cb && c0 + c <= r; ++c) {
                const T val = conj(acc[c]) * scale;
                out(r, c0 + c) = val;
                out(c0 + c, r) = conj(val);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) out(i, i) = T(real_part(out(i, i)));
    return out;
}

template <Scalar T>
T resolvent_quadratic_form(std::span<const double> eigenvalues, std::span<const T> cx, std::span<const T> cv,
                           double lambda, int power) {
    if (eigenvalues.empty()) return T{};
    if (lambda - eigenvalues.back() < kPoleTol)
        throw Error(Errc::PoleTooClose, "lambda within 1e-14 of the top eigenvalue");
    T acc{};
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
        acc += conj(cx[i]) * cv[i] / std::pow(lambda - eigenvalues[i], power);
    return acc;
}

template <Scalar T>
std::vector<T> eigen_coordinates(const SpectralDecomposition<T>& d, std::span<const T> x) {
    std::vector<T> c(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) c[i] = dot<T>(d.eigenvectors.col(i), x);
    return c;
}

template <Scalar T>
T resolvent_quadratic_form(const SpectralDecomposition<T>& d, std::span<const T> x, std::span<const T> v,
                           double lambda, int power) {
    const auto cx = eigen_coordinates(d, x);
    const auto cv = eigen_coordinates(d, v);
    return resolvent_quadratic_form<T>(d.eigenvalues, cx, cv, lambda, power);
}

template <Scalar T>
double reconstruction_residual(const SpectralDecomposition<T>& d, const Matrix<T>& s) {
    Matrix<T> scaled = d.eigenvectors;
    for (std::size_t j = 0; j < scaled.cols(); ++j)
        for (auto& x : scaled.col(j)) x *= d.eigenvalues[j];
    Matrix<T> rebuilt(s.rows(), s.cols());
    for (std::size_t j = 0; j < s.cols(); ++j)
        for (std::size_t k = 0; k < scaled.cols(); ++k) {
            const T f = conj(d.eigenvectors(j, k));
            for (std::size_t i = 0; i < s.rows(); ++i) rebuilt(i, j) += scaled(i, k) * f;
        }
    return max_abs_diff(rebuilt, s);
}

#define EIGENBRIDGE_INSTANTIATE(T)                                                                             \
    template QrFactors<T> gram_schmidt(const Matrix<T>&);                                                      \
    template SpectralDecomposition<T> sym_eig(const Matrix<T>&);                                               \
    template ProjectedSpectrum<T> sym_eig_projected(const Matrix<T>&, const Matrix<T>&);                       \
    template std::vector<double> sym_eigenvalues(const Matrix<T>&);                                            \
    template ProjectedSpectrum<T> project(const SpectralDecomposition<T>&, const Matrix<T>&);                  \
    template Matrix<T> scaled_gram(const Matrix<T>&, double);                                                  \
    template T resolvent_quadratic_form(std::span<const double>, std::span<const T>, std::span<const T>,       \
                                        double, int);                                                          \
    template T resolvent_quadratic_form(const SpectralDecomposition<T>&, std::span<const T>,                   \
                                        std::span<const T>, double, int);                                      \
    template std::vector<T> eigen_coordinates(const SpectralDecomposition<T>&, std::span<const T>);            \
    template double reconstruction_residual(const SpectralDecomposition<T>&, const Matrix<T>&);

EIGENBRIDGE_INSTANTIATE(double)
EIGENBRIDGE_INSTANTIATE(Complex)

#undef EIGENBRIDGE_INSTANTIATE

}  // namespace eigenbridge
