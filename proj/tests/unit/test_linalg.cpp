#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "eigenbridge/error.hpp"
#include "eigenbridge/linalg.hpp"
#include "helpers.hpp"

using namespace eigenbridge;
using testing::random_hermitian;
using testing::random_unit;

namespace {

// Max-norm of Q Lambda Q^* - S computed directly.
template <Scalar T>
double direct_residual(const SpectralDecomposition<T>& d, const Matrix<T>& s) {
    Matrix<T> scaled = d.eigenvectors;
    for (std::size_t j = 0; j < scaled.cols(); ++j)
        for (auto& x : scaled.col(j)) x *= d.eigenvalues[j];
    return max_abs_diff(multiply(scaled, adjoint(d.eigenvectors)), s);
}

template <Scalar T>
void check_decomposition(const Matrix<T>& s, const SpectralDecomposition<T>& d) {
    double top = 0.0;
    for (double l : d.eigenvalues) top = std::max(top, std::abs(l));
    CHECK(std::is_sorted(d.eigenvalues.begin(), d.eigenvalues.end()));
    CHECK(orthonormality_defect(d.eigenvectors) < 1e-10);
    CHECK(direct_residual(d, s) < 1e-8 * (1.0 + top));
    CHECK(reconstruction_residual(d, s) == doctest::Approx(direct_residual(d, s)).epsilon(1e-6));
}

}  // namespace

TEST_CASE("gram_schmidt on hand examples") {
    const auto id = RealMatrix::identity(3);
    const auto f = gram_schmidt(id);
    CHECK(f.q == id);
    CHECK(f.r == id);

    const auto m = RealMatrix::from_columns({{1.0, 0.0}, {1.0, 1.0}});
    const auto g = gram_schmidt(m);
    CHECK(max_abs_diff(g.q, RealMatrix::identity(2)) < 1e-15);
    CHECK(max_abs_diff(g.r, RealMatrix::from_rows({{1.0, 1.0}, {0.0, 1.0}})) < 1e-15);
}

TEST_CASE("gram_schmidt rejects dependent columns") {
    const auto m = RealMatrix::from_columns({{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}});
    try {
        (void)gram_schmidt(m);
        FAIL("expected RankDeficient");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::RankDeficient);
    }
}

TEST_CASE("gram_schmidt on a 64 x 8 Gaussian block") {
    RngStream rng(11, 0);
    const auto z = sample_matrix<double>(EntryLaw::real_gaussian(), 64, 8, rng);
    const auto f = gram_schmidt(z);
    CHECK(orthonormality_defect(f.q) < 1e-12);
    for (std::size_t j = 0; j < 8; ++j) {
        CHECK(f.r(j, j) > 0.0);
        for (std::size_t i = j + 1; i < 8; ++i) CHECK(f.r(i, j) == 0.0);
    }
}

TEST_CASE("gram_schmidt reconstructs its input") {
    RngStream rng(12, 0);
    double worst = 0.0;
    for (int inst = 0; inst < 200; ++inst) {
        const std::size_t rows = 2 + rng() % 63;
        const std::size_t cols = 1 + rng() % rows;
        if (inst % 2 == 0) {
            const auto z = sample_matrix<double>(EntryLaw::real_gaussian(), rows, cols, rng);
            const auto f = gram_schmidt(z);
            worst = std::max(worst, max_abs_diff(multiply(f.q, f.r), z));
        } else {
            const auto z = sample_matrix<Complex>(EntryLaw::complex_gaussian(), rows, cols, rng);
            const auto f = gram_schmidt(z);
            worst = std::max(worst, max_abs_diff(multiply(f.q, f.r), z));
            for (std::size_t j = 0; j < cols; ++j) CHECK(f.r(j, j).imag() == 0.0);
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("sym_eig of a diagonal matrix") {
    const auto s = RealMatrix::from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}});
    const auto d = sym_eig(s);
    CHECK(d.eigenvalues == std::vector<double>{1.0, 2.0, 3.0});
    const auto expected = RealMatrix::from_columns({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
    CHECK(max_abs_diff(d.eigenvectors, expected) < 1e-15);
}

TEST_CASE("sym_eig of a 2 x 2 matrix") {
    const auto s = RealMatrix::from_rows({{0.5, 0.5}, {0.5, 1.5}});
    const auto d = sym_eig(s);
    // Characteristic polynomial l^2 - 2 l + 1/2.
    CHECK(d.eigenvalues[0] == doctest::Approx(1.0 - std::sqrt(2.0) / 2.0).epsilon(1e-14));
    CHECK(d.eigenvalues[1] == doctest::Approx(1.0 + std::sqrt(2.0) / 2.0).epsilon(1e-14));
    check_decomposition(s, d);
}

TEST_CASE("sym_eig sign and phase convention") {
    RngStream rng(13, 0);
    const auto d = sym_eig(random_hermitian<Complex>(20, rng));
    for (std::size_t j = 0; j < d.size(); ++j) {
        const auto col = d.eigenvectors.col(j);
        std::size_t best = 0;
        for (std::size_t i = 1; i < col.size(); ++i)
            if (std::abs(col[i]) > std::abs(col[best]) * (1.0 + 1e-12)) best = i;
        CHECK(col[best].imag() == 0.0);
        CHECK(col[best].real() > 0.0);
    }
    const auto r = sym_eig(RealMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
    // Entries tie in magnitude; the lowest index is made positive.
    CHECK(r.eigenvectors(0, 0) > 0.0);
    CHECK(r.eigenvectors(0, 1) > 0.0);
}

TEST_CASE("sym_eig on random 50 x 50 inputs") {
    RngStream rng(14, 0);
    const auto s = random_hermitian<double>(50, rng);
    check_decomposition(s, sym_eig(s));
    const auto h = random_hermitian<Complex>(50, rng);
    check_decomposition(h, sym_eig(h));
}

TEST_CASE("sym_eig handles repeated eigenvalues") {
    auto s = RealMatrix::identity(6);
    s(0, 0) = 2.0;
    const auto d = sym_eig(s);
    check_decomposition(s, d);
    CHECK(d.eigenvalues.back() == 2.0);

    RngStream rng(15, 0);
    const auto v = sample_matrix<double>(EntryLaw::rademacher(), 12, 4, rng);
    const auto low_rank = scaled_gram(v, 0.25);
    const auto e = sym_eig(low_rank);
    check_decomposition(low_rank, e);
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(e.eigenvalues[i]) < 1e-12);
}

TEST_CASE("sym_eig rejects non-symmetric input") {
    const auto s = RealMatrix::from_rows({{1.0, 2.0}, {0.0, 1.0}});
    try {
        (void)sym_eig(s);
        FAIL("expected NotSymmetric");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotSymmetric);
    }
}

TEST_CASE("sym_eig shift equivariance") {
    RngStream rng(16, 0);
    for (int inst = 0; inst < 20; ++inst) {
        const auto s = random_hermitian<Complex>(16, rng);
        const double c = 10.0 * (rng.uniform() - 0.5);
        auto shifted = s;
        for (std::size_t i = 0; i < 16; ++i) shifted(i, i) += c;
        const auto a = sym_eigenvalues(s);
        const auto b = sym_eigenvalues(shifted);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(b[i] - c - a[i]) < 1e-9);
    }
}

TEST_CASE("eigenvalue-only and projected solvers agree with the full one") {
    RngStream rng(17, 0);
    const auto s = random_hermitian<Complex>(30, rng);
    const auto d = sym_eig(s);
    const auto vals = sym_eigenvalues(s);
    for (std::size_t i = 0; i < vals.size(); ++i) CHECK(vals[i] == doctest::Approx(d.eigenvalues[i]).epsilon(1e-12));

    const auto probes = sample_matrix<Complex>(EntryLaw::complex_gaussian(), 30, 3, rng);
    const auto p = sym_eig_projected(s, probes);
    const auto q = project(d, probes);
    for (std::size_t i = 0; i < 30; ++i) {
        CHECK(p.eigenvalues[i] == doctest::Approx(d.eigenvalues[i]).epsilon(1e-12));
        // Rows agree up to the unit phase of each eigenvector: compare
        // the phase-free products c_ik conj(c_il).
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t l = 0; l < 3; ++l)
                CHECK(std::abs(p.coefficients(i, k) * std::conj(p.coefficients(i, l)) -
                               q.coefficients(i, k) * std::conj(q.coefficients(i, l))) < 1e-9);
    }
}

TEST_CASE("scaled_gram is exactly Hermitian") {
    RngStream rng(18, 0);
    const auto v = sample_matrix<Complex>(EntryLaw::complex_gaussian(), 9, 17, rng);
    const auto m = scaled_gram(v, 1.0 / 17.0);
    CHECK(m == adjoint(m));
    const auto direct = multiply(v, adjoint(v));
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j) CHECK(std::abs(m(i, j) - direct(i, j) / 17.0) < 1e-14);
}

TEST_CASE("resolvent_quadratic_form hand values") {
    const std::size_t n = 5;
    const auto zero = sym_eig(RealMatrix(n, n));
    std::vector<double> v(n, 1.0 / std::sqrt(5.0));
    CHECK(resolvent_quadratic_form<double>(zero, v, v, 3.0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    std::vector<double> x = {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0, 0.0, 0.0};
    CHECK(resolvent_quadratic_form<double>(zero, x, v, 3.0, 1) == 0.0);

    const auto d = sym_eig(RealMatrix::from_rows({{0.0, 0.0}, {0.0, 1.0}}));
    const std::vector<double> w = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    CHECK(resolvent_quadratic_form<double>(d, w, w, 1.0 + std::sqrt(2.0) / 2.0, 1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("resolvent_quadratic_form pole guard") {
    const auto d = sym_eig(RealMatrix::from_rows({{0.0, 0.0}, {0.0, 1.0}}));
    const std::vector<double> w = {1.0, 0.0};
    try {
        (void)resolvent_quadratic_form<double>(d, w, w, 1.0 + 1e-15, 1);
        FAIL("expected PoleTooClose");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::PoleTooClose);
    }
}

TEST_CASE("resolvent_quadratic_form is decreasing above the spectrum") {
    RngStream rng(19, 0);
    const auto d = sym_eig(random_hermitian<Complex>(24, rng));
    const auto v = random_unit<Complex>(24, rng);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 100; ++k) {
        const double lambda = d.max_eigenvalue() + 0.05 * k;
        const double value = real_part(resolvent_quadratic_form<Complex>(d, v, v, lambda, 1));
        CHECK(value < prev);
        prev = value;
    }
}

TEST_CASE("resolvent trace identity") {
    RngStream rng(20, 0);
    const std::size_t n = 18;
    const auto d = sym_eig(random_hermitian<double>(n, rng));
    const double lambda = d.max_eigenvalue() + 0.7;
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        lhs += resolvent_quadratic_form<double>(d, e, e, lambda, 1);
        rhs += 1.0 / (lambda - d.eigenvalues[i]);
    }
    CHECK(std::abs(lhs - rhs) < 1e-9);
}
