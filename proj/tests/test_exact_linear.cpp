#include "doctest.h"

#include "vlab/linalg.hpp"
#include "vlab/qseries.hpp"
#include "vlab/rational.hpp"

#include <random>

using namespace vlab;

namespace {

// p(n) from Euler's pentagonal recurrence, independent of the enumeration and the series code.
std::vector<long> pentagonal_partition_counts(int n) {
    std::vector<long> p(static_cast<std::size_t>(n + 1), 0);
    p[0] = 1;
    for (int m = 1; m <= n; ++m) {
        long s = 0;
        for (int k = 1;; ++k) {
            const int g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
            if (g1 > m) break;
            const long sign = (k % 2) ? 1 : -1;
            s += sign * p[static_cast<std::size_t>(m - g1)];
            if (g2 <= m) s += sign * p[static_cast<std::size_t>(m - g2)];
        }
        p[static_cast<std::size_t>(m)] = s;
    }
    return p;
}

RatMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int density_percent) {
    std::uniform_int_distribution<int> coin(0, 99), val(-4, 4), den(1, 3);
    RatMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (coin(rng) < density_percent) m.set(r, c, Rational(val(rng), den(rng)));
    return m;
}

bool annihilates(const RatMatrix& m, const RatVector& v) {
    for (const auto& x : m.apply(v))
        if (!x.is_zero()) return false;
    return true;
}

}  // namespace

TEST_CASE("rational arithmetic stays in lowest terms") {
    Rational a(6, -4);
    CHECK(a.str() == "-3/2");
    CHECK((a + Rational(3, 2)).is_zero());
    CHECK(Rational::parse("10/4") == Rational(5, 2));
    CHECK(Rational::parse("-7").str() == "-7");
    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("x"), std::invalid_argument);
    CHECK(pow(Rational(2, 3), -2) == Rational(9, 4));
    CHECK(binomial(-2, 3) == Rational(-4));  // (-2)(-3)(-4)/3!
    CHECK(binomial(5, 2) == Rational(10));
}

TEST_CASE("rank and kernel of small matrices") {
    auto id = RatMatrix::identity(2);
    auto rk = matrix_rank_kernel(id);
    CHECK(rk.rank == 2);
    CHECK(rk.kernel_basis.empty());

    auto row = RatMatrix::from_rows({{Rational(1), Rational(-1)}});
    rk = matrix_rank_kernel(row);
    CHECK(rk.rank == 1);
    REQUIRE(rk.kernel_basis.size() == 1);
    CHECK(rk.kernel_basis[0] == RatVector{Rational(1), Rational(1)});

    RatMatrix z(3, 4);
    CHECK(matrix_rank_kernel(z).kernel_basis.size() == 4);
}

TEST_CASE("no stored zeros") {
    RatMatrix m(2, 2);
    m.set(0, 0, Rational(1));
    m.add(0, 0, Rational(-1));
    m.set(1, 1, Rational(0));
    CHECK(m.nonzeros() == 0);
    CHECK(m.is_zero());
}

TEST_CASE("rank-nullity and kernel property on random matrices") {
    std::mt19937 rng(20240611);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t rows = 1 + rng() % 9, cols = 1 + rng() % 9;
        const auto m = random_matrix(rng, rows, cols, trial % 2 ? 30 : 70);
        const auto rk = matrix_rank_kernel(m);
        CHECK(rk.rank + rk.kernel_basis.size() == cols);
        for (const auto& v : rk.kernel_basis) CHECK(annihilates(m, v));
        CHECK(matrix_rank(m.transpose()) == rk.rank);
        // the dense and the sparse eliminations agree
        CHECK(detail::rank_kernel_sparse(m).rank == detail::rank_kernel_dense(m).rank);
        CHECK(detail::rank_kernel_sparse(m).kernel_basis == detail::rank_kernel_dense(m).kernel_basis);
    }
}

TEST_CASE("large sparse matrices take the sparse path and keep the kernel property") {
    std::mt19937 rng(7);
    const auto a = random_matrix(rng, 40, 90, 4);
    const auto b = random_matrix(rng, 90, 70, 4);
    const auto m = a * b;  // rank <= 40
    const auto rk = matrix_rank_kernel(m);
    CHECK(rk.rank <= 40);
    CHECK(rk.rank + rk.kernel_basis.size() == 70);
    for (const auto& v : rk.kernel_basis) CHECK(annihilates(m, v));
}

TEST_CASE("deterministic output") {
    std::mt19937 rng1(3), rng2(3);
    const auto m1 = random_matrix(rng1, 6, 8, 50), m2 = random_matrix(rng2, 6, 8, 50);
    CHECK(matrix_rank_kernel(m1).kernel_basis == matrix_rank_kernel(m2).kernel_basis);
}

TEST_CASE("solve_linear") {
    auto a = RatMatrix::from_rows({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}});
    auto s = solve_linear(a, {Rational(3), Rational(6)});
    REQUIRE(s.consistent);
    CHECK(a.apply(s.particular) == RatVector{Rational(3), Rational(6)});
    CHECK(s.null_space.size() == 1);
    CHECK_FALSE(solve_linear(a, {Rational(3), Rational(7)}).consistent);
}

TEST_CASE("partitions") {
    CHECK(partitions(0) == std::vector<Partition>{Partition{}});
    CHECK(partitions(4).size() == 5);
    CHECK(partitions(8).size() == 22);
    CHECK(partitions(4) == std::vector<Partition>{{4}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}});
    const auto oracle = pentagonal_partition_counts(12);
    const QSeries pgf = partition_generating_function(12);
    for (int n = 0; n <= 12; ++n) {
        CHECK(static_cast<long>(partitions(n).size()) == oracle[static_cast<std::size_t>(n)]);
        CHECK(pgf.coefficient(n) == Rational(oracle[static_cast<std::size_t>(n)]));
    }
}

TEST_CASE("q-series products") {
    const QSeries a(0, 6, {Rational(1), Rational(2), Rational(0), Rational(-1), Rational(1, 2), Rational(0), Rational(3)});
    CHECK((a * QSeries::constant(Rational(1), 6)).agrees_with(a));

    QSeries one_minus_q(0, 10);
    one_minus_q.add_to(0, Rational(1));
    one_minus_q.add_to(1, Rational(-1));
    const QSeries t = one_minus_q * QSeries::geometric(10);
    CHECK(t.agrees_with(QSeries::constant(Rational(1), 10)));

    // cutoff of a product is the smaller one
    CHECK((QSeries::geometric(4) * QSeries::geometric(9)).cutoff() == 4);

    const QSeries p = partition_generating_function(8);
    const std::vector<long> expect{1, 1, 2, 3, 5, 7, 11, 15, 22};
    for (int n = 0; n <= 8; ++n) CHECK(p.coefficient(n) == Rational(expect[static_cast<std::size_t>(n)]));
    CHECK((p * p.inverse()).agrees_with(QSeries::constant(Rational(1), 8)));
}

TEST_CASE("q-series with negative exponents") {
    const QSeries a = QSeries::monomial(Rational(1), -1, 5) + QSeries::constant(Rational(1), 5);
    const QSeries b = a * a;
    CHECK(b.min_exponent() == -2);
    CHECK(b.coefficient(-2) == Rational(1));
    CHECK(b.coefficient(-1) == Rational(2));
    CHECK(b.coefficient(0) == Rational(1));
    CHECK(b.cutoff() == 4);
}
