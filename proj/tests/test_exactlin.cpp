#include "sdchain/linalg.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sdchain;

namespace {

using QMatrix = Matrix<RationalField>;
using PMatrix = Matrix<PrimeField>;

template <class F>
Matrix<F> random_matrix(const F& f, std::size_t r, std::size_t c, std::mt19937_64& rng, double density = 1.0)
{
    std::bernoulli_distribution keep(density);
    Matrix<F> m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (keep(rng))
                m(i, j) = f.random(rng);
    return m;
}

/// Random matrix of a prescribed rank, built as a product of thin factors.
PMatrix random_low_rank(const PrimeField& f, std::size_t r, std::size_t c, std::size_t k, std::mt19937_64& rng)
{
    return random_matrix(f, r, k, rng) * random_matrix(f, k, c, rng);
}

/// Textbook elimination, one entry at a time, used as the reference for the blocked kernel.
PMatrix naive_rref(PMatrix m, std::vector<std::size_t>& pivots)
{
    const PrimeField& f = m.field();
    std::size_t r = 0;
    pivots.clear();
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0.0)
            ++p;
        if (p == m.rows())
            continue;
        for (std::size_t j = 0; j < m.cols(); ++j)
            std::swap(m(p, j), m(r, j));
        const double s = f.inv(m(r, c));
        for (std::size_t j = 0; j < m.cols(); ++j)
            m(r, j) = f.mul(m(r, j), s);
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (i != r && m(i, c) != 0.0) {
                const double t = m(i, c);
                for (std::size_t j = 0; j < m.cols(); ++j)
                    m(i, j) = f.sub(m(i, j), f.mul(t, m(r, j)));
            }
        pivots.push_back(c);
        ++r;
    }
    return m;
}

}  // namespace

TEST(Rref, IdentityIsFixed)
{
    const PrimeField f(101);
    const auto id = PMatrix::identity(f, 2);
    const auto e = rref(id);
    EXPECT_EQ(e.matrix, id);
    EXPECT_EQ(e.rank, 2u);
    EXPECT_EQ(e.pivot_cols, (std::vector<std::size_t>{0, 1}));
}

TEST(Rref, ZeroMatrixHasRankZero)
{
    const PrimeField f;
    const PMatrix z(f, 3, 4);
    const auto e = rref(z);
    EXPECT_EQ(e.matrix, z);
    EXPECT_EQ(e.rank, 0u);
    EXPECT_TRUE(e.pivot_cols.empty());
}

TEST(Rref, RationalRankOneExample)
{
    const RationalField q;
    const auto e = rref(QMatrix::from_ints(q, {{1, 2}, {2, 4}}));
    EXPECT_EQ(e.matrix, QMatrix::from_ints(q, {{1, 2}, {0, 0}}));
    EXPECT_EQ(e.rank, 1u);
    EXPECT_EQ(e.pivot_cols, (std::vector<std::size_t>{0}));
}

TEST(Rref, RationalEntriesStayNormalized)
{
    const RationalField q;
    const auto e = rref(QMatrix::from_ints(q, {{2, 1, 0}, {4, 0, 3}}));
    EXPECT_EQ(e.rank, 2u);
    EXPECT_EQ(q.to_string(e.matrix(0, 2)), "3/4");
    EXPECT_EQ(q.to_string(e.matrix(1, 2)), "-3/2");
}

TEST(Rref, EmptyShapes)
{
    const PrimeField f;
    EXPECT_EQ(rref(PMatrix(f, 0, 5)).rank, 0u);
    EXPECT_EQ(rref(PMatrix(f, 4, 0)).rank, 0u);
    EXPECT_EQ(kernel_basis(PMatrix(f, 0, 3)).cols(), 3u);
}

TEST(KernelBasis, InjectiveMapHasEmptyKernel)
{
    const PrimeField f;
    const auto k = kernel_basis(PMatrix::identity(f, 4));
    EXPECT_EQ(k.rows(), 4u);
    EXPECT_EQ(k.cols(), 0u);
}

TEST(KernelBasis, ZeroMapHasFullKernel)
{
    const PrimeField f;
    const auto k = kernel_basis(PMatrix(f, 3, 3));
    EXPECT_EQ(k.cols(), 3u);
    EXPECT_EQ(rank(k), 3u);
}

TEST(KernelBasis, RationalLine)
{
    const RationalField q;
    const auto k = kernel_basis(QMatrix::from_ints(q, {{1, 2}, {2, 4}}));
    ASSERT_EQ(k.cols(), 1u);
    EXPECT_EQ(k, QMatrix::from_ints(q, {{-2}, {1}}));
}

TEST(Solve, IdentityReturnsRightHandSide)
{
    const PrimeField f(7);
    const auto b = PMatrix::from_ints(f, {{1, 2}, {3, 4}, {5, 6}});
    const auto x = solve(PMatrix::identity(f, 3), b);
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(*x, b);
}

TEST(Solve, ZeroSystemWithNonzeroRightSideIsInconsistent)
{
    const PrimeField f;
    EXPECT_FALSE(solve(PMatrix(f, 2, 2), PMatrix::from_ints(f, {{1}, {0}})).has_value());
}

TEST(Solve, InverseModFive)
{
    const PrimeField f(5);
    const auto x = solve(PMatrix::from_ints(f, {{2}}), PMatrix::from_ints(f, {{1}}));
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(*x, PMatrix::from_ints(f, {{3}}));
}

TEST(Field, PrimeArithmetic)
{
    const PrimeField f(32003);
    EXPECT_EQ(f.mul(f.inv(12345.0), 12345.0), 1.0);
    EXPECT_EQ(f.from_int(-1), 32002.0);
    EXPECT_EQ(f.parse("1/2"), f.inv(2.0));
    EXPECT_THROW(PrimeField(32004), std::invalid_argument);
    EXPECT_THROW(FieldSpec::parse("12"), std::invalid_argument);
    EXPECT_EQ(FieldSpec::parse("Q").kind, FieldSpec::Kind::rationals);
}

// The blocked elimination path must agree with entry-by-entry elimination,
// including across panel boundaries and on rank-deficient inputs.
TEST(RrefProperty, BlockedAgreesWithNaive)
{
    std::mt19937_64 rng(11);
    for (std::uint32_t p : {2u, 3u, 32003u, 67108859u}) {
        const PrimeField f(p);
        for (auto [r, c, k] : {std::tuple{5, 7, 3}, {300, 420, 260}, {450, 300, 451}, {257, 600, 100}}) {
            auto m = k > std::min(r, c) ? random_matrix(f, r, c, rng, 0.3) : random_low_rank(f, r, c, k, rng);
            std::vector<std::size_t> np;
            const auto expect = naive_rref(m, np);
            const auto got = rref(m);
            EXPECT_EQ(got.pivot_cols, np) << "p=" << p << " shape " << r << "x" << c;
            EXPECT_EQ(got.matrix, expect) << "p=" << p << " shape " << r << "x" << c;
        }
    }
}

TEST(RrefProperty, Idempotent)
{
    std::mt19937_64 rng(5);
    const PrimeField f;
    const auto m = random_low_rank(f, 200, 350, 120, rng);
    const auto once = rref(m).matrix;
    EXPECT_EQ(rref(once).matrix, once);
    const RationalField q;
    const auto mq = random_matrix(q, 6, 8, rng, 0.5);
    const auto onceq = rref(mq).matrix;
    EXPECT_EQ(rref(onceq).matrix, onceq);
}

TEST(KernelProperty, RankNullity)
{
    std::mt19937_64 rng(7);
    const PrimeField f;
    for (auto [r, c, k] : {std::tuple{40, 90, 17}, {300, 250, 200}, {10, 10, 10}}) {
        const auto m = random_low_rank(f, r, c, k, rng);
        const auto kb = kernel_basis(m);
        EXPECT_TRUE((m * kb).is_zero());
        EXPECT_EQ(rank(m) + kb.cols(), m.cols());
        EXPECT_EQ(rank(kb), kb.cols());
    }
    const RationalField q;
    const auto mq = random_matrix(q, 5, 9, rng, 0.6);
    const auto kq = kernel_basis(mq);
    EXPECT_TRUE((mq * kq).is_zero());
    EXPECT_EQ(rank(mq) + kq.cols(), 9u);
}

TEST(SolveProperty, SubstitutionReproducesRightHandSide)
{
    std::mt19937_64 rng(3);
    const PrimeField f;
    const auto a = random_low_rank(f, 80, 60, 45, rng);
    const auto b = a * random_matrix(f, 60, 4, rng);
    const auto x = solve(a, b);
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(a * *x, b);
    const RationalField q;
    const auto aq = random_matrix(q, 4, 6, rng);
    const auto bq = aq * random_matrix(q, 6, 2, rng);
    const auto xq = solve(aq, bq);
    ASSERT_TRUE(xq.has_value());
    EXPECT_EQ(aq * *xq, bq);
}

TEST(RowSpace, IncrementalSpanMatchesRank)
{
    std::mt19937_64 rng(9);
    const PrimeField f;
    const auto m = random_low_rank(f, 500, 300, 230, rng);
    RowSpace<PrimeField> space(f, 300);
    for (std::size_t b = 0; b < 500; b += 64)
        space.add(m.row_range(b, std::min<std::size_t>(500, b + 64)));
    EXPECT_EQ(space.dim(), 230u);
    EXPECT_EQ(rref(space.basis()).matrix.row_range(0, 230), rref(m).matrix.row_range(0, 230));
    auto copy = m;
    space.reduce(copy);
    EXPECT_TRUE(copy.is_zero());
}

TEST(RowSpace, RationalContainment)
{
    const RationalField q;
    RowSpace<RationalField> space(q, 3);
    space.add(QMatrix::from_ints(q, {{1, 1, 0}}));
    EXPECT_TRUE(space.contains({q.from_int(2), q.from_int(2), q.zero()}));
    EXPECT_FALSE(space.contains({q.one(), q.zero(), q.zero()}));
    space.add(QMatrix::from_ints(q, {{0, 1, 1}, {1, 2, 1}}));
    EXPECT_EQ(space.dim(), 2u);
}

TEST(IndependentRows, GreedyLowestIndex)
{
    const PrimeField f;
    const auto m = PMatrix::from_ints(f, {{0, 0}, {1, 2}, {2, 4}, {0, 1}});
    EXPECT_EQ(independent_rows(m), (std::vector<std::size_t>{1, 3}));
}

TEST(Gemm, ExactAgainstScalarProducts)
{
    std::mt19937_64 rng(21);
    for (std::uint32_t p : {7u, 32003u, 67108859u}) {
        const PrimeField f(p);
        const auto a = random_matrix(f, 192, 300, rng);
        const auto b = random_matrix(f, 300, 198, rng);
        const auto c = a * b;
        std::size_t bad = 0;
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < a.cols(); ++k)
                    s = f.add(s, f.mul(a(i, k), b(k, j)));
                bad += s != c(i, j);
            }
        EXPECT_EQ(bad, 0u) << "p=" << p;
    }
}
