#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "loopalg/linalg.hpp"

using namespace loopalg;

namespace {

const Rationals QQ;
const PrimeField F2(2);

template <class F>
SparseMatrix<F> dense(const F& f, const std::vector<std::vector<long>>& rows) {
    return SparseMatrix<F>::from_dense(f, rows);
}

// Naive dense Gaussian elimination over Q, the oracle for rank.
std::size_t dense_rank(std::vector<std::vector<mpq_class>> a) {
    std::size_t rank = 0;
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || a[r][c] == 0) continue;
            mpq_class k = a[r][c] / a[rank][c];
            for (std::size_t j = c; j < cols; ++j) a[r][j] -= k * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

std::vector<std::vector<long>> random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, double density) {
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<long> v(-3, 3);
    std::vector<std::vector<long>> m(r, std::vector<long>(c, 0));
    for (auto& row : m)
        for (auto& x : row)
            if (u(rng) < density) x = v(rng);
    return m;
}

}  // namespace

TEST(GradedBasis, LabelsAreUnique) {
    GradedBasis b;
    EXPECT_EQ(b.add("x", 2), 0u);
    EXPECT_EQ(b.add("y", 3), 1u);
    EXPECT_THROW(b.add("x", 4), ShapeError);
    EXPECT_EQ(*b.find("y"), 1u);
    EXPECT_FALSE(b.find("z").has_value());
    EXPECT_EQ(b.degree(1), 3);
}

TEST(RowReduce, Identity) {
    auto r = row_reduce(QQ, SparseMatrix<Rationals>::identity(QQ, 2));
    EXPECT_EQ(r.rank, 2u);
    EXPECT_EQ(r.reduced.entries().size(), 2u);
    EXPECT_EQ(r.reduced.at(QQ, 0, 0), 1);
    EXPECT_EQ(r.reduced.at(QQ, 1, 1), 1);
}

TEST(RowReduce, ZeroMatrix) {
    SparseMatrix<Rationals> z(3, 4);
    EXPECT_EQ(row_reduce(QQ, z).rank, 0u);
    EXPECT_EQ(row_reduce(QQ, SparseMatrix<Rationals>(0, 0)).rank, 0u);
}

TEST(RowReduce, RankOneExample) {
    auto m = dense(QQ, {{1, 2}, {2, 4}});
    auto r = row_reduce(QQ, m);
    EXPECT_EQ(r.rank, 1u);
    EXPECT_EQ(r.pivot_columns, std::vector<std::size_t>{0});
}

TEST(RowReduce, BasisChangeTimesInputIsReduced) {
    std::mt19937 rng(7);
    for (int t = 0; t < 20; ++t) {
        auto m = dense(QQ, random_matrix(rng, 6, 8, 0.4));
        auto r = row_reduce(QQ, m);
        auto prod = multiply(QQ, r.basis_change, m);
        for (std::size_t j = 0; j < m.cols; ++j) EXPECT_TRUE(prod.columns[j].equals(QQ, r.reduced.columns[j]));
        // Reduced row-echelon: each pivot column is a unit vector.
        for (std::size_t k = 0; k < r.pivot_columns.size(); ++k) {
            const auto& col = r.reduced.columns[r.pivot_columns[k]];
            ASSERT_EQ(col.terms.size(), 1u);
            EXPECT_EQ(col.terms[0].index, static_cast<Index>(k));
            EXPECT_EQ(col.terms[0].value, 1);
        }
    }
}

TEST(SolveLinear, Examples) {
    auto id = SparseMatrix<Rationals>::identity(QQ, 3);
    auto b = SparseVector<Rationals>::from_pairs(QQ, {{0, mpq_class(2)}, {2, mpq_class(-1)}});
    auto x = solve_linear(QQ, id, b);
    ASSERT_TRUE(x);
    EXPECT_TRUE(x->equals(QQ, b));

    SparseMatrix<Rationals> z(2, 2);
    EXPECT_FALSE(solve_linear(QQ, z, SparseVector<Rationals>::unit(QQ, 1)).has_value());

    auto two = dense(QQ, {{2}});
    auto half = solve_linear(QQ, two, SparseVector<Rationals>::unit(QQ, 0));
    ASSERT_TRUE(half);
    EXPECT_EQ(half->at(QQ, 0), mpq_class(1, 2));
}

TEST(SolveLinear, FreeVariablesAreZero) {
    // Column 1 depends on column 0; the echelon solution leaves it at zero.
    auto m = dense(QQ, {{1, 2, 0}, {0, 0, 1}});
    auto b = SparseVector<Rationals>::from_pairs(QQ, {{0, mpq_class(4)}, {1, mpq_class(5)}});
    auto x = solve_linear(QQ, m, b);
    ASSERT_TRUE(x);
    EXPECT_EQ(x->at(QQ, 0), 4);
    EXPECT_EQ(x->at(QQ, 1), 0);
    EXPECT_EQ(x->at(QQ, 2), 5);
}

TEST(SolveLinear, ShapeMismatchThrows) {
    auto m = dense(QQ, {{1, 0}});
    EXPECT_THROW(solve_linear(QQ, m, SparseVector<Rationals>::unit(QQ, 3)), ShapeError);
}

TEST(SolveLinear, RandomSystemsSatisfyEquation) {
    std::mt19937 rng(99);
    for (int t = 0; t < 30; ++t) {
        auto m = dense(QQ, random_matrix(rng, 5, 7, 0.5));
        auto xs = random_matrix(rng, 1, 7, 0.6)[0];
        std::vector<std::pair<Index, mpq_class>> pairs;
        for (std::size_t i = 0; i < xs.size(); ++i) pairs.push_back({static_cast<Index>(i), mpq_class(xs[i])});
        auto b = apply(QQ, m, SparseVector<Rationals>::from_pairs(QQ, pairs));
        auto x = solve_linear(QQ, m, b);
        ASSERT_TRUE(x);
        EXPECT_TRUE(apply(QQ, m, *x).equals(QQ, b));
    }
}

TEST(HomologySlice, AllCyclesNoBoundaries) {
    SparseMatrix<Rationals> din(3, 0), dout(0, 3);
    EXPECT_EQ(homology_of_slice(QQ, din, dout, 0).betti(), 3u);
}

TEST(HomologySlice, Exact) {
    auto din = SparseMatrix<Rationals>::identity(QQ, 2);
    SparseMatrix<Rationals> dout(0, 2);
    EXPECT_EQ(homology_of_slice(QQ, din, dout, 0).betti(), 0u);
}

TEST(HomologySlice, MultiplicationByTwoDependsOnCharacteristic) {
    auto h2 = homology_of_slice(F2, dense(F2, {{2}}), SparseMatrix<PrimeField>(0, 1), 0);
    auto hq = homology_of_slice(QQ, dense(QQ, {{2}}), SparseMatrix<Rationals>(0, 1), 0);
    EXPECT_EQ(h2.betti(), 1u);
    EXPECT_EQ(hq.betti(), 0u);
}

TEST(HomologySlice, NotAComplexThrows) {
    auto din = dense(QQ, {{1}, {0}});
    auto dout = dense(QQ, {{1, 0}});
    EXPECT_THROW(homology_of_slice(QQ, din, dout, 0), NotAComplex);
}

TEST(HomologySlice, RepresentativesAreCyclesAndProjectorKillsBoundaries) {
    std::mt19937 rng(3);
    for (int t = 0; t < 20; ++t) {
        // d_out * d_in = 0 by construction: d_in = K * X with K spanning ker d_out.
        auto dout = dense(QQ, random_matrix(rng, 3, 7, 0.5));
        auto ker = kernel_basis(QQ, dout);
        SparseMatrix<Rationals> din(7, 4);
        std::uniform_int_distribution<long> v(-2, 2);
        for (std::size_t j = 0; j < 4; ++j)
            for (const auto& k : ker)
                if (long c = v(rng)) axpy(QQ, mpq_class(c), k, din.columns[j]);
        auto h = homology_of_slice(QQ, din, dout, 0);
        EXPECT_EQ(h.betti(), ker.size() - rank_of(QQ, din));
        for (std::size_t k = 0; k < h.betti(); ++k) {
            const auto& r = h.representatives()[k];
            EXPECT_TRUE(apply(QQ, dout, r).empty());
            auto coords = h.project(QQ, r);
            for (std::size_t i = 0; i < coords.size(); ++i) EXPECT_EQ(coords[i], i == k ? 1 : 0);
        }
        for (std::size_t j = 0; j < 4; ++j) EXPECT_TRUE(h.is_boundary(QQ, din.columns[j]));
    }
}

TEST(KernelEchelonBasis, DistinctUnitLeadsSpanningTheKernel) {
    std::mt19937 rng(11);
    for (int t = 0; t < 30; ++t) {
        auto m = dense(QQ, random_matrix(rng, 4, 9, 0.4));
        auto ker = kernel_echelon_basis(QQ, m);
        EXPECT_EQ(ker.size(), 9 - rank_of(QQ, m));
        std::set<Index> leads;
        for (const auto& z : ker) {
            EXPECT_TRUE(apply(QQ, m, z).empty());
            EXPECT_EQ(z.terms.front().value, 1);
            EXPECT_TRUE(leads.insert(z.lead()).second);
        }
    }
}

TEST(Rank, InvariantUnderPermutation) {
    std::mt19937 rng(11);
    for (int t = 0; t < 25; ++t) {
        auto rows = random_matrix(rng, 6, 9, 0.35);
        auto base = rank_of(QQ, dense(QQ, rows));
        std::vector<std::size_t> rp(6), cp(9);
        std::iota(rp.begin(), rp.end(), 0);
        std::iota(cp.begin(), cp.end(), 0);
        std::shuffle(rp.begin(), rp.end(), rng);
        std::shuffle(cp.begin(), cp.end(), rng);
        std::vector<std::vector<long>> perm(6, std::vector<long>(9));
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 9; ++j) perm[i][j] = rows[rp[i]][cp[j]];
        EXPECT_EQ(rank_of(QQ, dense(QQ, perm)), base);
    }
}

TEST(Rank, MatchesDenseOracle) {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<std::size_t> dim(1, 50);
    for (int t = 0; t < 40; ++t) {
        std::size_t r = dim(rng), c = dim(rng);
        auto rows = random_matrix(rng, r, c, t % 2 ? 0.1 : 0.4);
        // Plant dependent rows so low ranks occur too.
        if (r > 2) rows[r - 1] = rows[0];
        std::vector<std::vector<mpq_class>> q(r, std::vector<mpq_class>(c));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) q[i][j] = rows[i][j];
        auto m = dense(QQ, rows);
        EXPECT_EQ(rank_of(QQ, m), dense_rank(q));
        EXPECT_EQ(row_reduce(QQ, m).rank, dense_rank(q));
    }
}
