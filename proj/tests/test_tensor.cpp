// SPDX-License-Identifier: MIT
#include "oracles.hpp"

#include "trom/tensor.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace trom;

namespace {

DenseTensor one_to_eight() {
    std::vector<double> v(8);
    std::iota(v.begin(), v.end(), 1.0);
    return DenseTensor({2, 2, 2}, v);
}

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
    EXPECT_EQ(a.dims(), b.dims());
    double m = 0;
    for (Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(DenseTensor, RejectsMismatchedData) {
    EXPECT_THROW(DenseTensor({2, 3}, std::vector<double>(5)), InvalidArgument);
    EXPECT_THROW(DenseTensor(std::vector<Index>{2, 0}), InvalidArgument);
    EXPECT_THROW(DenseTensor(std::vector<Index>{}), InvalidArgument);
}

TEST(DenseTensor, LinearIndexIsModeZeroFastest) {
    const DenseTensor t = one_to_eight();
    const std::vector<Index> idx{1, 0, 1};
    EXPECT_EQ(t.at(idx), 6.0);
}

TEST(Unfold, MatrixIsItsOwnUnfolding) {
    const Matrix m = oracle::random_matrix(4, 3, 1);
    EXPECT_EQ(unfold_mode1(DenseTensor::from_matrix(m)), m);
}

TEST(Unfold, OneToEightByHand) {
    Matrix expected(2, 4);
    expected << 1, 3, 5, 7, 2, 4, 6, 8;
    EXPECT_EQ(unfold_mode1(one_to_eight()), expected);
}

TEST(Unfold, RankOneTensorGivesRankOneMatrix) {
    const std::vector<Vector> f{oracle::random_vector(4, 2), oracle::random_vector(3, 3), oracle::random_vector(5, 4)};
    const Matrix m = unfold_mode1(outer_product(f));
    Eigen::JacobiSVD<Matrix> svd(m);
    EXPECT_GT(svd.singularValues()(0), 0.1);
    EXPECT_LT(svd.singularValues()(1), 1e-14 * svd.singularValues()(0));
}

TEST(Unfold, FoldInvertsEveryMode) {
    const DenseTensor t = oracle::random_tensor({3, 4, 2, 5}, 7);
    for (Index k = 0; k < 4; ++k) EXPECT_EQ(fold(unfold(t, k), k, t.dims()), t);
}

TEST(Unfold, ModeOneOfOneToEight) {
    Matrix expected(2, 4);
    expected << 1, 2, 5, 6, 3, 4, 7, 8;
    EXPECT_EQ(unfold(one_to_eight(), 1), expected);
}

TEST(ModeVectorProduct, CanonicalVectorExtractsSliceBitwise) {
    const DenseTensor t = oracle::random_tensor({3, 4, 2}, 11);
    for (Index j = 0; j < 4; ++j) {
        const DenseTensor s = mode_vector_product(t, 1, Vector::Unit(4, j));
        ASSERT_EQ(s.dims(), (std::vector<Index>{3, 2}));
        for (Index a = 0; a < 3; ++a)
            for (Index c = 0; c < 2; ++c) {
                const std::vector<Index> i3{a, j, c}, i2{a, c};
                EXPECT_EQ(s.at(i2), t.at(i3));
            }
    }
}

TEST(ModeVectorProduct, ZeroVectorGivesZeroTensor) {
    const DenseTensor t = oracle::random_tensor({3, 4, 2}, 12);
    EXPECT_EQ(frobenius_norm(mode_vector_product(t, 2, Vector::Zero(2))), 0.0);
}

TEST(ModeVectorProduct, MatchesLoopOracle) {
    const DenseTensor t = oracle::random_tensor({3, 4, 2}, 13);
    for (Index k = 0; k < 3; ++k) {
        const Vector a = oracle::random_vector(t.dim(k), 14 + k);
        EXPECT_LE(max_abs_diff(mode_vector_product(t, k, a), oracle::mode_vector_product(t, k, a)), 1e-14);
    }
}

TEST(ModeVectorProduct, RejectsLengthMismatch) {
    const DenseTensor t = oracle::random_tensor({3, 4, 2}, 15);
    EXPECT_THROW((void)mode_vector_product(t, 1, Vector::Zero(3)), InvalidArgument);
    EXPECT_THROW((void)mode_vector_product(t, 3, Vector::Zero(3)), InvalidArgument);
}

TEST(ModeMatrixProduct, IdentityLeavesTensorUnchanged) {
    const DenseTensor t = oracle::random_tensor({3, 4, 2}, 16);
    for (Index k = 0; k < 3; ++k) EXPECT_EQ(mode_matrix_product(t, k, Matrix::Identity(t.dim(k), t.dim(k))), t);
}

TEST(ModeMatrixProduct, ModeZeroMatchesUnfoldMultiplyRefold) {
    const DenseTensor t = oracle::random_tensor({3, 4, 2}, 17);
    const Matrix a = oracle::random_matrix(5, 3, 18);
    const Matrix prod = a * unfold_mode1(t);
    const DenseTensor expected({5, 4, 2}, std::vector<double>(prod.data(), prod.data() + prod.size()));
    EXPECT_LE(max_abs_diff(mode_matrix_product(t, 0, a), expected), 1e-14);
}

TEST(ModeMatrixProduct, MatchesLoopOracleInEveryMode) {
    const DenseTensor t = oracle::random_tensor({3, 4, 2, 3}, 19);
    for (Index k = 0; k < 4; ++k) {
        const Matrix a = oracle::random_matrix(2, t.dim(k), 20 + k);
        EXPECT_LE(max_abs_diff(mode_matrix_product(t, k, a), oracle::mode_matrix_product(t, k, a)), 1e-14);
    }
}

TEST(ModeMatrixProduct, UnitRowSelectsSlice) {
    const DenseTensor t = oracle::random_tensor({3, 4, 2}, 21);
    Matrix a = Matrix::Zero(1, 4);
    a(0, 2) = 1.0;
    EXPECT_EQ(mode_matrix_product(t, 1, a).data().size(), mode_vector_product(t, 1, Vector::Unit(4, 2)).data().size());
    const DenseTensor s = mode_matrix_product(t, 1, a);
    const DenseTensor v = mode_vector_product(t, 1, Vector::Unit(4, 2));
    for (Index i = 0; i < s.size(); ++i) EXPECT_EQ(s[i], v[i]);
}

TEST(ModeMatrixProduct, NormIdentityWithUnfolding) {
    const DenseTensor t = oracle::random_tensor({3, 4, 2}, 22);
    const Matrix b = oracle::random_matrix(6, 4, 23);
    EXPECT_NEAR(frobenius_norm(mode_matrix_product(t, 1, b)), (b * unfold(t, 1)).norm(), 1e-13);
}

TEST(ModeMatrixProduct, RejectsColumnMismatch) {
    const DenseTensor t = oracle::random_tensor({3, 4, 2}, 24);
    EXPECT_THROW((void)mode_matrix_product(t, 0, Matrix::Zero(2, 4)), InvalidArgument);
}

TEST(FrobeniusNorm, SmallCases) {
    EXPECT_EQ(frobenius_norm(DenseTensor({2, 3})), 0.0);
    EXPECT_EQ(frobenius_norm(DenseTensor({1}, {3.0})), 3.0);
    EXPECT_NEAR(frobenius_norm(one_to_eight()), std::sqrt(204.0), 1e-14);
}

TEST(TensorProperties, NormEqualsUnfoldingNorm) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        trom::SplitMix64 rng(seed);
        std::vector<Index> dims;
        const Index order = 2 + static_cast<Index>(rng.next() % 4);
        for (Index k = 0; k < order; ++k) dims.push_back(1 + static_cast<Index>(rng.next() % 5));
        const DenseTensor t = oracle::random_tensor(dims, seed + 100);
        EXPECT_NEAR(frobenius_norm(t), unfold_mode1(t).norm(), 1e-14 * (1 + frobenius_norm(t)));
    }
}

TEST(TensorProperties, ModeProductsCommute) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const DenseTensor t = oracle::random_tensor({4, 3, 5, 2}, seed);
        trom::SplitMix64 rng(seed + 999);
        const Index k = static_cast<Index>(rng.next() % 4);
        const Index kk = (k + 1 + static_cast<Index>(rng.next() % 3)) % 4;
        const Matrix a = oracle::random_matrix(3, t.dim(k), seed + 1);
        const Matrix b = oracle::random_matrix(2, t.dim(kk), seed + 2);
        const DenseTensor x = mode_matrix_product(mode_matrix_product(t, k, a), kk, b);
        const DenseTensor y = mode_matrix_product(mode_matrix_product(t, kk, b), k, a);
        EXPECT_LE(max_abs_diff(x, y), 1e-13 * frobenius_norm(x));
    }
}

TEST(TensorIo, RoundTripIsExact) {
    const DenseTensor t = oracle::random_tensor({3, 1, 4}, 31);
    std::stringstream ss;
    write_tensor(ss, t);
    const std::string bytes = ss.str();
    EXPECT_EQ(bytes.substr(0, 4), "TNSR");
    EXPECT_EQ(bytes.size(), 4u + 4 + 1 + 3 * 8 + 12 * 8);
    const DenseTensor back = read_tensor(ss);
    EXPECT_EQ(back, t);
}

TEST(TensorIo, LittleEndianLayout) {
    std::stringstream ss;
    write_tensor(ss, DenseTensor({2}, {1.0, -2.0}));
    const std::string b = ss.str();
    EXPECT_EQ(static_cast<unsigned char>(b[4]), 1u);  // version
    EXPECT_EQ(static_cast<unsigned char>(b[8]), 1u);  // order
    EXPECT_EQ(static_cast<unsigned char>(b[9]), 2u);  // dims[0] low byte
    // 1.0 = 0x3FF0000000000000, high byte last.
    EXPECT_EQ(static_cast<unsigned char>(b[17 + 7]), 0x3Fu);
    EXPECT_EQ(static_cast<unsigned char>(b[17 + 6]), 0xF0u);
}

TEST(TensorIo, RejectsCorruptInput) {
    std::stringstream bad("XXXX");
    EXPECT_THROW((void)read_tensor(bad), FormatError);
    std::stringstream ss;
    write_tensor(ss, DenseTensor({4}, {1, 2, 3, 4}));
    std::string truncated = ss.str();
    truncated.resize(truncated.size() - 3);
    std::stringstream tr(truncated);
    EXPECT_THROW((void)read_tensor(tr), FormatError);
}
