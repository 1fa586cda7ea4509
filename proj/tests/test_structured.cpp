#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tbt/structured.hpp"

using namespace tbt;

namespace {

const StructureClass kAllClasses[] = {StructureClass::general, StructureClass::self_adjoint,
                                      StructureClass::dstu, StructureClass::toeplitz3d};

BlockTbtSpec affine_spec(DimTriple d) {
  BlockTbtSpec spec(d, StructureClass::general);
  for (int r = -(d.m1 - 1); r < d.m1; ++r)
    for (int s = -(d.m2 - 1); s < d.m2; ++s)
      spec = spec.with_coeff(r, s, static_cast<double>(r + 10 * s + 1) * eye(d.m3));
  return spec;
}

}  // namespace

TEST(DimTriple, RejectsLevelsBelowTwo) {
  EXPECT_THROW(DimTriple::make(1, 2, 2), InvalidDims);
  EXPECT_THROW(DimTriple::make(2, 0, 2), InvalidDims);
  EXPECT_THROW(DimTriple::make(2, 2, 1), InvalidDims);
  const DimTriple d = DimTriple::make(2, 3, 4);
  EXPECT_EQ(d.m(), 24);
  EXPECT_EQ(d[1], 2);
  EXPECT_EQ(d[3], 4);
}

TEST(StructureClassNames, RoundTrip) {
  for (auto c : kAllClasses) EXPECT_EQ(parse_structure_class(to_string(c)), c);
  EXPECT_THROW(parse_structure_class("toeplitz"), std::invalid_argument);
}

TEST(BlockTbtSpec, RejectsWrongCoefficientCountAndShape) {
  const DimTriple d = DimTriple::make(2, 2, 2);
  EXPECT_THROW(BlockTbtSpec(d, StructureClass::general, std::vector<Mat>(8, eye(2))),
               SpecIncomplete);
  EXPECT_THROW(BlockTbtSpec(d, StructureClass::general, std::vector<Mat>(9, eye(3))),
               SpecIncomplete);
}

TEST(Assemble, IdentitySpecGivesIdentity) {
  EXPECT_EQ(assemble(BlockTbtSpec::identity(DimTriple::make(2, 2, 2))), eye(8));
}

TEST(Assemble, HandLayoutOfAffineCoefficients) {
  const Mat t = assemble(affine_spec(DimTriple::make(2, 2, 2)));
  EXPECT_EQ(t(0, 0), cplx(1.0));
  // Outer row 2, inner row 2 against the first column: t^{(1)}_{1} = 12 I.
  EXPECT_EQ(t(6, 0), cplx(12.0));
  EXPECT_EQ(t(7, 1), cplx(12.0));
  EXPECT_EQ(t(6, 1), cplx(0.0));
  // First row, last block column: t^{(-1)}_{-1} = -10 I.
  EXPECT_EQ(t(0, 6), cplx(-10.0));
  EXPECT_EQ(t, oracle::assemble_by_index(affine_spec(DimTriple::make(2, 2, 2))));
}

TEST(Assemble, MatchesIndexOracleForRandomSpecs) {
  for (auto c : kAllClasses)
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const BlockTbtSpec spec = random_spec(DimTriple::make(3, 2, 3), seed, c);
      EXPECT_EQ(assemble(spec), oracle::assemble_by_index(spec));
    }
}

TEST(Assemble, OuterBlockDiagonalsAreConstant) {
  const DimTriple d = DimTriple::make(3, 2, 2);
  const Mat t = assemble(random_spec(d, 3, StructureClass::general));
  const int b = d.m2 * d.m3;
  for (int i = 1; i < d.m1; ++i)
    for (int k = 1; k < d.m1; ++k)
      EXPECT_EQ(t.block(i * b, k * b, b, b), t.block((i - 1) * b, (k - 1) * b, b, b));
  EXPECT_EQ(outer_block(random_spec(d, 3, StructureClass::general), 1), t.block(b, 0, b, b));
}

TEST(Lift3d, UnitTauIsIdentity) {
  const DimTriple d = DimTriple::make(2, 2, 2);
  const Toeplitz3dSpec spec3 = Toeplitz3dSpec(d).with_tau(0, 0, 0, 1.0);
  EXPECT_EQ(lift_3d(spec3).coeffs(), BlockTbtSpec::identity(d).coeffs());
}

TEST(Lift3d, EntriesDecodeToTau) {
  const DimTriple d = DimTriple::make(2, 3, 3);
  const Toeplitz3dSpec spec3 = random_toeplitz3d(d, 11);
  const Mat t = assemble(lift_3d(spec3));
  for (int row = 0; row < d.m(); ++row)
    for (int col = 0; col < d.m(); ++col) {
      const int i = row / (d.m2 * d.m3), ip = (row / d.m3) % d.m2, a = row % d.m3;
      const int k = col / (d.m2 * d.m3), kp = (col / d.m3) % d.m2, b = col % d.m3;
      ASSERT_EQ(t(row, col), spec3.tau(i - k, ip - kp, a - b));
    }
  EXPECT_EQ(extract_3d(lift_3d(spec3)).taus(), spec3.taus());
}

TEST(RandomSpec, DeterministicForFixedSeed) {
  for (auto c : kAllClasses) {
    const DimTriple d = DimTriple::make(2, 3, 2);
    EXPECT_TRUE(random_spec(d, 17, c) == random_spec(d, 17, c));
    EXPECT_FALSE(random_spec(d, 17, c) == random_spec(d, 18, c));
  }
}

TEST(RandomSpec, SelfAdjointIsExactlyHermitian) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Mat t = assemble(random_spec(DimTriple::make(3, 2, 2), seed, StructureClass::self_adjoint));
    EXPECT_EQ(t, Mat(t.adjoint()));
  }
}

TEST(RandomSpec, DstuBlocksHavePropertyU) {
  const DimTriple d = DimTriple::make(2, 2, 3);
  const Mat u3 = anti_identity(3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const BlockTbtSpec spec = random_spec(d, seed, StructureClass::dstu);
    for (const Mat& t : spec.coeffs()) EXPECT_EQ(Mat(u3 * t * u3), Mat(t.transpose()));
  }
}

TEST(RandomSpec, DefaultShiftMakesDiagonalDominant) {
  const DimTriple d = DimTriple::make(3, 3, 2);
  const Mat t = assemble(random_spec(d, 5, StructureClass::general));
  for (int i = 0; i < t.rows(); ++i) {
    double off = 0;
    for (int j = 0; j < t.cols(); ++j)
      if (j != i) off += std::abs(t(i, j));
    EXPECT_GT(std::abs(t(i, i)), off);
  }
}

TEST(StructureCheck, IdentitySatisfiesEverything) {
  const StructureCheck c = structure_check(BlockTbtSpec::identity(DimTriple::make(2, 2, 2)));
  EXPECT_TRUE(c.self_adjoint());
  EXPECT_TRUE(c.dstu());
  EXPECT_TRUE(c.toeplitz3d());
}

TEST(StructureCheck, GeneralSpecsSatisfyNothing) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const StructureCheck c =
        structure_check(random_spec(DimTriple::make(2, 2, 2), seed, StructureClass::general));
    EXPECT_TRUE(c.satisfied().empty()) << "seed " << seed;
    EXPECT_TRUE(c.satisfies(StructureClass::general));
  }
}

TEST(StructureCheck, ToeplitzSpecsAreDstu) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const StructureCheck c =
        structure_check(random_spec(DimTriple::make(2, 3, 3), seed, StructureClass::toeplitz3d));
    EXPECT_TRUE(c.dstu());
    EXPECT_TRUE(c.toeplitz3d());
  }
}

TEST(StructureCheck, PerturbedBlockBreaksClass) {
  const DimTriple d = DimTriple::make(2, 2, 2);
  BlockTbtSpec spec = random_spec(d, 7, StructureClass::dstu);
  Mat block = spec.coeff(1, 0);
  block(0, 0) += 0.1;
  spec = spec.with_coeff(1, 0, block);
  EXPECT_FALSE(structure_check(spec).dstu());
}

TEST(ExchangeSet, AntiIdentitiesSquareToIdentity) {
  const DimTriple d = DimTriple::make(2, 3, 4);
  const ExchangeSet ex = exchange_set(d);
  Mat u2(2, 2);
  u2 << 0.0, 1.0, 1.0, 0.0;
  EXPECT_EQ(ex.U1, u2);
  for (int p = 1; p <= 3; ++p) EXPECT_EQ(Mat(ex[p] * ex[p]), eye(d[p]));
  EXPECT_EQ(Mat(ex.U * ex.U), eye(d.m()));
}

TEST(ExchangeSet, DstuMatrixIsPersymmetricUnderU) {
  for (auto c : {StructureClass::dstu, StructureClass::toeplitz3d}) {
    const DimTriple d = DimTriple::make(3, 2, 2);
    const Mat t = assemble(random_spec(d, 4, c));
    const ExchangeSet ex = exchange_set(d);
    EXPECT_EQ(Mat(ex.U * t * ex.U), Mat(t.transpose()));
  }
}
