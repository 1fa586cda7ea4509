#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tbt/identities.hpp"

using namespace tbt;

namespace {

const StructureClass kAllClasses[] = {StructureClass::general, StructureClass::self_adjoint,
                                      StructureClass::dstu, StructureClass::toeplitz3d};

std::vector<cplx> random_points(int count, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::vector<cplx> out;
  while (static_cast<int>(out.size()) < count) {
    const cplx z(dist(gen), dist(gen));
    if (std::abs(z - 0.5 * kI) > 0.1 && std::abs(z + 0.5 * kI) > 0.1) out.push_back(z);
  }
  return out;
}

Mat dense_resolvent(const Mat& a, cplx z) {
  return oracle::full_piv_inverse(a - z * Mat::Identity(a.rows(), a.cols()));
}

}  // namespace

TEST(CalA, SmallCases) {
  Mat two(2, 2);
  two << 0.5 * kI, 0.0, kI, 0.5 * kI;
  EXPECT_EQ(build_calA(2), two);
  Mat three(3, 3);
  three << 0.5 * kI, 0.0, 0.0, kI, 0.5 * kI, 0.0, kI, kI, 0.5 * kI;
  EXPECT_EQ(build_calA(3), three);
  const Mat five = build_calA(5);
  for (int j = 0; j < 5; ++j) EXPECT_EQ(five(j, j), 0.5 * kI);
}

TEST(BuildA, MatchesEntryRule) {
  for (const DimTriple d : {DimTriple::make(2, 2, 2), DimTriple::make(3, 2, 3)})
    for (int p = 1; p <= 3; ++p) EXPECT_EQ(build_A(d, p), oracle::A_by_index(d, p));
}

TEST(BuildA, FirstFactorBlockLayout) {
  const Mat a1 = build_A(DimTriple::make(2, 2, 2), 1);
  EXPECT_EQ(a1.block(0, 0, 4, 4), Mat(0.5 * kI * eye(4)));
  EXPECT_EQ(a1.block(4, 0, 4, 4), Mat(kI * eye(4)));
  EXPECT_EQ(a1.block(0, 4, 4, 4), zeros(4, 4));
}

TEST(BuildA, ThirdFactorIsBlockDiagonal) {
  const DimTriple d = DimTriple::make(2, 3, 2);
  const Mat a3 = build_A(d, 3);
  const Mat ca = build_calA(2);
  for (int b = 0; b < d.m1 * d.m2; ++b)
    for (int c = 0; c < d.m1 * d.m2; ++c)
      EXPECT_EQ(a3.block(2 * b, 2 * c, 2, 2), b == c ? ca : zeros(2, 2));
}

TEST(BuildA, FactorsCommuteExactly) {
  const DimTriple d = DimTriple::make(3, 2, 2);
  for (int p = 1; p <= 3; ++p)
    for (int q = 1; q <= 3; ++q)
      EXPECT_EQ(Mat(build_A(d, p) * build_A(d, q)), Mat(build_A(d, q) * build_A(d, p)));
}

TEST(Resolvent, CalAAtZero) {
  Mat expected(2, 2);
  expected << -2.0 * kI, 0.0, 4.0 * kI, -2.0 * kI;
  EXPECT_LE(oracle::rel(calA_resolvent(2, 0.0), expected), 1e-15);
}

TEST(Resolvent, KroneckerFormMatchesDenseSolve) {
  const DimTriple d = DimTriple::make(2, 3, 2);
  const Mat x = oracle::random_matrix(d.m(), 3, 21);
  const Mat y = oracle::random_matrix(2, d.m(), 22);
  for (int p = 1; p <= 3; ++p) {
    const Mat a = oracle::A_by_index(d, p);
    EXPECT_LE(oracle::rel(resolvent_A(d, p, 0.0, Side::left, x), oracle::full_piv_solve(a, x)),
              1e-12);
    for (const cplx z : random_points(5, 30 + p)) {
      EXPECT_LE(oracle::rel(resolvent_A(d, p, z, Side::left, x), dense_resolvent(a, z) * x), 1e-12);
      EXPECT_LE(oracle::rel(resolvent_A(d, p, z, Side::right, y), y * dense_resolvent(a, z)),
                1e-12);
      EXPECT_LE(oracle::rel(resolvent_A(d, p, z, Side::left, x, true),
                            dense_resolvent(a.adjoint(), z) * x),
                1e-12);
      const Mat shifted = (a - z * eye(d.m())) * x;
      EXPECT_LE(oracle::rel(resolvent_A(d, p, z, Side::left, shifted), x), 1e-12);
    }
  }
}

TEST(Resolvent, PolesAreRejected) {
  EXPECT_THROW(calA_resolvent(3, 0.5 * kI), PoleAtSpectrum);
  EXPECT_THROW(calA_resolvent(3, -0.5 * kI, true), PoleAtSpectrum);
  EXPECT_NO_THROW(calA_resolvent(3, -0.5 * kI));
  EXPECT_THROW(row_resolvent_calA(2, -0.5 * kI), PoleAtSpectrum);
}

TEST(RowResolvent, ClosedFormAtZero) {
  const Mat row = row_resolvent_calA(2, 0.0);
  EXPECT_LE(std::abs(row(0, 0) - 2.0 * kI), 1e-15);
  EXPECT_LE(std::abs(row(0, 1) + 2.0 * kI), 1e-15);
}

TEST(RowResolvent, ClosedFormMatchesDenseOracle) {
  for (int n : {2, 3, 5}) {
    Mat ca(n, n);
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) ca(j, l) = oracle::calA_entry(j, l);
    for (const cplx z : random_points(10, 40 + n)) {
      const Mat dense = Mat::Ones(1, n) * dense_resolvent(ca.adjoint(), z);
      EXPECT_LE(oracle::rel(row_resolvent_calA(n, z), dense), 1e-12) << "n " << n << " z " << z;
    }
  }
}

TEST(CouplingSet, IdentitySpecBlocks) {
  const DimTriple d = DimTriple::make(3, 2, 2);
  const CouplingSet cs = build_M(BlockTbtSpec::identity(d));
  const int b = d.m2 * d.m3;
  for (int i = 1; i <= d.m1; ++i) {
    EXPECT_EQ(cs.M11_block(i), Mat(0.5 * eye(b)));
    EXPECT_EQ(cs.M41_block(i), Mat(0.5 * eye(b)));
  }
  // K = row over j of (1/2 M42^(0) + sum M42^(-l)): only M42^(0) is nonzero.
  const Mat& k = cs.K();
  ASSERT_EQ(k.rows(), d.m3);
  ASSERT_EQ(k.cols(), d.m());
  const Mat m42 = cs.M42_block(0);
  for (int j = 0; j < d.m1; ++j)
    EXPECT_EQ(Mat(k.middleCols(j * b, b)), Mat(0.5 * m42));
  Mat m42_expected(d.m3, b);
  m42_expected << 0.5 * eye(2), 0.5 * eye(2);
  EXPECT_EQ(m42, m42_expected);
}

TEST(CouplingSet, Shapes) {
  const DimTriple d = DimTriple::make(2, 3, 2);
  const CouplingSet cs = build_M(random_spec(d, 1, StructureClass::toeplitz3d));
  for (int p = 1; p <= 3; ++p) {
    const int n = d.m() / d[p];
    EXPECT_EQ(cs.M(1, p).rows(), d.m());
    EXPECT_EQ(cs.M(1, p).cols(), n);
    EXPECT_EQ(cs.M(3, p).cols(), n);
    EXPECT_EQ(cs.M(2, p).rows(), n);
    EXPECT_EQ(cs.M(4, p).rows(), n);
    EXPECT_EQ(cs.M(4, p).cols(), d.m());
  }
  const CouplingSet plain = build_M(random_spec(d, 1, StructureClass::dstu));
  EXPECT_FALSE(plain.has_third());
  EXPECT_THROW(plain.M(1, 3), NotThreeD);
  EXPECT_THROW(plain.Pi(3), NotThreeD);
}

TEST(CouplingSet, PiFactorsEqualBlockProducts) {
  for (auto c : kAllClasses) {
    const CouplingSet cs = build_M(random_spec(DimTriple::make(2, 3, 2), 9, c));
    for (int p = 1; p <= (cs.has_third() ? 3 : 2); ++p) {
      const Mat lhs = cs.Pi(p) * cs.PiHat(p);
      const Mat rhs = cs.M(1, p) * cs.M(2, p) + cs.M(3, p) * cs.M(4, p);
      EXPECT_LE(oracle::rel(lhs, rhs), 1e-15);
    }
  }
}

TEST(CouplingSet, AnnihilatorRelations) {
  for (auto c : kAllClasses)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const CouplingSet cs = build_M(random_spec(DimTriple::make(3, 2, 2), seed, c));
      EXPECT_EQ(annihilator_residual(cs), 0.0);
      EXPECT_EQ(Mat(cs.M(3, 1) * cs.Lp(2)), cs.L());
      EXPECT_EQ(Mat(cs.M(3, 2) * cs.Lp(1)), cs.L());
    }
}

TEST(CouplingSet, ResolventIntertwining) {
  const DimTriple d = DimTriple::make(3, 2, 2);
  const CouplingSet cs = build_M(random_spec(d, 2, StructureClass::general));
  const Mat i3 = eye(d.m3);
  for (const cplx z : random_points(5, 50)) {
    const Mat r1 = dense_resolvent(cs.A(1).adjoint(), z);
    const Mat r2 = dense_resolvent(cs.A(2).adjoint(), z);
    const Mat row1 = Mat::Ones(1, d.m1) * dense_resolvent(build_calA(d.m1).adjoint(), z);
    const Mat row2 = Mat::Ones(1, d.m2) * dense_resolvent(build_calA(d.m2).adjoint(), z);
    EXPECT_LE(oracle::rel(cs.M(2, 1) * r1, kron(row1, eye(d.m2 * d.m3))), 1e-12);
    EXPECT_LE(oracle::rel(cs.M(2, 2) * r2, kron(kron(eye(d.m1), row2), i3)), 1e-12);
    EXPECT_LE(oracle::rel(cs.L().adjoint() * r1, kron(row1, i3) * cs.M(2, 2)), 1e-12);
    EXPECT_LE(oracle::rel(cs.L().adjoint() * r2, kron(row2, i3) * cs.M(2, 1)), 1e-12);
  }
}

TEST(Identities, IdentitySpecHoldsToRounding) {
  const BlockTbtSpec spec = BlockTbtSpec::identity(DimTriple::make(2, 2, 2));
  const CouplingSet cs = build_M(spec);
  for (int p = 1; p <= 2; ++p) {
    EXPECT_LE(verify_identity_T(spec, cs, p), 1e-15);
    EXPECT_LE(verify_identity_M1(spec, cs, p), 1e-15);
    EXPECT_LE(verify_identity_M4(spec, cs, p), 1e-15);
  }
}

TEST(Identities, RandomSpecsHold) {
  const BlockTbtSpec s322 = random_spec(DimTriple::make(3, 2, 2), 3, StructureClass::general);
  EXPECT_LE(verify_identity_T(s322, build_M(s322), 2), 1e-13);

  const BlockTbtSpec s223 = random_spec(DimTriple::make(2, 2, 3), 4, StructureClass::toeplitz3d);
  const CouplingSet cs223 = build_M(s223);
  EXPECT_LE(verify_identity_T(s223, cs223, 3), 1e-13);
  EXPECT_LE(verify_identity_M1(s223, cs223, 1), 1e-13);

  const BlockTbtSpec s232 = random_spec(DimTriple::make(2, 3, 2), 5, StructureClass::general);
  const CouplingSet cs232 = build_M(s232);
  for (int k = 1; k <= 2; ++k) EXPECT_LE(verify_identity_M4(s232, cs232, k), 1e-13);

  const BlockTbtSpec s222 = random_spec(DimTriple::make(2, 2, 2), 6, StructureClass::toeplitz3d);
  EXPECT_LE(verify_identity_M1(s222, build_M(s222), 2), 1e-13);
}

TEST(Identities, CouplingQFormsAgree) {
  for (auto c : kAllClasses) {
    const CouplingSet cs = build_M(random_spec(DimTriple::make(2, 3, 3), 8, c));
    for (int k = 1; k <= 2; ++k)
      EXPECT_LE(oracle::rel(coupling_Q(cs, k), coupling_Q_from_definition(cs, k)), 1e-14);
  }
}

TEST(Identities, PropertyLoopOverSeeds) {
  for (auto c : kAllClasses)
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
      const BlockTbtSpec spec = random_spec(DimTriple::make(3, 3, 2), seed, c);
      const CouplingSet cs = build_M(spec);
      for (int p = 1; p <= (cs.has_third() ? 3 : 2); ++p)
        EXPECT_LE(verify_identity_T(spec, cs, p), 1e-13);
      EXPECT_EQ(commutation_residual(cs), 0.0);
    }
}

TEST(Identities, FailOnNonStructuredMatrix) {
  const DimTriple d = DimTriple::make(2, 2, 2);
  const CouplingSet cs = build_M(random_spec(d, 1, StructureClass::general));
  Mat t = assemble(random_spec(d, 1, StructureClass::general));
  t(0, 3) += 0.5;
  EXPECT_GT(verify_identity_T(t, cs, 1), 1e-3);
}

TEST(Identities, InverseIdentityWithOracleInverse) {
  for (auto c : kAllClasses) {
    const BlockTbtSpec spec = random_spec(DimTriple::make(2, 3, 2), 12, c);
    const CouplingSet cs = build_M(spec);
    const Mat r = oracle::full_piv_inverse(assemble(spec));
    for (int p = 1; p <= 2; ++p) EXPECT_LE(verify_inverse_identity(r, cs, p), 1e-11);
  }
}
