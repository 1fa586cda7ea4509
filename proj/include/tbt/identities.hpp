#ifndef TBT_IDENTITIES_HPP
#define TBT_IDENTITIES_HPP

// Coupling matrices of the displacement identities
//
//   A_p T - T A_p^* = i (M_{1p} M_{2p} + M_{3p} M_{4p}) = i Pi_p PiHat_p,
//
// where A_1 = calA_1 (x) I_{m2 m3}, A_2 = I_{m1} (x) calA_2 (x) I_{m3} and
// A_3 = I_{m1 m2} (x) calA_3, with calA_n the lower-triangular Toeplitz
// matrix with i/2 on the diagonal and i below it. Block TBT matrices satisfy
// the identities for p = 1, 2; 3-D Toeplitz matrices also for p = 3.
//
// Verification functions return residuals, never booleans; thresholds are
// the caller's policy.

#include <array>
#include <optional>

#include "tbt/linalg.hpp"
#include "tbt/structured.hpp"

namespace tbt {

/// calA_n: n x n, i/2 on the diagonal, i strictly below, 0 above.
Mat build_calA(int n);

/// A_p as a dense m x m matrix, p in {1, 2, 3}.
Mat build_A(const DimTriple& dims, int p);

/// Throws PoleAtSpectrum when z hits the single eigenvalue of calA
/// (i/2), or of calA^* (-i/2) when `adjoint` is set.
void check_resolvent_point(cplx z, bool adjoint);

/// (calA_n - z I)^{-1}, or (calA_n^* - z I)^{-1} when `adjoint` is set.
Mat calA_resolvent(int n, cplx z, bool adjoint = false);

/// Applies (A_p - z I)^{-1} (or (A_p^* - z I)^{-1} when `adjoint`) to x from
/// the given side using only the m_p x m_p factor. Throws PoleAtSpectrum.
Mat resolvent_A(const DimTriple& dims, int p, cplx z, Side side, const Mat& x,
                bool adjoint = false);

/// Closed form of the row 1^* (calA_n^* - z I)^{-1}:
/// -2/(2z+i) [1, w, ..., w^{n-1}] with w = (2z-i)/(2z+i). Pole at z = -i/2.
Mat row_resolvent_calA(int n, cplx z);

/// All coupling matrices derived from one spec.
class CouplingSet {
 public:
  const DimTriple& dims() const { return dims_; }
  /// Class tag of the spec the set was built from.
  StructureClass class_tag() const { return class_tag_; }
  bool has_third() const { return has_third_; }

  const Mat& calA(int p) const;
  const Mat& A(int p) const;
  /// M_{kp}, k in 1..4. p = 3 throws NotThreeD unless built from a 3-D spec.
  const Mat& M(int k, int p) const;
  /// Pi_p = [M_{1p} M_{3p}].
  const Mat& Pi(int p) const;
  /// PiHat_p = col[M_{2p}; M_{4p}].
  const Mat& PiHat(int p) const;
  /// K_{11} (m1 m3 x m2 m3) for p = 1, K_{12} (m2 m3 x m1 m3) for p = 2.
  const Mat& K1(int p) const;
  /// K: m3 x m.
  const Mat& K() const { return K_; }
  /// N: m x m3.
  const Mat& N() const { return N_; }
  /// L = 1_{m1 m2} (x) I_{m3}.
  const Mat& L() const { return L_; }
  /// L_p = 1_{m_p} (x) I_{m3}, p in {1, 2}.
  const Mat& Lp(int p) const;

  /// Blocks M_{11}^{(i)}, M_{41}^{(k)} (1-based) and M_{12}^{(r)}, M_{42}^{(r)}.
  Mat M11_block(int i) const;
  Mat M41_block(int k) const;
  const Mat& M12_block(int r) const;
  const Mat& M42_block(int r) const;

 private:
  friend CouplingSet build_M(const BlockTbtSpec& spec);
  static void check_p(int p, int max_p);

  DimTriple dims_;
  StructureClass class_tag_ = StructureClass::general;
  bool has_third_ = false;
  std::array<Mat, 3> calA_;
  std::array<Mat, 3> A_;
  std::array<std::array<Mat, 3>, 4> M_;  // [k-1][p-1]
  std::array<Mat, 3> Pi_, PiHat_;
  std::array<Mat, 2> K1_, Lp_;
  Mat K_, N_, L_;
  std::vector<Mat> M12_blocks_, M42_blocks_;  // indexed by r + m1 - 1
};

/// Builds every coupling matrix. The third identity's matrices are included
/// iff the spec's class tag is toeplitz3d.
CouplingSet build_M(const BlockTbtSpec& spec);

/// Q_k = K_{1k} M_{2k} + L_k K (the factored form).
Mat coupling_Q(const CouplingSet& cs, int k);
/// Q_k = K_{1k} K_{2k} + K_{3k} K_{4k} with K_{2k}, K_{3k}, K_{4k} built
/// from their own definitions.
Mat coupling_Q_from_definition(const CouplingSet& cs, int k);
/// V_p = N L_p^* + M_{3p} K_{1k}, k the complementary index.
Mat coupling_V(const CouplingSet& cs, int p);

/// ||A_p T - T A_p^* - i Pi_p PiHat_p||_max / max(||T||_max, 1).
double verify_identity_T(const BlockTbtSpec& spec, const CouplingSet& cs, int p);
double verify_identity_T(const Mat& t, const CouplingSet& cs, int p);

/// Identity for M_{4p} (p the complement of k):
/// (calA_k (x) I_{m3}) M_{4p} - M_{4p} A_k^* = i Q_k.
/// Returns the larger of the identity residual and the residual between the
/// two forms of Q_k.
double verify_identity_M4(const BlockTbtSpec& spec, const CouplingSet& cs, int k);

/// Identity for M_{1k} (k the complement of p):
/// A_p M_{1k} - M_{1k} (calA_p^* (x) I_{m3}) = i V_p.
double verify_identity_M1(const BlockTbtSpec& spec, const CouplingSet& cs, int p);

/// ||R A_p - A_p^* R - i Gamma_p GammaHat_p||_max / ||R||_max with
/// Gamma_p = R Pi_p, GammaHat_p = PiHat_p R.
double verify_inverse_identity(const Mat& r, const CouplingSet& cs, int p);

/// max over pairs of ||A_p A_q - A_q A_p||_max.
double commutation_residual(const CouplingSet& cs);

/// max(||L_2^* M_21 - L^*||, ||L_1^* M_22 - L^*||).
double annihilator_residual(const CouplingSet& cs);

}  // namespace tbt

#endif  // TBT_IDENTITIES_HPP
