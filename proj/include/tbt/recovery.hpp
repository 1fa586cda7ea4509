#ifndef TBT_RECOVERY_HPP
#define TBT_RECOVERY_HPP

// Recovery of the inverse-matrix kernel from minimal information.
//
// With R = T^{-1}, Gamma_p = R Pi_p and GammaHat_p = PiHat_p R, the kernel
//
//   omega(lambda, mu) = L^* prod_p (A_p^* - mu_p)^{-1} R prod_p (A_p - lambda_p)^{-1} L
//
// factors as i (lambda_p - mu_p)^{-1} u_p(mu) uhat_p(lambda) for p = 1, 2.
// uhat is recovered by solving G(lambda) uhat = col[0, L_2, 0, L_1] theta(lambda)
// and u by u(mu) E(mu) = vartheta(mu) [L_2^*, 0, L_1^*, 0], where G and E are
// fixed by their constant off-diagonal blocks. The matrix reflection
// coefficient rho(x, y) = h(y)^T R h(x) follows from omega by a Moebius change
// of variables.
//
// Shapes: u_1 is m3 x 2 m2 m3, u_2 is m3 x 2 m1 m3, uhat_p the transposed
// shapes; G and E are 2 (m1 + m2) m3 square.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tbt/identities.hpp"
#include "tbt/linalg.hpp"
#include "tbt/random.hpp"
#include "tbt/structured.hpp"

namespace tbt {

/// A pair (z_1, z_2) of evaluation arguments, one per identity.
using Point = std::array<cplx, 2>;

inline Point conj(const Point& z) { return {std::conj(z[0]), std::conj(z[1])}; }

struct InverseData {
  Mat R;
  std::array<Mat, 2> Gamma;     // R Pi_p, m x 2m/m_p
  std::array<Mat, 2> GammaHat;  // PiHat_p R, 2m/m_p x m

  const Mat& gamma(int p) const { return Gamma.at(static_cast<std::size_t>(p - 1)); }
  const Mat& gamma_hat(int p) const { return GammaHat.at(static_cast<std::size_t>(p - 1)); }
};

/// Dense LU inverse of the assembled matrix and the Gamma factors.
/// Throws TNotInvertible.
InverseData invert_and_gamma(const BlockTbtSpec& spec, const CouplingSet& cs);
InverseData invert_and_gamma(const Mat& t, const CouplingSet& cs);

/// L^* (A_1^* - mu_1)^{-1} (A_2^* - mu_2)^{-1}, an m3 x m row block.
Mat left_sandwich(const CouplingSet& cs, const Point& mu);
/// (A_1 - lambda_1)^{-1} (A_2 - lambda_2)^{-1} L, an m x m3 column block.
Mat right_sandwich(const CouplingSet& cs, const Point& lambda);

/// omega straight from its definition.
Mat omega_direct(const InverseData& id, const CouplingSet& cs, const Point& lambda,
                 const Point& mu);

/// v_p(mu) = L^* prod (A_i^* - mu_i)^{-1} Gamma_p.
Mat v_direct(const InverseData& id, const CouplingSet& cs, int p, const Point& mu);
/// vhat_p(lambda) = GammaHat_p prod (A_i - lambda_i)^{-1} L.
Mat vhat_direct(const InverseData& id, const CouplingSet& cs, int p, const Point& lambda);
/// u_p(mu) from its definition (v_p minus the resolvent-row correction).
Mat u_direct(const InverseData& id, const CouplingSet& cs, int p, const Point& mu);
/// uhat_p(lambda) from its definition.
Mat uhat_direct(const InverseData& id, const CouplingSet& cs, int p, const Point& lambda);

struct KernelValues {
  Mat u1, u2, uhat1, uhat2;
  Mat v1, v2, vhat1, vhat2;

  /// [u_1 u_2].
  Mat u() const;
  /// col[uhat_1; uhat_2].
  Mat uhat() const;
};

KernelValues u_uhat_direct(const InverseData& id, const CouplingSet& cs, const Point& lambda,
                           const Point& mu);

/// Splits a stacked u = [u_1 u_2] or uhat = col[uhat_1; uhat_2].
Mat u_part(const Mat& u, const DimTriple& dims, int p);
Mat uhat_part(const Mat& uhat, const DimTriple& dims, int p);

/// alpha(lambda) = K R prod (A_i - lambda_i)^{-1} L.
Mat alpha(const InverseData& id, const CouplingSet& cs, const Point& lambda);
/// theta(lambda) = i (I + alpha(lambda)).
Mat theta(const InverseData& id, const CouplingSet& cs, const Point& lambda);
/// beta(mu) = L^* prod (A_i^* - mu_i)^{-1} R N.
Mat beta(const InverseData& id, const CouplingSet& cs, const Point& mu);
/// vartheta(mu) = -i (I + beta(mu)).
Mat vartheta(const InverseData& id, const CouplingSet& cs, const Point& mu);

/// The information needed for recovery: the constant blocks of G and E,
/// the row K, and the theta / vartheta evaluators. theta and vartheta are
/// computed from R; deriving them from G alone is an open problem.
struct MinimalData {
  DimTriple dims;
  Mat G12, G21;
  Mat E12, E21;
  Mat K;
  std::function<Mat(const Point&)> theta;
  std::function<Mat(const Point&)> vartheta;
};

struct ConstantBlocks {
  Mat B12, B21;
};

/// G_12 = i (PiHat_1 Gamma_2 - [[L_2 L_1^*, 0], [K_12, 0]]) and
/// G_21 = i (PiHat_2 Gamma_1 - [[L_1 L_2^*, 0], [K_11, 0]]).
ConstantBlocks g_blocks_direct(const InverseData& id, const CouplingSet& cs);
/// E_12 = -i (PiHat_1 Gamma_2 - [[0, 0], [K_12, L_2 L_1^*]]), E_21 likewise.
ConstantBlocks e_blocks_direct(const InverseData& id, const CouplingSet& cs);
/// E blocks from G blocks alone:
/// E_12 = -G_12 + i diag(-L_2 L_1^*, L_2 L_1^*), E_21 = -G_21 + i diag(-L_1 L_2^*, L_1 L_2^*).
ConstantBlocks e_blocks_from_g(const Mat& g12, const Mat& g21, const CouplingSet& cs);

/// Minimal data with G_21 taken from its definition.
MinimalData minimal_data(const InverseData& id, const CouplingSet& cs);
/// Minimal data with G_21 supplied by the caller (e.g. from a class shortcut).
MinimalData minimal_data(const InverseData& id, const CouplingSet& cs, Mat g12, Mat g21);

/// frakA_p(z) = diag((calA_p^* - z) (x) I_{m3}, (calA_p - z) (x) I_{m3}).
/// Throws PoleAtSpectrum at z = +-i/2.
Mat frak_A(const CouplingSet& cs, int p, cplx z);

/// G(lambda) = [[G_11(lambda_2), G_12], [G_21, G_22(lambda_1)]] with
/// G_11 = I_2 (x) (calA_2 - lambda_2) (x) I_{m3}, G_22 = I_2 (x) (calA_1 - lambda_1) (x) I_{m3}.
Mat build_G(const CouplingSet& cs, const MinimalData& md, const Point& lambda);
/// E(mu): as G with calA_p^* - mu_p on the diagonal and the E blocks.
Mat build_E(const CouplingSet& cs, const MinimalData& md, const Point& mu);

/// col[0, L_2, 0, L_1], the right-hand side pattern of the uhat system.
Mat uhat_rhs_pattern(const CouplingSet& cs);
/// [L_2^*, 0, L_1^*, 0], the right-hand side pattern of the u system.
Mat u_rhs_pattern(const CouplingSet& cs);
/// col[L_2, 0, -L_1, 0]; its adjoint annihilates uhat(lambda).
Mat hat_annihilator(const CouplingSet& cs);
/// col[0, L_2, 0, -L_1]; annihilated by u(mu) from the right.
Mat breve_annihilator(const CouplingSet& cs);

/// uhat(lambda) = G(lambda)^{-1} col[0, L_2, 0, L_1] theta(lambda). Throws GSingular.
Mat recover_uhat(const MinimalData& md, const CouplingSet& cs, const Point& lambda);
/// u(mu) = vartheta(mu) [L_2^*, 0, L_1^*, 0] E(mu)^{-1}. Throws ESingular.
Mat recover_u(const MinimalData& md, const CouplingSet& cs, const Point& mu);

/// omega(lambda, mu) = i (lambda_p - mu_p)^{-1} u_p(mu) uhat_p(lambda) from
/// recovered u and uhat. Throws DegenerateSamplePair when lambda_p == mu_p.
Mat omega_min(const MinimalData& md, const CouplingSet& cs, const Point& lambda,
              const Point& mu, int p);
/// Same formula applied to given u(mu) and uhat(lambda).
Mat omega_from_kernels(const Mat& u, const Mat& uhat, const DimTriple& dims,
                       const Point& lambda, const Point& mu, int p);

/// phi(z) = (i/2)(z + 1)/(z - 1). Throws PhiPole at z = 1.
cplx phi(cplx z);

/// h(x) = h_1(x_1) (x) h_2(x_2) (x) I_{m3}, h_p(x) = (1, x, ..., x^{m_p - 1})^T.
Mat h_vector(const DimTriple& dims, const Point& x);

/// rho(x, y) = h(y)^T R h(x).
Mat rho_direct(const InverseData& id, const DimTriple& dims, const Point& x, const Point& y);

using OmegaFn = std::function<Mat(const Point& lambda, const Point& mu)>;

/// rho(x, y) = [(x_1 - 1)(x_2 - 1)(y_1 - 1)(y_2 - 1)]^{-1}
///             omega(phi(x_1), phi(x_2), -phi(y_1), -phi(y_2)).
Mat rho_from_omega(const OmegaFn& omega, const Point& x, const Point& y);

// --- class shortcuts -------------------------------------------------------

/// q(mu) = prod_p ((mu_p - i/2)/(mu_p + i/2))^{m_p}.
cplx q_factor(const DimTriple& dims, const Point& mu);

/// Utilde_k = [[0, -U_k (x) U_3], [U_k (x) U_3, 0]].
Mat u_tilde(const ExchangeSet& ex, int k);

/// J_p = [[0, I], [I, 0]] with blocks of size m2 m3 (p = 1) or m1 m3 (p = 2).
Mat j_swap(const DimTriple& dims, int p);

/// u_p(mu) = -q(mu) U_3 uhat_p(mu)^T Utilde_k, for uhat_p already evaluated
/// at mu. No class check.
Mat u_from_uhat_exchange(const Mat& uhat_p_at_mu, const DimTriple& dims, const Point& mu, int p);
/// G_21 = Utilde_1 G_12^T Utilde_2. No class check.
Mat g21_from_g12_exchange(const Mat& g12, const DimTriple& dims);
/// u_p(mu) = uhat_p(conj mu)^* J_p, for uhat_p already evaluated at conj(mu).
Mat u_from_uhat_adjoint(const Mat& uhat_p_at_conj_mu, const DimTriple& dims, int p);
/// G_21 = -J_2 (G_12^* - i diag(L_1 L_2^*, -L_1 L_2^*)) J_1. No class check.
Mat g21_from_g12_adjoint(const Mat& g12, const CouplingSet& cs);

/// DSTU shortcut on recovered uhat; throws NotDstu unless cs comes from a
/// dstu or toeplitz3d spec.
Mat dstu_u_from_uhat(const MinimalData& md, const CouplingSet& cs, const Point& mu, int p);
Mat dstu_G21_from_G12(const MinimalData& md, const CouplingSet& cs);
/// Self-adjoint shortcut on recovered uhat; throws NotSelfAdjoint.
Mat sa_u_from_uhat(const MinimalData& md, const CouplingSet& cs, const Point& mu, int p);
Mat sa_G21_from_G12(const MinimalData& md, const CouplingSet& cs);

/// ||GammaHat_p^T - (U Gamma_p Utilde_k + [0 M_{3p}])||_max relative to ||GammaHat_p||.
double gamma_hat_transposition_residual(const InverseData& id, const CouplingSet& cs,
                                        const ExchangeSet& ex, int p);

/// max_p ||Pi_p - PiHat_p^* J_p||_max.
double pi_adjoint_residual(const CouplingSet& cs);

// --- information count ------------------------------------------------------

struct InfoCount {
  /// Free entries of T: (2m1-1)(2m2-1)(2m3-1) for 3-D, (2m1-1)(2m2-1) m3^2 otherwise.
  std::int64_t full_T_entries = 0;
  /// 4 m^2 / m_p, the entries of R Pi_p and PiHat_p R; p = 3 only for 3-D.
  std::array<std::optional<std::int64_t>, 3> naive_recovery_entries{};
  /// Entries of G_12 plus K: 5 m1 m2 m3^2.
  std::int64_t minimal_entries = 0;
};

InfoCount info_count(const DimTriple& dims, StructureClass cls);

// --- sample points ----------------------------------------------------------

struct SamplePair {
  Point lambda;
  Point mu;
};

/// Seeded generic evaluation points in the annulus 0.1 <= |z| <= 0.6.
///
/// Each point is drawn as r e^{i t} with r uniform on [0.1, 0.6) and t
/// uniform on [0, 2 pi). Points within `pole_distance` of +-i/2 (resolvent
/// poles) or within `min_distance` of 1 (pole of phi) are redrawn, as are
/// pairs with |lambda_p - mu_p| < `min_distance`. Kernel values grow like
/// dist^{-m_p} near +-i/2, so `pole_distance` bounds their magnitude and
/// with it the absolute rounding error of the annihilator products.
class SamplePoints {
 public:
  explicit SamplePoints(std::uint64_t seed, double min_distance = 1e-3,
                        double pole_distance = 0.25);

  cplx next_scalar();
  Point next_point();
  SamplePair next_pair();

 private:
  Xorshift64Star rng_;
  double min_distance_;
  double pole_distance_;
};

}  // namespace tbt

#endif  // TBT_RECOVERY_HPP
