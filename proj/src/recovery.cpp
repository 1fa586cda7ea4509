#include "tbt/recovery.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tbt {

namespace {

constexpr double kPointTolerance = 64 * std::numeric_limits<double>::epsilon();

int complement(int p) {
  if (p != 1 && p != 2) throw std::out_of_range("index must be 1 or 2");
  return 3 - p;
}

/// 1^* (calA_n^* - z)^{-1} (x) I_{m3}, built from the dense resolvent.
Mat row_block(int n, int m3, cplx z) {
  const Mat row = ones(n).adjoint() * calA_resolvent(n, z, true);
  return kron(row, eye(m3));
}

/// (calA_n - z)^{-1} 1 (x) I_{m3}.
Mat col_block(int n, int m3, cplx z) {
  const Mat col = calA_resolvent(n, z, false) * ones(n);
  return kron(col, eye(m3));
}

/// [[top, 0], [bottom, 0]] or [[0, 0], [bottom, top]] with equal blocks.
Mat two_by_two(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
  Mat out(a.rows() + c.rows(), a.cols() + b.cols());
  out << a, b, c, d;
  return out;
}

Mat diag_blocks(const Mat& a, const Mat& d) {
  return two_by_two(a, zeros(a.rows(), d.cols()), zeros(d.rows(), a.cols()), d);
}

Mat shifted_diag(const CouplingSet& cs, int p, cplx z, bool adjoint) {
  check_resolvent_point(z, adjoint);
  const Mat& a = cs.calA(p);
  const Mat shifted = (adjoint ? Mat(a.adjoint()) : a) - z * eye(a.rows());
  return kron(eye(2), kron(shifted, eye(cs.dims().m3)));
}

Mat assemble_2x2(const Mat& a11, const Mat& a12, const Mat& a21, const Mat& a22) {
  if (a11.rows() != a12.rows() || a21.rows() != a22.rows() || a11.cols() != a21.cols() ||
      a12.cols() != a22.cols())
    throw DimensionMismatch("block matrix: inconsistent block shapes");
  return two_by_two(a11, a12, a21, a22);
}

void require_class(const CouplingSet& cs, bool ok, bool dstu) {
  if (ok) return;
  const std::string msg = "shortcut requires a " + std::string(dstu ? "dstu or toeplitz3d" : "self_adjoint") +
                          " spec, got " + std::string(to_string(cs.class_tag()));
  if (dstu) throw NotDstu(msg);
  throw NotSelfAdjoint(msg);
}

bool is_dstu(StructureClass c) {
  return c == StructureClass::dstu || c == StructureClass::toeplitz3d;
}

}  // namespace

// --- inverse and kernels ---------------------------------------------------

InverseData invert_and_gamma(const Mat& t, const CouplingSet& cs) {
  InverseData id;
  try {
    id.R = inverse(t);
  } catch (const SingularMatrix& e) {
    throw TNotInvertible(std::string("T is not invertible (") + e.what() + ")");
  }
  for (int p = 1; p <= 2; ++p) {
    id.Gamma[p - 1] = id.R * cs.Pi(p);
    id.GammaHat[p - 1] = cs.PiHat(p) * id.R;
  }
  return id;
}

InverseData invert_and_gamma(const BlockTbtSpec& spec, const CouplingSet& cs) {
  return invert_and_gamma(assemble(spec), cs);
}

Mat left_sandwich(const CouplingSet& cs, const Point& mu) {
  Mat w = cs.L().adjoint();
  w = resolvent_A(cs.dims(), 1, mu[0], Side::right, w, true);
  return resolvent_A(cs.dims(), 2, mu[1], Side::right, w, true);
}

Mat right_sandwich(const CouplingSet& cs, const Point& lambda) {
  Mat x = resolvent_A(cs.dims(), 2, lambda[1], Side::left, cs.L());
  return resolvent_A(cs.dims(), 1, lambda[0], Side::left, x);
}

Mat omega_direct(const InverseData& id, const CouplingSet& cs, const Point& lambda,
                 const Point& mu) {
  return left_sandwich(cs, mu) * id.R * right_sandwich(cs, lambda);
}

Mat v_direct(const InverseData& id, const CouplingSet& cs, int p, const Point& mu) {
  return left_sandwich(cs, mu) * id.gamma(p);
}

Mat vhat_direct(const InverseData& id, const CouplingSet& cs, int p, const Point& lambda) {
  return id.gamma_hat(p) * right_sandwich(cs, lambda);
}

Mat u_direct(const InverseData& id, const CouplingSet& cs, int p, const Point& mu) {
  const int k = complement(p);
  const DimTriple& d = cs.dims();
  const int half = d[k] * d.m3;
  Mat u = v_direct(id, cs, p, mu);
  u.leftCols(half) -= kI * row_block(d[k], d.m3, mu[k - 1]);
  return u;
}

Mat uhat_direct(const InverseData& id, const CouplingSet& cs, int p, const Point& lambda) {
  const int k = complement(p);
  const DimTriple& d = cs.dims();
  const int half = d[k] * d.m3;
  Mat uh = vhat_direct(id, cs, p, lambda);
  uh.bottomRows(half) += kI * col_block(d[k], d.m3, lambda[k - 1]);
  return uh;
}

Mat KernelValues::u() const {
  Mat out(u1.rows(), u1.cols() + u2.cols());
  out << u1, u2;
  return out;
}

Mat KernelValues::uhat() const {
  Mat out(uhat1.rows() + uhat2.rows(), uhat1.cols());
  out << uhat1, uhat2;
  return out;
}

KernelValues u_uhat_direct(const InverseData& id, const CouplingSet& cs, const Point& lambda,
                           const Point& mu) {
  KernelValues kv;
  kv.v1 = v_direct(id, cs, 1, mu);
  kv.v2 = v_direct(id, cs, 2, mu);
  kv.vhat1 = vhat_direct(id, cs, 1, lambda);
  kv.vhat2 = vhat_direct(id, cs, 2, lambda);
  kv.u1 = u_direct(id, cs, 1, mu);
  kv.u2 = u_direct(id, cs, 2, mu);
  kv.uhat1 = uhat_direct(id, cs, 1, lambda);
  kv.uhat2 = uhat_direct(id, cs, 2, lambda);
  return kv;
}

Mat u_part(const Mat& u, const DimTriple& dims, int p) {
  const int w1 = 2 * dims.m2 * dims.m3, w2 = 2 * dims.m1 * dims.m3;
  if (u.cols() != w1 + w2)
    throw DimensionMismatch("u_part: expected " + std::to_string(w1 + w2) + " columns");
  return p == 1 ? Mat(u.leftCols(w1)) : Mat(u.rightCols(w2));
}

Mat uhat_part(const Mat& uhat, const DimTriple& dims, int p) {
  const int h1 = 2 * dims.m2 * dims.m3, h2 = 2 * dims.m1 * dims.m3;
  if (uhat.rows() != h1 + h2)
    throw DimensionMismatch("uhat_part: expected " + std::to_string(h1 + h2) + " rows");
  return p == 1 ? Mat(uhat.topRows(h1)) : Mat(uhat.bottomRows(h2));
}

Mat alpha(const InverseData& id, const CouplingSet& cs, const Point& lambda) {
  return cs.K() * id.R * right_sandwich(cs, lambda);
}

Mat theta(const InverseData& id, const CouplingSet& cs, const Point& lambda) {
  return kI * (eye(cs.dims().m3) + alpha(id, cs, lambda));
}

Mat beta(const InverseData& id, const CouplingSet& cs, const Point& mu) {
  return left_sandwich(cs, mu) * id.R * cs.N();
}

Mat vartheta(const InverseData& id, const CouplingSet& cs, const Point& mu) {
  return -kI * (eye(cs.dims().m3) + beta(id, cs, mu));
}

// --- G and E ---------------------------------------------------------------

ConstantBlocks g_blocks_direct(const InverseData& id, const CouplingSet& cs) {
  const Mat l2l1 = cs.Lp(2) * cs.Lp(1).adjoint();
  const Mat l1l2 = cs.Lp(1) * cs.Lp(2).adjoint();
  ConstantBlocks g;
  g.B12 = kI * (cs.PiHat(1) * id.gamma(2) -
                two_by_two(l2l1, zeros(l2l1.rows(), l2l1.cols()), cs.K1(2),
                           zeros(l2l1.rows(), l2l1.cols())));
  g.B21 = kI * (cs.PiHat(2) * id.gamma(1) -
                two_by_two(l1l2, zeros(l1l2.rows(), l1l2.cols()), cs.K1(1),
                           zeros(l1l2.rows(), l1l2.cols())));
  return g;
}

ConstantBlocks e_blocks_direct(const InverseData& id, const CouplingSet& cs) {
  const Mat l2l1 = cs.Lp(2) * cs.Lp(1).adjoint();
  const Mat l1l2 = cs.Lp(1) * cs.Lp(2).adjoint();
  const Mat z12 = zeros(l2l1.rows(), l2l1.cols());
  const Mat z21 = zeros(l1l2.rows(), l1l2.cols());
  ConstantBlocks e;
  e.B12 = -kI * (cs.PiHat(1) * id.gamma(2) - two_by_two(z12, z12, cs.K1(2), l2l1));
  e.B21 = -kI * (cs.PiHat(2) * id.gamma(1) - two_by_two(z21, z21, cs.K1(1), l1l2));
  return e;
}

ConstantBlocks e_blocks_from_g(const Mat& g12, const Mat& g21, const CouplingSet& cs) {
  const Mat l2l1 = cs.Lp(2) * cs.Lp(1).adjoint();
  const Mat l1l2 = cs.Lp(1) * cs.Lp(2).adjoint();
  ConstantBlocks e;
  e.B12 = sub(kI * diag_blocks(-l2l1, l2l1), g12);
  e.B21 = sub(kI * diag_blocks(-l1l2, l1l2), g21);
  return e;
}

MinimalData minimal_data(const InverseData& id, const CouplingSet& cs, Mat g12, Mat g21) {
  MinimalData md;
  md.dims = cs.dims();
  const ConstantBlocks e = e_blocks_from_g(g12, g21, cs);
  md.G12 = std::move(g12);
  md.G21 = std::move(g21);
  md.E12 = e.B12;
  md.E21 = e.B21;
  md.K = cs.K();
  md.theta = [&id, &cs](const Point& lambda) { return theta(id, cs, lambda); };
  md.vartheta = [&id, &cs](const Point& mu) { return vartheta(id, cs, mu); };
  return md;
}

MinimalData minimal_data(const InverseData& id, const CouplingSet& cs) {
  ConstantBlocks g = g_blocks_direct(id, cs);
  return minimal_data(id, cs, std::move(g.B12), std::move(g.B21));
}

Mat frak_A(const CouplingSet& cs, int p, cplx z) {
  complement(p);
  check_resolvent_point(z, true);
  check_resolvent_point(z, false);
  const Mat& a = cs.calA(p);
  const Mat shift = z * eye(a.rows());
  const Mat id3 = eye(cs.dims().m3);
  return diag_blocks(kron(Mat(a.adjoint()) - shift, id3), kron(a - shift, id3));
}

Mat build_G(const CouplingSet& cs, const MinimalData& md, const Point& lambda) {
  return assemble_2x2(shifted_diag(cs, 2, lambda[1], false), md.G12, md.G21,
                      shifted_diag(cs, 1, lambda[0], false));
}

Mat build_E(const CouplingSet& cs, const MinimalData& md, const Point& mu) {
  return assemble_2x2(shifted_diag(cs, 2, mu[1], true), md.E12, md.E21,
                      shifted_diag(cs, 1, mu[0], true));
}

Mat uhat_rhs_pattern(const CouplingSet& cs) {
  const Mat& l1 = cs.Lp(1);
  const Mat& l2 = cs.Lp(2);
  Mat out(2 * (l1.rows() + l2.rows()), l1.cols());
  out << zeros(l2.rows(), l2.cols()), l2, zeros(l1.rows(), l1.cols()), l1;
  return out;
}

Mat u_rhs_pattern(const CouplingSet& cs) {
  const Mat& l1 = cs.Lp(1);
  const Mat& l2 = cs.Lp(2);
  Mat out(l1.cols(), 2 * (l1.rows() + l2.rows()));
  out << l2.adjoint(), zeros(l2.cols(), l2.rows()), l1.adjoint(), zeros(l1.cols(), l1.rows());
  return out;
}

Mat hat_annihilator(const CouplingSet& cs) {
  const Mat& l1 = cs.Lp(1);
  const Mat& l2 = cs.Lp(2);
  Mat out(2 * (l1.rows() + l2.rows()), l1.cols());
  out << l2, zeros(l2.rows(), l2.cols()), -l1, zeros(l1.rows(), l1.cols());
  return out;
}

Mat breve_annihilator(const CouplingSet& cs) {
  const Mat& l1 = cs.Lp(1);
  const Mat& l2 = cs.Lp(2);
  Mat out(2 * (l1.rows() + l2.rows()), l1.cols());
  out << zeros(l2.rows(), l2.cols()), l2, zeros(l1.rows(), l1.cols()), -l1;
  return out;
}

Mat recover_uhat(const MinimalData& md, const CouplingSet& cs, const Point& lambda) {
  const Mat g = build_G(cs, md, lambda);
  const Mat rhs = uhat_rhs_pattern(cs) * md.theta(lambda);
  try {
    return LuFactor<cplx>(g).solve(rhs);
  } catch (const SingularMatrix& e) {
    throw GSingular(std::string("G(lambda) is singular (") + e.what() + ")");
  }
}

Mat recover_u(const MinimalData& md, const CouplingSet& cs, const Point& mu) {
  const Mat e = build_E(cs, md, mu);
  const Mat rhs = md.vartheta(mu) * u_rhs_pattern(cs);
  try {
    return lu_solve_right(e, rhs);
  } catch (const SingularMatrix& err) {
    throw ESingular(std::string("E(mu) is singular (") + err.what() + ")");
  }
}

Mat omega_from_kernels(const Mat& u, const Mat& uhat, const DimTriple& dims,
                       const Point& lambda, const Point& mu, int p) {
  complement(p);
  const cplx gap = lambda[p - 1] - mu[p - 1];
  if (std::abs(gap) <= kPointTolerance * std::max(1.0, std::abs(lambda[p - 1])))
    throw DegenerateSamplePair("lambda_" + std::to_string(p) + " coincides with mu_" +
                               std::to_string(p));
  return (kI / gap) * matmul(u_part(u, dims, p), uhat_part(uhat, dims, p));
}

Mat omega_min(const MinimalData& md, const CouplingSet& cs, const Point& lambda,
              const Point& mu, int p) {
  complement(p);
  const cplx gap = lambda[p - 1] - mu[p - 1];
  if (std::abs(gap) <= kPointTolerance * std::max(1.0, std::abs(lambda[p - 1])))
    throw DegenerateSamplePair("lambda_" + std::to_string(p) + " coincides with mu_" +
                               std::to_string(p));
  return omega_from_kernels(recover_u(md, cs, mu), recover_uhat(md, cs, lambda), md.dims,
                            lambda, mu, p);
}

// --- reflection coefficient -----------------------------------------------

cplx phi(cplx z) {
  if (std::abs(z - 1.0) <= kPointTolerance) throw PhiPole("phi evaluated at its pole z = 1");
  return 0.5 * kI * (z + 1.0) / (z - 1.0);
}

Mat h_vector(const DimTriple& dims, const Point& x) {
  auto powers = [](int n, cplx z) {
    Mat h(n, 1);
    cplx v = 1.0;
    for (int k = 0; k < n; ++k) {
      h(k, 0) = v;
      v *= z;
    }
    return h;
  };
  return kron(kron(powers(dims.m1, x[0]), powers(dims.m2, x[1])), eye(dims.m3));
}

Mat rho_direct(const InverseData& id, const DimTriple& dims, const Point& x, const Point& y) {
  return h_vector(dims, y).transpose() * id.R * h_vector(dims, x);
}

Mat rho_from_omega(const OmegaFn& omega, const Point& x, const Point& y) {
  const Point lambda{phi(x[0]), phi(x[1])};
  const Point mu{-phi(y[0]), -phi(y[1])};
  const cplx factor = (x[0] - 1.0) * (x[1] - 1.0) * (y[0] - 1.0) * (y[1] - 1.0);
  return omega(lambda, mu) / factor;
}

// --- class shortcuts -------------------------------------------------------

cplx q_factor(const DimTriple& dims, const Point& mu) {
  cplx q = 1.0;
  for (int p = 1; p <= 2; ++p) {
    const cplx z = mu[p - 1];
    check_resolvent_point(z, true);
    q *= std::pow((z - 0.5 * kI) / (z + 0.5 * kI), dims[p]);
  }
  return q;
}

Mat u_tilde(const ExchangeSet& ex, int k) {
  complement(k);
  const Mat b = kron(ex[k], ex.U3);
  const Mat z = zeros(b.rows(), b.cols());
  return two_by_two(z, -b, b, z);
}

Mat j_swap(const DimTriple& dims, int p) {
  const int n = dims[complement(p)] * dims.m3;
  return kron(anti_identity(2), eye(n));
}

Mat u_from_uhat_exchange(const Mat& uhat_p_at_mu, const DimTriple& dims, const Point& mu, int p) {
  const ExchangeSet ex = exchange_set(dims);
  const Mat ut = u_tilde(ex, complement(p));
  return -q_factor(dims, mu) * matmul(matmul(ex.U3, transpose(uhat_p_at_mu)), ut);
}

Mat g21_from_g12_exchange(const Mat& g12, const DimTriple& dims) {
  const ExchangeSet ex = exchange_set(dims);
  return matmul(matmul(u_tilde(ex, 1), transpose(g12)), u_tilde(ex, 2));
}

Mat u_from_uhat_adjoint(const Mat& uhat_p_at_conj_mu, const DimTriple& dims, int p) {
  return matmul(conj_transpose(uhat_p_at_conj_mu), j_swap(dims, p));
}

Mat g21_from_g12_adjoint(const Mat& g12, const CouplingSet& cs) {
  const Mat l1l2 = cs.Lp(1) * cs.Lp(2).adjoint();
  const Mat inner = sub(conj_transpose(g12), kI * diag_blocks(l1l2, -l1l2));
  return -matmul(matmul(j_swap(cs.dims(), 2), inner), j_swap(cs.dims(), 1));
}

Mat dstu_u_from_uhat(const MinimalData& md, const CouplingSet& cs, const Point& mu, int p) {
  require_class(cs, is_dstu(cs.class_tag()), true);
  const Mat uhat = recover_uhat(md, cs, mu);
  return u_from_uhat_exchange(uhat_part(uhat, md.dims, p), md.dims, mu, p);
}

Mat dstu_G21_from_G12(const MinimalData& md, const CouplingSet& cs) {
  require_class(cs, is_dstu(cs.class_tag()), true);
  return g21_from_g12_exchange(md.G12, md.dims);
}

Mat sa_u_from_uhat(const MinimalData& md, const CouplingSet& cs, const Point& mu, int p) {
  require_class(cs, cs.class_tag() == StructureClass::self_adjoint, false);
  const Mat uhat = recover_uhat(md, cs, conj(mu));
  return u_from_uhat_adjoint(uhat_part(uhat, md.dims, p), md.dims, p);
}

Mat sa_G21_from_G12(const MinimalData& md, const CouplingSet& cs) {
  require_class(cs, cs.class_tag() == StructureClass::self_adjoint, false);
  return g21_from_g12_adjoint(md.G12, cs);
}

double gamma_hat_transposition_residual(const InverseData& id, const CouplingSet& cs,
                                        const ExchangeSet& ex, int p) {
  const int k = complement(p);
  Mat rhs = ex.U * id.gamma(p) * u_tilde(ex, k);
  const Mat& m3p = cs.M(3, p);
  rhs.rightCols(m3p.cols()) += m3p;
  return rel_residual(rhs, transpose(id.gamma_hat(p)));
}

double pi_adjoint_residual(const CouplingSet& cs) {
  double worst = 0;
  for (int p = 1; p <= 2; ++p)
    worst = std::max(worst, norm_max(cs.Pi(p) - cs.PiHat(p).adjoint() * j_swap(cs.dims(), p)));
  return worst;
}

// --- information count ------------------------------------------------------

InfoCount info_count(const DimTriple& dims, StructureClass cls) {
  const std::int64_t m1 = dims.m1, m2 = dims.m2, m3 = dims.m3;
  const std::int64_t m = m1 * m2 * m3;
  const bool three_d = cls == StructureClass::toeplitz3d;
  InfoCount c;
  c.full_T_entries = three_d ? (2 * m1 - 1) * (2 * m2 - 1) * (2 * m3 - 1)
                             : (2 * m1 - 1) * (2 * m2 - 1) * m3 * m3;
  const int last = three_d ? 3 : 2;
  for (int p = 1; p <= last; ++p)
    c.naive_recovery_entries[static_cast<std::size_t>(p - 1)] = 4 * m * m / dims[p];
  c.minimal_entries = 5 * m1 * m2 * m3 * m3;
  return c;
}

// --- sample points ----------------------------------------------------------

SamplePoints::SamplePoints(std::uint64_t seed, double min_distance, double pole_distance)
    : rng_(seed), min_distance_(min_distance), pole_distance_(pole_distance) {}

cplx SamplePoints::next_scalar() {
  for (;;) {
    const double r = rng_.uniform(0.1, 0.6);
    const double angle = rng_.uniform(0.0, 2.0 * std::numbers::pi);
    const cplx z = std::polar(r, angle);
    if (std::abs(z - 0.5 * kI) < pole_distance_ || std::abs(z + 0.5 * kI) < pole_distance_ ||
        std::abs(z - 1.0) < min_distance_)
      continue;
    return z;
  }
}

Point SamplePoints::next_point() {
  const cplx a = next_scalar();
  const cplx b = next_scalar();
  return {a, b};
}

SamplePair SamplePoints::next_pair() {
  for (;;) {
    SamplePair s{next_point(), next_point()};
    if (std::abs(s.lambda[0] - s.mu[0]) < min_distance_ ||
        std::abs(s.lambda[1] - s.mu[1]) < min_distance_)
      continue;
    return s;
  }
}

}  // namespace tbt
