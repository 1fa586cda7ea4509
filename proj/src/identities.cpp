#include "tbt/identities.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace tbt {

namespace {

constexpr double kPoleTolerance = 64 * std::numeric_limits<double>::epsilon();

/// Sizes (outer, inner) such that A_p = I_outer (x) calA_p (x) I_inner.
std::pair<int, int> kron_frame(const DimTriple& d, int p) {
  switch (p) {
    case 1:
      return {1, d.m2 * d.m3};
    case 2:
      return {d.m1, d.m3};
    case 3:
      return {d.m1 * d.m2, 1};
  }
  throw std::out_of_range("p must be 1, 2 or 3");
}

/// Block-Toeplitz matrix {f(i-k)}_{i,k=0}^{n-1} of equally shaped blocks.
template <typename F>
Mat block_toeplitz(int n, F&& f) {
  const Mat probe = f(0);
  const Eigen::Index br = probe.rows(), bc = probe.cols();
  Mat out(n * br, n * bc);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) out.block(i * br, k * bc, br, bc) = f(i - k);
  return out;
}

/// Running sums 0.5 f(0), 0.5 f(0) + f(step), ..., stacked vertically
/// (`vertical`) or side by side.
template <typename F>
Mat cumulative(int count, int step, bool vertical, F&& f) {
  const Mat first = f(0);
  const Eigen::Index br = first.rows(), bc = first.cols();
  Mat out = vertical ? Mat(count * br, bc) : Mat(br, count * bc);
  Mat acc = 0.5 * first;
  for (int j = 0; j < count; ++j) {
    if (j > 0) acc += f(step * j);
    if (vertical)
      out.middleRows(j * br, br) = acc;
    else
      out.middleCols(j * bc, bc) = acc;
  }
  return out;
}

int complement(int p) {
  if (p != 1 && p != 2) throw std::out_of_range("index must be 1 or 2");
  return 3 - p;
}

double t_scale(const BlockTbtSpec& spec) { return std::max(spec.max_coeff_abs(), 1.0); }

}  // namespace

Mat build_calA(int n) {
  Mat a = zeros(n, n);
  for (int j = 0; j < n; ++j) {
    a(j, j) = 0.5 * kI;
    for (int l = 0; l < j; ++l) a(j, l) = kI;
  }
  return a;
}

Mat build_A(const DimTriple& dims, int p) {
  const auto [outer, inner] = kron_frame(dims, p);
  return kron(kron(eye(outer), build_calA(dims[p])), eye(inner));
}

void check_resolvent_point(cplx z, bool adjoint) {
  const cplx pole = adjoint ? -0.5 * kI : 0.5 * kI;
  if (std::abs(z - pole) <= kPoleTolerance)
    throw PoleAtSpectrum("resolvent evaluated at its pole " + std::string(adjoint ? "-i/2" : "i/2"));
}

Mat calA_resolvent(int n, cplx z, bool adjoint) {
  check_resolvent_point(z, adjoint);
  Mat a = build_calA(n);
  if (adjoint) a = a.adjoint().eval();
  return inverse(a - z * eye(n));
}

Mat resolvent_A(const DimTriple& dims, int p, cplx z, Side side, const Mat& x, bool adjoint) {
  const auto [outer, inner] = kron_frame(dims, p);
  return kron_apply(calA_resolvent(dims[p], z, adjoint), outer, inner, x, side);
}

Mat row_resolvent_calA(int n, cplx z) {
  if (std::abs(z + 0.5 * kI) <= kPoleTolerance)
    throw PoleAtSpectrum("row resolvent evaluated at its pole -i/2");
  const cplx denom = 2.0 * z + kI;
  const cplx w = (2.0 * z - kI) / denom;
  Mat row(1, n);
  cplx power = -2.0 / denom;
  for (int k = 0; k < n; ++k) {
    row(0, k) = power;
    power *= w;
  }
  return row;
}

// --- CouplingSet -----------------------------------------------------------

void CouplingSet::check_p(int p, int max_p) {
  if (p < 1 || p > max_p)
    throw std::out_of_range("identity index " + std::to_string(p) + " out of range");
}

const Mat& CouplingSet::calA(int p) const {
  check_p(p, 3);
  return calA_[p - 1];
}

const Mat& CouplingSet::A(int p) const {
  check_p(p, 3);
  return A_[p - 1];
}

const Mat& CouplingSet::M(int k, int p) const {
  check_p(k, 4);
  check_p(p, 3);
  if (p == 3 && !has_third_) throw NotThreeD("M_{k3} exists only for 3-D Toeplitz specs");
  return M_[k - 1][p - 1];
}

const Mat& CouplingSet::Pi(int p) const {
  check_p(p, 3);
  if (p == 3 && !has_third_) throw NotThreeD("Pi_3 exists only for 3-D Toeplitz specs");
  return Pi_[p - 1];
}

const Mat& CouplingSet::PiHat(int p) const {
  check_p(p, 3);
  if (p == 3 && !has_third_) throw NotThreeD("PiHat_3 exists only for 3-D Toeplitz specs");
  return PiHat_[p - 1];
}

const Mat& CouplingSet::K1(int p) const {
  check_p(p, 2);
  return K1_[p - 1];
}

const Mat& CouplingSet::Lp(int p) const {
  check_p(p, 2);
  return Lp_[p - 1];
}

Mat CouplingSet::M11_block(int i) const {
  const int n = dims_.m2 * dims_.m3;
  return M_[0][0].middleRows((i - 1) * n, n);
}

Mat CouplingSet::M41_block(int k) const {
  const int n = dims_.m2 * dims_.m3;
  return M_[3][0].middleCols((k - 1) * n, n);
}

const Mat& CouplingSet::M12_block(int r) const {
  return M12_blocks_.at(static_cast<std::size_t>(r + dims_.m1 - 1));
}

const Mat& CouplingSet::M42_block(int r) const {
  return M42_blocks_.at(static_cast<std::size_t>(r + dims_.m1 - 1));
}

CouplingSet build_M(const BlockTbtSpec& spec) {
  const DimTriple& d = spec.dims();
  const int m1 = d.m1, m2 = d.m2, m3 = d.m3;
  CouplingSet cs;
  cs.dims_ = d;
  cs.class_tag_ = spec.class_tag();
  cs.has_third_ = spec.class_tag() == StructureClass::toeplitz3d;
  for (int p = 1; p <= 3; ++p) {
    cs.calA_[p - 1] = build_calA(d[p]);
    cs.A_[p - 1] = build_A(d, p);
  }

  // First identity.
  auto T = [&](int r) { return outer_block(spec, r); };
  cs.M_[0][0] = cumulative(m1, 1, true, T);
  cs.M_[1][0] = kron(ones(m1).adjoint(), eye(m2 * m3));
  cs.M_[2][0] = cs.M_[1][0].adjoint();
  cs.M_[3][0] = cumulative(m1, -1, false, T);

  // Second identity.
  for (int r = -(m1 - 1); r < m1; ++r) {
    auto t = [&](int s) { return spec.coeff(r, s); };
    cs.M12_blocks_.push_back(cumulative(m2, 1, true, t));
    cs.M42_blocks_.push_back(cumulative(m2, -1, false, t));
  }
  cs.M_[0][1] = block_toeplitz(m1, [&](int r) { return cs.M12_block(r); });
  cs.M_[1][1] = kron(kron(eye(m1), ones(m2).adjoint()), eye(m3));
  cs.M_[2][1] = cs.M_[1][1].adjoint();
  cs.M_[3][1] = block_toeplitz(m1, [&](int r) { return cs.M42_block(r); });

  if (cs.has_third_) {
    const Toeplitz3dSpec s3 = extract_3d(spec);
    auto m13 = [&](int r, int s) {
      return cumulative(m3, 1, true, [&](int j) { return Mat::Constant(1, 1, s3.tau(r, s, j)); });
    };
    auto m43 = [&](int r, int s) {
      return cumulative(m3, -1, false, [&](int j) { return Mat::Constant(1, 1, s3.tau(r, s, j)); });
    };
    cs.M_[0][2] = block_toeplitz(
        m1, [&](int r) { return block_toeplitz(m2, [&](int s) { return m13(r, s); }); });
    cs.M_[1][2] = kron(eye(m1 * m2), ones(m3).adjoint());
    cs.M_[2][2] = cs.M_[1][2].adjoint();
    cs.M_[3][2] = block_toeplitz(
        m1, [&](int r) { return block_toeplitz(m2, [&](int s) { return m43(r, s); }); });
  }

  const int identities = cs.has_third_ ? 3 : 2;
  for (int p = 0; p < identities; ++p) {
    Mat pi(cs.M_[0][p].rows(), cs.M_[0][p].cols() + cs.M_[2][p].cols());
    pi << cs.M_[0][p], cs.M_[2][p];
    cs.Pi_[p] = std::move(pi);
    Mat pihat(cs.M_[1][p].rows() + cs.M_[3][p].rows(), cs.M_[1][p].cols());
    pihat << cs.M_[1][p], cs.M_[3][p];
    cs.PiHat_[p] = std::move(pihat);
  }

  auto m42 = [&](int r) { return cs.M42_block(r); };
  auto m12 = [&](int r) { return cs.M12_block(r); };
  cs.K1_[0] = cumulative(m1, 1, true, m42);
  cs.K1_[1] = cumulative(m1, -1, false, m12);
  cs.K_ = cumulative(m1, -1, false, m42);
  cs.N_ = cumulative(m1, 1, true, m12);

  cs.L_ = kron(ones(m1 * m2), eye(m3));
  cs.Lp_[0] = kron(ones(m1), eye(m3));
  cs.Lp_[1] = kron(ones(m2), eye(m3));
  return cs;
}

Mat coupling_Q(const CouplingSet& cs, int k) {
  complement(k);
  return cs.K1(k) * cs.M(2, k) + cs.Lp(k) * cs.K();
}

Mat coupling_Q_from_definition(const CouplingSet& cs, int k) {
  complement(k);
  const DimTriple& d = cs.dims();
  const Mat k2 = k == 1 ? kron(ones(d.m1).adjoint(), eye(d.m2 * d.m3))
                        : kron(kron(eye(d.m1), ones(d.m2).adjoint()), eye(d.m3));
  const Mat k3 = kron(ones(d[k]), eye(d.m3));
  return cs.K1(k) * k2 + k3 * cs.K();
}

Mat coupling_V(const CouplingSet& cs, int p) {
  const int k = complement(p);
  return cs.N() * cs.Lp(p).adjoint() + cs.M(3, p) * cs.K1(k);
}

double verify_identity_T(const Mat& t, const CouplingSet& cs, int p) {
  const Mat& a = cs.A(p);
  const Mat lhs = a * t - t * a.adjoint();
  const Mat rhs = kI * (cs.Pi(p) * cs.PiHat(p));
  return norm_max(lhs - rhs) / std::max(norm_max(t), 1.0);
}

double verify_identity_T(const BlockTbtSpec& spec, const CouplingSet& cs, int p) {
  return verify_identity_T(assemble(spec), cs, p);
}

double verify_identity_M4(const BlockTbtSpec& spec, const CouplingSet& cs, int k) {
  const int p = complement(k);
  const DimTriple& d = cs.dims();
  const Mat& m4 = cs.M(4, p);
  const Mat q = coupling_Q(cs, k);
  const Mat lhs = kron(cs.calA(k), eye(d.m3)) * m4 - m4 * cs.A(k).adjoint();
  const double scale = t_scale(spec);
  const double identity = norm_max(lhs - kI * q) / scale;
  const double factored = norm_max(q - coupling_Q_from_definition(cs, k)) / scale;
  return std::max(identity, factored);
}

double verify_identity_M1(const BlockTbtSpec& spec, const CouplingSet& cs, int p) {
  const int k = complement(p);
  const DimTriple& d = cs.dims();
  const Mat& m1k = cs.M(1, k);
  const Mat lhs = cs.A(p) * m1k - m1k * kron(cs.calA(p).adjoint(), eye(d.m3));
  return norm_max(lhs - kI * coupling_V(cs, p)) / t_scale(spec);
}

double verify_inverse_identity(const Mat& r, const CouplingSet& cs, int p) {
  const Mat& a = cs.A(p);
  const Mat gamma = r * cs.Pi(p);
  const Mat gamma_hat = cs.PiHat(p) * r;
  const Mat lhs = r * a - a.adjoint() * r;
  const double scale = norm_max(r);
  const double diff = norm_max(lhs - kI * (gamma * gamma_hat));
  return scale > 0 ? diff / scale : diff;
}

double commutation_residual(const CouplingSet& cs) {
  double out = 0;
  for (int p = 1; p <= 3; ++p)
    for (int q = p + 1; q <= 3; ++q)
      out = std::max(out, norm_max(cs.A(p) * cs.A(q) - cs.A(q) * cs.A(p)));
  return out;
}

double annihilator_residual(const CouplingSet& cs) {
  const Mat lstar = cs.L().adjoint();
  return std::max(norm_max(cs.Lp(2).adjoint() * cs.M(2, 1) - lstar),
                  norm_max(cs.Lp(1).adjoint() * cs.M(2, 2) - lstar));
}

}  // namespace tbt
