#include "tbt/structured.hpp"

#include <algorithm>
#include <stdexcept>

#include "tbt/random.hpp"

namespace tbt {

std::string_view to_string(StructureClass c) {
  switch (c) {
    case StructureClass::general:
      return "general";
    case StructureClass::self_adjoint:
      return "self_adjoint";
    case StructureClass::dstu:
      return "dstu";
    case StructureClass::toeplitz3d:
      return "toeplitz3d";
  }
  return "general";
}

StructureClass parse_structure_class(std::string_view name) {
  if (name == "general") return StructureClass::general;
  if (name == "self_adjoint") return StructureClass::self_adjoint;
  if (name == "dstu") return StructureClass::dstu;
  if (name == "toeplitz3d") return StructureClass::toeplitz3d;
  throw std::invalid_argument("unknown structure class '" + std::string(name) + "'");
}

DimTriple DimTriple::make(int m1, int m2, int m3) {
  if (m1 < 2 || m2 < 2 || m3 < 2)
    throw InvalidDims("dims must satisfy m1, m2, m3 >= 2, got (" + std::to_string(m1) +
                      "," + std::to_string(m2) + "," + std::to_string(m3) + ")");
  return DimTriple{m1, m2, m3};
}

int DimTriple::operator[](int p) const {
  switch (p) {
    case 1:
      return m1;
    case 2:
      return m2;
    case 3:
      return m3;
  }
  throw std::out_of_range("DimTriple index must be 1, 2 or 3");
}

// --- BlockTbtSpec ----------------------------------------------------------

namespace {

std::size_t coeff_count(const DimTriple& d) {
  return static_cast<std::size_t>((2 * d.m1 - 1) * (2 * d.m2 - 1));
}

}  // namespace

BlockTbtSpec::BlockTbtSpec(DimTriple dims, StructureClass tag)
    : dims_(DimTriple::make(dims.m1, dims.m2, dims.m3)),
      tag_(tag),
      coeffs_(coeff_count(dims_), zeros(dims_.m3, dims_.m3)) {}

BlockTbtSpec::BlockTbtSpec(DimTriple dims, StructureClass tag, std::vector<Mat> coeffs)
    : dims_(DimTriple::make(dims.m1, dims.m2, dims.m3)), tag_(tag), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != coeff_count(dims_))
    throw SpecIncomplete("expected " + std::to_string(coeff_count(dims_)) +
                         " coefficient blocks, got " + std::to_string(coeffs_.size()));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k].rows() != dims_.m3 || coeffs_[k].cols() != dims_.m3)
      throw SpecIncomplete("coefficient block " + std::to_string(k) + " is not " +
                           std::to_string(dims_.m3) + "x" + std::to_string(dims_.m3));
    require_finite(coeffs_[k], "coefficient block " + std::to_string(k));
  }
}

BlockTbtSpec BlockTbtSpec::identity(DimTriple dims, StructureClass tag) {
  BlockTbtSpec spec(dims, tag);
  spec.coeffs_[spec.index(0, 0)] = eye(spec.dims_.m3);
  return spec;
}

std::size_t BlockTbtSpec::index(int r, int s) const {
  if (r <= -dims_.m1 || r >= dims_.m1 || s <= -dims_.m2 || s >= dims_.m2)
    throw std::out_of_range("coefficient offset (" + std::to_string(r) + "," +
                            std::to_string(s) + ") out of range");
  return static_cast<std::size_t>((r + dims_.m1 - 1) * (2 * dims_.m2 - 1) + (s + dims_.m2 - 1));
}

double BlockTbtSpec::max_coeff_abs() const {
  double out = 0;
  for (const auto& c : coeffs_) out = std::max(out, norm_max(c));
  return out;
}

BlockTbtSpec BlockTbtSpec::with_class(StructureClass tag) const {
  BlockTbtSpec copy = *this;
  copy.tag_ = tag;
  return copy;
}

BlockTbtSpec BlockTbtSpec::with_coeff(int r, int s, Mat block) const {
  if (block.rows() != dims_.m3 || block.cols() != dims_.m3)
    throw SpecIncomplete("replacement block has wrong shape");
  BlockTbtSpec copy = *this;
  copy.coeffs_[index(r, s)] = std::move(block);
  return copy;
}

bool operator==(const BlockTbtSpec& a, const BlockTbtSpec& b) {
  if (!(a.dims_ == b.dims_) || a.tag_ != b.tag_) return false;
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k)
    if (a.coeffs_[k] != b.coeffs_[k]) return false;
  return true;
}

// --- Toeplitz3dSpec --------------------------------------------------------

namespace {

std::size_t tau_count(const DimTriple& d) {
  return static_cast<std::size_t>((2 * d.m1 - 1) * (2 * d.m2 - 1) * (2 * d.m3 - 1));
}

}  // namespace

Toeplitz3dSpec::Toeplitz3dSpec(DimTriple dims)
    : dims_(DimTriple::make(dims.m1, dims.m2, dims.m3)), taus_(tau_count(dims_), cplx{}) {}

Toeplitz3dSpec::Toeplitz3dSpec(DimTriple dims, std::vector<cplx> taus)
    : dims_(DimTriple::make(dims.m1, dims.m2, dims.m3)), taus_(std::move(taus)) {
  if (taus_.size() != tau_count(dims_))
    throw SpecIncomplete("expected " + std::to_string(tau_count(dims_)) + " taus, got " +
                         std::to_string(taus_.size()));
  for (const auto& t : taus_)
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag()))
      throw NonFiniteEntry("tau coefficient is NaN/Inf");
}

std::size_t Toeplitz3dSpec::index(int r, int s, int j) const {
  if (r <= -dims_.m1 || r >= dims_.m1 || s <= -dims_.m2 || s >= dims_.m2 ||
      j <= -dims_.m3 || j >= dims_.m3)
    throw std::out_of_range("tau offset out of range");
  return static_cast<std::size_t>(
      ((r + dims_.m1 - 1) * (2 * dims_.m2 - 1) + (s + dims_.m2 - 1)) * (2 * dims_.m3 - 1) +
      (j + dims_.m3 - 1));
}

Toeplitz3dSpec Toeplitz3dSpec::with_tau(int r, int s, int j, cplx value) const {
  Toeplitz3dSpec copy = *this;
  copy.taus_[index(r, s, j)] = value;
  return copy;
}

// --- construction ----------------------------------------------------------

Mat anti_identity(int n) { return eye(n).rowwise().reverse(); }

const Mat& ExchangeSet::operator[](int p) const {
  switch (p) {
    case 1:
      return U1;
    case 2:
      return U2;
    case 3:
      return U3;
  }
  throw std::out_of_range("ExchangeSet index must be 1, 2 or 3");
}

ExchangeSet exchange_set(const DimTriple& dims) {
  ExchangeSet ex;
  ex.U1 = anti_identity(dims.m1);
  ex.U2 = anti_identity(dims.m2);
  ex.U3 = anti_identity(dims.m3);
  ex.U = kron(kron(ex.U1, ex.U2), ex.U3);
  return ex;
}

Mat outer_block(const BlockTbtSpec& spec, int r) {
  const auto& d = spec.dims();
  Mat out(d.m2 * d.m3, d.m2 * d.m3);
  for (int a = 0; a < d.m2; ++a)
    for (int b = 0; b < d.m2; ++b)
      out.block(a * d.m3, b * d.m3, d.m3, d.m3) = spec.coeff(r, a - b);
  return out;
}

Mat assemble(const BlockTbtSpec& spec) {
  const auto& d = spec.dims();
  const int n = d.m2 * d.m3;
  Mat t(d.m(), d.m());
  for (int r = -(d.m1 - 1); r < d.m1; ++r) {
    const Mat block = outer_block(spec, r);
    for (int i = std::max(0, r); i < d.m1 && i - r < d.m1; ++i)
      t.block(i * n, (i - r) * n, n, n) = block;
  }
  return t;
}

BlockTbtSpec lift_3d(const Toeplitz3dSpec& spec3) {
  const auto& d = spec3.dims();
  std::vector<Mat> coeffs;
  coeffs.reserve(coeff_count(d));
  for (int r = -(d.m1 - 1); r < d.m1; ++r)
    for (int s = -(d.m2 - 1); s < d.m2; ++s) {
      Mat block(d.m3, d.m3);
      for (int a = 0; a < d.m3; ++a)
        for (int b = 0; b < d.m3; ++b) block(a, b) = spec3.tau(r, s, a - b);
      coeffs.push_back(std::move(block));
    }
  return BlockTbtSpec(d, StructureClass::toeplitz3d, std::move(coeffs));
}

Toeplitz3dSpec extract_3d(const BlockTbtSpec& spec) {
  const auto& d = spec.dims();
  std::vector<cplx> taus;
  taus.reserve(tau_count(d));
  for (int r = -(d.m1 - 1); r < d.m1; ++r)
    for (int s = -(d.m2 - 1); s < d.m2; ++s) {
      const Mat& t = spec.coeff(r, s);
      for (int j = -(d.m3 - 1); j < d.m3; ++j) taus.push_back(j >= 0 ? t(j, 0) : t(0, -j));
    }
  return Toeplitz3dSpec(d, std::move(taus));
}

double default_shift(const DimTriple& dims, double max_coeff_abs) {
  return 2.0 * dims.m() * max_coeff_abs;
}

namespace {

cplx draw(Xorshift64Star& rng) {
  const double re = rng.uniform(-1.0, 1.0);
  const double im = rng.uniform(-1.0, 1.0);
  return {re, im};
}

}  // namespace

Toeplitz3dSpec random_toeplitz3d(DimTriple dims, std::uint64_t seed, std::optional<double> shift) {
  const DimTriple d = DimTriple::make(dims.m1, dims.m2, dims.m3);
  Xorshift64Star rng(seed);
  std::vector<cplx> taus(tau_count(d));
  double maxabs = 0;
  for (auto& t : taus) {
    t = draw(rng);
    maxabs = std::max(maxabs, std::abs(t));
  }
  const Toeplitz3dSpec drawn(d, std::move(taus));
  const double sh = shift.value_or(default_shift(d, maxabs));
  return drawn.with_tau(0, 0, 0, drawn.tau(0, 0, 0) + sh);
}

BlockTbtSpec random_spec(DimTriple dims, std::uint64_t seed, StructureClass cls,
                         std::optional<double> shift) {
  const DimTriple d = DimTriple::make(dims.m1, dims.m2, dims.m3);
  if (cls == StructureClass::toeplitz3d) return lift_3d(random_toeplitz3d(d, seed, shift));

  Xorshift64Star rng(seed);
  std::vector<Mat> coeffs(coeff_count(d));
  for (auto& block : coeffs) {
    block.resize(d.m3, d.m3);
    for (int a = 0; a < d.m3; ++a)
      for (int b = 0; b < d.m3; ++b) block(a, b) = draw(rng);
  }
  auto at = [&](int r, int s) -> Mat& {
    return coeffs[static_cast<std::size_t>((r + d.m1 - 1) * (2 * d.m2 - 1) + (s + d.m2 - 1))];
  };

  if (cls == StructureClass::self_adjoint) {
    for (int r = 0; r < d.m1; ++r)
      for (int s = (r == 0 ? 1 : -(d.m2 - 1)); s < d.m2; ++s) at(-r, -s) = at(r, s).adjoint();
    Mat& t00 = at(0, 0);
    t00 = ((t00 + t00.adjoint()) / 2.0).eval();
  } else if (cls == StructureClass::dstu) {
    const Mat u3 = anti_identity(d.m3);
    for (auto& block : coeffs) block = ((block + u3 * block.transpose() * u3) / 2.0).eval();
  }

  double maxabs = 0;
  for (const auto& block : coeffs) maxabs = std::max(maxabs, norm_max(block));
  const double sh = shift.value_or(default_shift(d, maxabs));
  at(0, 0) += sh * eye(d.m3);
  return BlockTbtSpec(d, cls, std::move(coeffs));
}

// --- classification --------------------------------------------------------

bool StructureCheck::satisfies(StructureClass c) const {
  switch (c) {
    case StructureClass::general:
      return true;
    case StructureClass::self_adjoint:
      return self_adjoint();
    case StructureClass::dstu:
      return dstu();
    case StructureClass::toeplitz3d:
      return toeplitz3d();
  }
  return false;
}

double StructureCheck::residual(StructureClass c) const {
  switch (c) {
    case StructureClass::general:
      return 0;
    case StructureClass::self_adjoint:
      return self_adjoint_residual;
    case StructureClass::dstu:
      return dstu_residual;
    case StructureClass::toeplitz3d:
      return toeplitz3d_residual;
  }
  return 0;
}

std::vector<StructureClass> StructureCheck::satisfied() const {
  std::vector<StructureClass> out;
  for (auto c : {StructureClass::self_adjoint, StructureClass::dstu, StructureClass::toeplitz3d})
    if (satisfies(c)) out.push_back(c);
  return out;
}

StructureCheck structure_check(const BlockTbtSpec& spec, double tolerance) {
  const auto& d = spec.dims();
  const Mat u3 = anti_identity(d.m3);
  double sa = 0, dstu = 0, toep = 0;
  for (int r = -(d.m1 - 1); r < d.m1; ++r)
    for (int s = -(d.m2 - 1); s < d.m2; ++s) {
      const Mat& t = spec.coeff(r, s);
      sa = std::max(sa, norm_max(t.adjoint() - spec.coeff(-r, -s)));
      dstu = std::max(dstu, norm_max(u3 * t * u3 - t.transpose()));
      for (int a = 1; a < d.m3; ++a)
        for (int b = 1; b < d.m3; ++b) toep = std::max(toep, std::abs(t(a, b) - t(a - 1, b - 1)));
    }
  const double scale = spec.max_coeff_abs();
  StructureCheck out;
  out.tolerance = tolerance;
  if (scale > 0) {
    out.self_adjoint_residual = sa / scale;
    out.dstu_residual = dstu / scale;
    out.toeplitz3d_residual = toep / scale;
  }
  return out;
}

}  // namespace tbt
