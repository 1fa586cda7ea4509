#ifndef TBT_STRUCTURED_HPP
#define TBT_STRUCTURED_HPP

// Block Toeplitz-block-Toeplitz matrices and their subclasses.
//
// A block TBT matrix of dims (m1, m2, m3) is an m1 x m1 block Toeplitz matrix
// whose (i,k) block is the m2 x m2 block Toeplitz matrix T_{i-k}; the (i',k')
// block of T_r is the m3 x m3 coefficient t^{(r)}_{i'-k'}. Offsets r and s run
// over [-(m1-1), m1-1] and [-(m2-1), m2-1].

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tbt/linalg.hpp"

namespace tbt {

enum class StructureClass { general, self_adjoint, dstu, toeplitz3d };

std::string_view to_string(StructureClass c);
/// Throws std::invalid_argument for unknown names.
StructureClass parse_structure_class(std::string_view name);

/// Sizes of the three nesting levels; every level has at least two entries.
struct DimTriple {
  int m1 = 2;
  int m2 = 2;
  int m3 = 2;

  /// Throws InvalidDims unless m1, m2, m3 >= 2.
  static DimTriple make(int m1, int m2, int m3);

  int m() const { return m1 * m2 * m3; }
  /// m_p for p in {1, 2, 3}.
  int operator[](int p) const;

  friend bool operator==(const DimTriple&, const DimTriple&) = default;
};

class BlockTbtSpec {
 public:
  /// All coefficients zero.
  BlockTbtSpec(DimTriple dims, StructureClass tag);
  /// `coeffs` is indexed densely by (r + m1 - 1) * (2 m2 - 1) + (s + m2 - 1).
  /// Throws SpecIncomplete if the count or any block shape is wrong.
  BlockTbtSpec(DimTriple dims, StructureClass tag, std::vector<Mat> coeffs);

  /// t_0^{(0)} = I, every other coefficient zero.
  static BlockTbtSpec identity(DimTriple dims, StructureClass tag = StructureClass::general);

  const DimTriple& dims() const { return dims_; }
  StructureClass class_tag() const { return tag_; }
  const std::vector<Mat>& coeffs() const { return coeffs_; }

  /// t_s^{(r)}.
  const Mat& coeff(int r, int s) const { return coeffs_[index(r, s)]; }

  double max_coeff_abs() const;

  BlockTbtSpec with_class(StructureClass tag) const;
  /// Copy with t_s^{(r)} replaced.
  BlockTbtSpec with_coeff(int r, int s, Mat block) const;

  friend bool operator==(const BlockTbtSpec& a, const BlockTbtSpec& b);

 private:
  std::size_t index(int r, int s) const;

  DimTriple dims_;
  StructureClass tag_;
  std::vector<Mat> coeffs_;
};

/// Scalar coefficients tau_j^{(r,s)} of a 3-D Toeplitz matrix.
class Toeplitz3dSpec {
 public:
  explicit Toeplitz3dSpec(DimTriple dims);
  /// `taus` is ordered r-major, then s, then j (each offset ascending).
  Toeplitz3dSpec(DimTriple dims, std::vector<cplx> taus);

  const DimTriple& dims() const { return dims_; }
  const std::vector<cplx>& taus() const { return taus_; }
  cplx tau(int r, int s, int j) const { return taus_[index(r, s, j)]; }
  Toeplitz3dSpec with_tau(int r, int s, int j, cplx value) const;

 private:
  std::size_t index(int r, int s, int j) const;

  DimTriple dims_;
  std::vector<cplx> taus_;
};

/// Anti-identity exchange matrices U_p and U = U1 (x) U2 (x) U3.
struct ExchangeSet {
  Mat U1, U2, U3, U;

  const Mat& operator[](int p) const;
};

/// Anti-identity of size n.
Mat anti_identity(int n);

/// Outer block T_r, the (m2 m3)-square block Toeplitz matrix {t^{(r)}_{i-k}}.
Mat outer_block(const BlockTbtSpec& spec, int r);

Mat assemble(const BlockTbtSpec& spec);

BlockTbtSpec lift_3d(const Toeplitz3dSpec& spec3);

/// Scalar coefficients of a spec whose blocks are Toeplitz, read from the
/// first column and row of each block. Only meaningful for 3-D specs.
Toeplitz3dSpec extract_3d(const BlockTbtSpec& spec);

/// Seeded random instance of the requested class.
///
/// Entries have real and imaginary parts uniform on [-1, 1), drawn in
/// storage order (r, then s, then block row, then block column; real part
/// first). The class projection is then applied:
///   self_adjoint: t_{-s}^{(-r)} <- (t_s^{(r)})^* for r > 0, and for r = 0,
///                 s > 0; t_0^{(0)} <- (t + t^*)/2.
///   dstu:         t <- (t + U3 t^T U3)/2 for every block.
///   toeplitz3d:   scalars tau_j^{(r,s)} are drawn (r, s, j order) and lifted.
/// Finally t_0^{(0)} += shift * I, with shift defaulting to 2 m max|t|, which
/// makes the assembled matrix strictly diagonally dominant.
BlockTbtSpec random_spec(DimTriple dims, std::uint64_t seed, StructureClass cls,
                         std::optional<double> shift = std::nullopt);

Toeplitz3dSpec random_toeplitz3d(DimTriple dims, std::uint64_t seed,
                                 std::optional<double> shift = std::nullopt);

/// Default shift 2 m * max|coefficient|.
double default_shift(const DimTriple& dims, double max_coeff_abs);

struct StructureCheck {
  /// Relative residuals (divided by the largest coefficient modulus).
  double self_adjoint_residual = 0;
  double dstu_residual = 0;
  double toeplitz3d_residual = 0;
  double tolerance = 1e-13;

  bool self_adjoint() const { return self_adjoint_residual <= tolerance; }
  bool dstu() const { return dstu_residual <= tolerance; }
  bool toeplitz3d() const { return toeplitz3d_residual <= tolerance; }
  bool satisfies(StructureClass c) const;
  double residual(StructureClass c) const;
  std::vector<StructureClass> satisfied() const;
};

StructureCheck structure_check(const BlockTbtSpec& spec, double tolerance = 1e-13);

ExchangeSet exchange_set(const DimTriple& dims);

}  // namespace tbt

#endif  // TBT_STRUCTURED_HPP
