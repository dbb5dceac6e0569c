#pragma once

//
// operator_core: dense complex-matrix kernel over symmetric basis windows.
//
// A BasisWindow models the truncated orthonormal basis {e_-m, ..., e_m};
// a CompactOp is a dense complex matrix indexed by basis indices and plays
// the role of a compact operator at desk scale.  On top of that live the
// operator norm, the lower bound m(.) (smallest singular value), the
// projections P_m and a small set of unitaries.
//

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "shiftlab/errors.hpp"

namespace shiftlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Symmetric index window {-m_max, ..., m_max}; dimension 2*m_max + 1.
class BasisWindow {
 public:
  explicit BasisWindow(long m_max);

  long m_max() const noexcept { return m_max_; }
  long dim() const noexcept { return 2 * m_max_ + 1; }

  // Basis index <-> 0-based storage column.
  long to_col(long basis_index) const;
  long to_basis(long col) const;
  bool contains(long basis_index) const noexcept {
    return basis_index >= -m_max_ && basis_index <= m_max_;
  }

  friend bool operator==(const BasisWindow& a, const BasisWindow& b) noexcept {
    return a.m_max_ == b.m_max_;
  }
  friend bool operator!=(const BasisWindow& a, const BasisWindow& b) noexcept {
    return !(a == b);
  }

 private:
  long m_max_;
};

void require_same_window(const BasisWindow& a, const BasisWindow& b, const char* where);

// Dense complex matrix over a basis window.  Entries must be finite; the
// constructor rejects NaN/Inf.  Immutable after construction.
class CompactOp {
 public:
  CompactOp(BasisWindow window, Matrix entries);

  static CompactOp zero(const BasisWindow& w);
  static CompactOp identity(const BasisWindow& w);
  static CompactOp diagonal(const BasisWindow& w, const Vector& diag);
  static CompactOp scalar(const BasisWindow& w, Complex value);  // value * I

  const BasisWindow& window() const noexcept { return window_; }
  const Matrix& entries() const noexcept { return entries_; }
  long dim() const noexcept { return window_.dim(); }

  // Entry addressed by basis indices (row, col in [-m_max, m_max]).
  Complex at(long row_basis, long col_basis) const;

  bool is_zero(double threshold = 0.0) const;

 private:
  BasisWindow window_;
  Matrix entries_;
};

enum class UnitaryKind { Identity, DiagonalPhase, BasisPermutation };

// Unitaries available for the right action: the identity, diagonal phase
// matrices, and basis permutations (e.g. cyclic shifts).  Construction
// guarantees U*U = UU* = I to 1e-12.
class UnitaryOp {
 public:
  static UnitaryOp identity(const BasisWindow& w);
  // theta holds one angle (radians) per basis index, ordered from -m_max.
  static UnitaryOp diagonal_phase(const BasisWindow& w, std::vector<double> theta);
  // perm maps basis index -> basis index and must be a bijection of the window.
  static UnitaryOp basis_permutation(const BasisWindow& w, std::vector<long> perm);
  // Cyclic shift by s (basis index i -> i + s, wrapping inside the window).
  static UnitaryOp cyclic_shift(const BasisWindow& w, long s);

  const BasisWindow& window() const noexcept { return window_; }
  UnitaryKind kind() const noexcept { return kind_; }

  CompactOp matrix() const;
  CompactOp adjoint_matrix() const;

 private:
  UnitaryOp(BasisWindow w, UnitaryKind kind, Matrix m);

  BasisWindow window_;
  UnitaryKind kind_;
  Matrix matrix_;
};

// Largest singular value.  Full SVD for dim <= 256, power iteration on A*A
// (tol 1e-12, <= 10000 iterations) above that.
double op_norm(const CompactOp& a);

// Lower bound m(A) = sup{ C >= 0 : ||Ah|| >= C||h|| for all h }; equals the
// smallest singular value in finite dimensions.
double lower_bound_m(const CompactOp& a);

// Orthogonal projection onto Span{e_-m, ..., e_m}.
CompactOp projection_P(const BasisWindow& w, long m);

CompactOp matmul(const CompactOp& a, const CompactOp& b);
CompactOp add(const CompactOp& a, const CompactOp& b);
CompactOp sub(const CompactOp& a, const CompactOp& b);
CompactOp scale(const CompactOp& a, Complex c);
CompactOp adjoint(const CompactOp& a);

inline constexpr double kInversionThreshold = 1e-10;

// Inverse via LU; requires sigma_min(a) > threshold, otherwise throws
// SingularityError carrying sigma_min.
CompactOp inverse(const CompactOp& a, double threshold = kInversionThreshold);

// U^n for a materialized unitary matrix: repeated multiplication with polar
// re-unitarization every 64 steps to stop drift.  n may be negative (adjoint
// powers).  n = 0 yields the identity.
CompactOp unitary_power(const UnitaryOp& u, long n);

// Operator sugar used throughout the higher layers.
inline CompactOp operator*(const CompactOp& a, const CompactOp& b) { return matmul(a, b); }
inline CompactOp operator+(const CompactOp& a, const CompactOp& b) { return add(a, b); }
inline CompactOp operator-(const CompactOp& a, const CompactOp& b) { return sub(a, b); }
inline CompactOp operator*(Complex c, const CompactOp& a) { return scale(a, c); }
inline CompactOp operator*(double c, const CompactOp& a) { return scale(a, Complex(c, 0.0)); }

}  // namespace shiftlab
