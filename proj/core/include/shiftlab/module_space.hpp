#pragma once

//
// module_space: truncated standard Hilbert module over the compact operators.
//
// A ModuleVector is a finitely supported Z-indexed family of CompactOp
// coefficients; the A-valued inner product is <x,y> = sum_j x_j^* y_j and the
// module norm is ||x||_2 = ||<x,x>||^(1/2).  Support is stored sparsely so
// shift powers can translate it without an a-priori horizon.
//

#include <map>
#include <string>

#include "shiftlab/operator_core.hpp"

namespace shiftlab {

// Symmetric module-index range [J] = {-J, ..., J}.
struct IndexRange {
  long J = 0;

  explicit IndexRange(long j) : J(j) {
    if (j < 0) throw InvalidArgumentError("IndexRange: J must be >= 0");
  }
  bool contains(long j) const noexcept { return j >= -J && j <= J; }
  long count() const noexcept { return 2 * J + 1; }
};

// Element of the truncated module: finite map module index -> coefficient.
// Coefficients with operator norm <= kStorageThreshold are dropped on
// construction.  Immutable after construction.
class ModuleVector {
 public:
  static constexpr double kStorageThreshold = 1e-15;

  explicit ModuleVector(BasisWindow w) : window_(w) {}
  ModuleVector(BasisWindow w, std::map<long, CompactOp> coeffs);

  static ModuleVector zero(const BasisWindow& w) { return ModuleVector(w); }
  // Single coefficient at module index xi.
  static ModuleVector single(long xi, const CompactOp& coeff);

  const BasisWindow& window() const noexcept { return window_; }
  const std::map<long, CompactOp>& coeffs() const noexcept { return coeffs_; }

  bool has(long xi) const { return coeffs_.count(xi) != 0; }
  // Coefficient at xi; zero matrix if absent.
  CompactOp coeff(long xi) const;
  bool empty() const noexcept { return coeffs_.empty(); }
  long support_size() const noexcept { return static_cast<long>(coeffs_.size()); }

 private:
  BasisWindow window_;
  std::map<long, CompactOp> coeffs_;
};

// <x,y> = sum over the support of x_j^* y_j.  <x,x> is positive semidefinite.
CompactOp inner_product(const ModuleVector& x, const ModuleVector& y);

// ||x||_2 = op_norm(<x,x>)^(1/2); zero iff all coefficients are numerically zero.
double norm2(const ModuleVector& x);

// Element of the dense class F: coefficient P_m * coeffs[j] at each j in [J],
// zero elsewhere.  Every result satisfies x_j = P_m x_j exactly.
ModuleVector dense_class_element(const BasisWindow& w, IndexRange J, long m,
                                 const std::map<long, CompactOp>& coeffs);

// (P~_{J,m})_j = P_m for j in [J], zero elsewhere.
ModuleVector ptilde(const BasisWindow& w, IndexRange J, long m);

ModuleVector add(const ModuleVector& x, const ModuleVector& y);
ModuleVector sub(const ModuleVector& x, const ModuleVector& y);
ModuleVector scale(const ModuleVector& x, Complex c);
double distance(const ModuleVector& x, const ModuleVector& y);

inline ModuleVector operator+(const ModuleVector& x, const ModuleVector& y) { return add(x, y); }
inline ModuleVector operator-(const ModuleVector& x, const ModuleVector& y) { return sub(x, y); }
inline ModuleVector operator*(Complex c, const ModuleVector& x) { return scale(x, c); }
inline ModuleVector operator*(double c, const ModuleVector& x) {
  return scale(x, Complex(c, 0.0));
}

// JSON document {"m_max": int, "coeffs": [{"xi": int, "re": [[...]], "im": [[...]]}]}.
std::string to_json_string(const ModuleVector& x, int indent = -1);
ModuleVector module_vector_from_json(const std::string& text);

}  // namespace shiftlab
