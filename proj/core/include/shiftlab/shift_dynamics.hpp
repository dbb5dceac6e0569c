#pragma once

//
// shift_dynamics: the generalized bilateral weighted shift on the truncated
// module and its inverse,
//
//   (T x)_xi = W_xi  x_{xi-1} U,          (S y)_xi = W_{xi+1}^{-1} y_{xi+1} U*,
//
// together with the closed-form powers, the averaged operator
// C^(n) = (T^n + S^n)/2, and the ordered forward / inverse weight products
// that drive every criterion check.
//

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "shiftlab/module_space.hpp"

namespace shiftlab {

// Uniformly bounded family {W_j} of invertible operators, given as a total
// function of j.  Declared bounds ||W_j|| <= M and ||W_j^{-1}|| <= M_inv are
// verified lazily on every index actually requested; a violation throws
// WeightBoundError.  An explicit inverse provider may be supplied for
// families whose truncated matrices are only pseudo-invertible (boundary
// loss); without one, inverses are computed and must clear the singularity
// threshold.  Instances are immutable and safe to share across threads.
class WeightFamily {
 public:
  using Provider = std::function<CompactOp(long)>;

  WeightFamily(BasisWindow w, Provider provider, double M, double M_inv);
  WeightFamily(BasisWindow w, Provider provider, Provider inverse_provider, double M,
               double M_inv);

  const BasisWindow& window() const noexcept { return window_; }
  double M() const noexcept { return M_; }
  double M_inv() const noexcept { return M_inv_; }
  bool has_explicit_inverse() const noexcept { return static_cast<bool>(inverse_provider_); }

  CompactOp weight(long j) const;
  CompactOp weight_inverse(long j) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<long, CompactOp> fwd;
    std::map<long, CompactOp> inv;
  };

  BasisWindow window_;
  Provider provider_;
  Provider inverse_provider_;  // empty -> numeric inversion
  double M_;
  double M_inv_;
  std::shared_ptr<Cache> cache_;
};

// T_{U,W} bundled with the data defining it.
struct ShiftOperator {
  WeightFamily weights;
  UnitaryOp unitary;

  ShiftOperator(WeightFamily w, UnitaryOp u);
};

ModuleVector apply_T(const ShiftOperator& op, const ModuleVector& x);
ModuleVector apply_S(const ShiftOperator& op, const ModuleVector& y);

// Closed-form n-th powers:
//   (T^n x)_xi = W_xi W_{xi-1} ... W_{xi-n+1}  x_{xi-n}  U^n
//   (S^n y)_xi = W_{xi+1}^{-1} ... W_{xi+n}^{-1}  y_{xi+n}  U*^n
ModuleVector apply_T_power(const ShiftOperator& op, long n, const ModuleVector& x);
ModuleVector apply_S_power(const ShiftOperator& op, long n, const ModuleVector& y);

// C^(n) x = (T^n x + S^n x) / 2.
ModuleVector apply_C_avg(const ShiftOperator& op, long n, const ModuleVector& x);

// Ordered product W_{j+n} W_{j+n-1} ... W_{j+1}.  Factors are applied in the
// written order; products grow by left-multiplying the newest factor, so a
// sweep over increasing n extends the same accumulation.
CompactOp forward_product(const WeightFamily& w, long j, long n);

// Ordered product W_{j-n+1}^{-1} W_{j-n+2}^{-1} ... W_j^{-1}.
CompactOp inverse_product(const WeightFamily& w, long j, long n);

// Incremental accumulators used by sweeps and series; advance_to(n) extends
// the product without re-associating already-multiplied factors.
class ForwardProductSweep {
 public:
  ForwardProductSweep(WeightFamily weights, long j);
  const CompactOp& advance_to(long n);
  long length() const noexcept { return n_; }

 private:
  WeightFamily weights_;
  long j_;
  long n_ = 0;
  CompactOp acc_;
};

class InverseProductSweep {
 public:
  InverseProductSweep(WeightFamily weights, long j);
  const CompactOp& advance_to(long n);
  long length() const noexcept { return n_; }

 private:
  WeightFamily weights_;
  long j_;
  long n_ = 0;
  CompactOp acc_;
};

}  // namespace shiftlab
