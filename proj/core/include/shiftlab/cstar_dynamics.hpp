#pragma once

//
// cstar_dynamics: the abstract operator a |-> b * Phi(a) on a non-unital
// C*-algebra A sitting as an ideal inside a unital A1, with two desk-scale
// instantiations:
//
//   compact:      A = A1 = matrices on a basis window, Phi = conjugation by a
//                 unitary, approximate units P_m.  The ideal distinction
//                 collapses under truncation (a recorded artifact) and every
//                 experiment declares an explicit power horizon.
//   commutative:  A = finitely supported functions on Z, A1 = eventually
//                 constant bounded functions, Phi(f) = f o alpha with a
//                 translation alpha.  Exact arithmetic, no horizon.
//

#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "shiftlab/criteria.hpp"

namespace shiftlab::cstar {

// Eventually constant function on Z: explicit values on [lo, hi], constant
// tails outside.  Closed under the pointwise algebra and under translation,
// with exact sup norm; this realizes "bounded functions on the window plus
// horizon" without truncation error.
class SeqFunction {
 public:
  SeqFunction(long lo, std::vector<Complex> values, Complex left_tail, Complex right_tail);

  static SeqFunction constant(Complex c);
  static SeqFunction indicator(long lo, long hi);
  // value neg_value on n < 0 and nonneg_value on n >= 0.
  static SeqFunction sign_step(Complex neg_value, Complex nonneg_value);

  Complex at(long n) const;
  long lo() const noexcept { return lo_; }
  long hi() const noexcept { return lo_ + static_cast<long>(values_.size()) - 1; }
  Complex left_tail() const noexcept { return left_tail_; }
  Complex right_tail() const noexcept { return right_tail_; }

  double sup_norm() const;
  bool finitely_supported() const;  // both tails zero
  // Tight support bounds for finitely supported functions; nullopt if zero.
  std::optional<std::pair<long, long>> support() const;

  // f(n - s) as a function of n, i.e. the window moves by +s.  Exact.
  SeqFunction translated(long s) const;

  friend SeqFunction multiply(const SeqFunction& f, const SeqFunction& g);
  friend SeqFunction add(const SeqFunction& f, const SeqFunction& g);
  friend SeqFunction scale(const SeqFunction& f, Complex c);
  friend SeqFunction conjugate(const SeqFunction& f);
  // Pointwise reciprocal; throws SingularityError if inf |f| <= threshold.
  friend SeqFunction reciprocal(const SeqFunction& f, double threshold);

 private:
  long lo_;
  std::vector<Complex> values_;
  Complex left_tail_;
  Complex right_tail_;
};

// Element of whichever algebra a context works over.
class AlgebraElement {
 public:
  explicit AlgebraElement(CompactOp op) : v_(std::move(op)) {}
  explicit AlgebraElement(SeqFunction f) : v_(std::move(f)) {}

  bool is_matrix() const noexcept { return std::holds_alternative<CompactOp>(v_); }
  bool is_sequence() const noexcept { return std::holds_alternative<SeqFunction>(v_); }
  const CompactOp& matrix() const;
  const SeqFunction& sequence() const;

 private:
  std::variant<CompactOp, SeqFunction> v_;
};

// The algebraic operations of A1 plus the ideal membership predicate and the
// approximate-unit family of A.
struct AlgebraContext {
  std::string name;
  std::function<AlgebraElement(const AlgebraElement&, const AlgebraElement&)> multiply;
  std::function<AlgebraElement(const AlgebraElement&, const AlgebraElement&)> add;
  std::function<AlgebraElement(const AlgebraElement&)> adjoint;
  std::function<double(const AlgebraElement&)> norm;
  std::function<AlgebraElement(const AlgebraElement&)> invert;  // inversion in A1
  std::function<AlgebraElement()> unit;                         // unit of A1
  std::function<bool(const AlgebraElement&)> in_ideal;          // membership in A
  std::function<AlgebraElement(long)> approx_unit;              // alpha -> p_alpha

  AlgebraElement sub(const AlgebraElement& a, const AlgebraElement& b) const;
  double norm_of_difference(const AlgebraElement& a, const AlgebraElement& b) const;
};

struct Automorphism {
  std::function<AlgebraElement(const AlgebraElement&)> forward;  // Phi
  std::function<AlgebraElement(const AlgebraElement&)> inverse;  // Phi^{-1}
  // Smallest n with Phi^n(p_alpha) p_alpha = 0, searched within the declared
  // horizon; nullopt when not attained (or no finite search applies).
  std::function<std::optional<long>(long alpha)> aperiodicity_horizon;
  std::optional<long> experiment_horizon;  // set for compact contexts
};

// T_{Phi,b}(a) = b Phi(a) with b invertible in A1.
struct PhiShift {
  AlgebraContext ctx;
  Automorphism phi;
  AlgebraElement b;
  AlgebraElement b_inv;
};

// Validates invertibility: ||b b^{-1} - 1|| <= 1e-9.
PhiShift make_phi_shift(AlgebraContext ctx, Automorphism phi, AlgebraElement b);

AlgebraElement apply_T_phi(const PhiShift& ps, const AlgebraElement& a);
AlgebraElement apply_S_phi(const PhiShift& ps, const AlgebraElement& a);

// Closed forms:
//   T^n(a) = b Phi(b) ... Phi^{n-1}(b) Phi^n(a)
//   S^n(a) = Phi^{-1}(b^{-1}) Phi^{-2}(b^{-1}) ... Phi^{-n}(b^{-1}) Phi^{-n}(a)
AlgebraElement apply_T_phi_power(const PhiShift& ps, long n, const AlgebraElement& a);
AlgebraElement apply_S_phi_power(const PhiShift& ps, long n, const AlgebraElement& a);

// Criterion (ii): ||q_k - p_alpha^2||, ||d_k - p_alpha^2||, the forward
// multiplier decay ||Phi^{-n_k}(b) ... Phi^{-1}(b) q_k|| and the inverse one
// ||Phi^{n_k-1}(b^{-1}) ... Phi(b^{-1}) b^{-1} d_k||.  The aperiodicity
// horizon N_alpha is recorded when available but not required.
CriterionReport check_hc_criterion_phi(
    const PhiShift& ps, long alpha, const PowerSchedule& sched,
    const std::function<std::pair<AlgebraElement, AlgebraElement>(int k)>& provider, double tol);

// Left-multiplier corollary: the same products applied pointwise to the
// elements of omega1 (forward) and omega2 (inverse).
CriterionReport check_pointwise_multiplier(const PhiShift& ps,
                                           const std::vector<AlgebraElement>& omega1,
                                           const std::vector<AlgebraElement>& omega2,
                                           const PowerSchedule& sched, double tol);

// Truncated C_0(Z) with the translation alpha(n) = n - alpha_step.
// window_points must be odd; approximate units are the indicator plateaus
// p_K = chi_[-K, K] for K <= (window_points - 1) / 2.
std::pair<AlgebraContext, Automorphism> commutative_context(long window_points, long alpha_step);

// Matrices over a window with Phi = conjugation by U*; approximate units P_m.
// The horizon bounds every power the experiment may take.
std::pair<AlgebraContext, Automorphism> compact_context(const BasisWindow& w, const UnitaryOp& u,
                                                        long horizon);

}  // namespace shiftlab::cstar
