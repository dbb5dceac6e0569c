#include "shiftlab/cstar_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "report_builder.hpp"

namespace shiftlab::cstar {

using shiftlab::detail::ReportBuilder;

namespace {

constexpr double kInvertibilityTol = 1e-9;

void require_finite(Complex c, const char* where) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw MalformedInputError(std::string(where) + ": non-finite value");
}

void check_horizon(const Automorphism& phi, long n, const char* where) {
  if (phi.experiment_horizon && n > *phi.experiment_horizon) {
    std::ostringstream oss;
    oss << where << ": power " << n << " exceeds the declared experiment horizon "
        << *phi.experiment_horizon;
    throw HorizonExceededError(oss.str());
  }
}

}  // namespace

SeqFunction::SeqFunction(long lo, std::vector<Complex> values, Complex left_tail,
                         Complex right_tail)
    : lo_(lo), values_(std::move(values)), left_tail_(left_tail), right_tail_(right_tail) {
  if (values_.empty()) throw InvalidArgumentError("SeqFunction: window must be non-empty");
  for (Complex c : values_) require_finite(c, "SeqFunction");
  require_finite(left_tail_, "SeqFunction");
  require_finite(right_tail_, "SeqFunction");
}

SeqFunction SeqFunction::constant(Complex c) { return SeqFunction(0, {c}, c, c); }

SeqFunction SeqFunction::indicator(long lo, long hi) {
  if (hi < lo) throw InvalidArgumentError("SeqFunction::indicator: empty interval");
  return SeqFunction(lo, std::vector<Complex>(hi - lo + 1, Complex(1.0, 0.0)), Complex(0.0, 0.0),
                     Complex(0.0, 0.0));
}

SeqFunction SeqFunction::sign_step(Complex neg_value, Complex nonneg_value) {
  return SeqFunction(-1, {neg_value, nonneg_value}, neg_value, nonneg_value);
}

Complex SeqFunction::at(long n) const {
  if (n < lo_) return left_tail_;
  if (n > hi()) return right_tail_;
  return values_[n - lo_];
}

double SeqFunction::sup_norm() const {
  double m = std::max(std::abs(left_tail_), std::abs(right_tail_));
  for (Complex c : values_) m = std::max(m, std::abs(c));
  return m;
}

bool SeqFunction::finitely_supported() const {
  return left_tail_ == Complex(0.0, 0.0) && right_tail_ == Complex(0.0, 0.0);
}

std::optional<std::pair<long, long>> SeqFunction::support() const {
  if (!finitely_supported())
    throw InvalidArgumentError("SeqFunction::support: function has non-zero tails");
  long first = 0, last = -1;
  bool found = false;
  for (long n = lo_; n <= hi(); ++n) {
    if (at(n) != Complex(0.0, 0.0)) {
      if (!found) first = n;
      last = n;
      found = true;
    }
  }
  if (!found) return std::nullopt;
  return std::make_pair(first, last);
}

SeqFunction SeqFunction::translated(long s) const {
  return SeqFunction(lo_ + s, values_, left_tail_, right_tail_);
}

SeqFunction multiply(const SeqFunction& f, const SeqFunction& g) {
  const long lo = std::min(f.lo(), g.lo());
  const long hi = std::max(f.hi(), g.hi());
  std::vector<Complex> values(hi - lo + 1);
  for (long n = lo; n <= hi; ++n) values[n - lo] = f.at(n) * g.at(n);
  return SeqFunction(lo, std::move(values), f.left_tail() * g.left_tail(),
                     f.right_tail() * g.right_tail());
}

SeqFunction add(const SeqFunction& f, const SeqFunction& g) {
  const long lo = std::min(f.lo(), g.lo());
  const long hi = std::max(f.hi(), g.hi());
  std::vector<Complex> values(hi - lo + 1);
  for (long n = lo; n <= hi; ++n) values[n - lo] = f.at(n) + g.at(n);
  return SeqFunction(lo, std::move(values), f.left_tail() + g.left_tail(),
                     f.right_tail() + g.right_tail());
}

SeqFunction scale(const SeqFunction& f, Complex c) {
  std::vector<Complex> values;
  values.reserve(f.hi() - f.lo() + 1);
  for (long n = f.lo(); n <= f.hi(); ++n) values.push_back(c * f.at(n));
  return SeqFunction(f.lo(), std::move(values), c * f.left_tail(), c * f.right_tail());
}

SeqFunction conjugate(const SeqFunction& f) {
  std::vector<Complex> values;
  values.reserve(f.hi() - f.lo() + 1);
  for (long n = f.lo(); n <= f.hi(); ++n) values.push_back(std::conj(f.at(n)));
  return SeqFunction(f.lo(), std::move(values), std::conj(f.left_tail()),
                     std::conj(f.right_tail()));
}

SeqFunction reciprocal(const SeqFunction& f, double threshold) {
  double inf_abs = std::min(std::abs(f.left_tail()), std::abs(f.right_tail()));
  for (long n = f.lo(); n <= f.hi(); ++n) inf_abs = std::min(inf_abs, std::abs(f.at(n)));
  if (!(inf_abs > threshold)) {
    std::ostringstream oss;
    oss << "SeqFunction::reciprocal: inf |f| = " << inf_abs << " <= " << threshold;
    throw SingularityError(oss.str(), inf_abs);
  }
  std::vector<Complex> values;
  values.reserve(f.hi() - f.lo() + 1);
  for (long n = f.lo(); n <= f.hi(); ++n) values.push_back(1.0 / f.at(n));
  return SeqFunction(f.lo(), std::move(values), 1.0 / f.left_tail(), 1.0 / f.right_tail());
}

const CompactOp& AlgebraElement::matrix() const {
  if (!is_matrix())
    throw InvalidArgumentError("AlgebraElement: expected a compact-context element");
  return std::get<CompactOp>(v_);
}

const SeqFunction& AlgebraElement::sequence() const {
  if (!is_sequence())
    throw InvalidArgumentError("AlgebraElement: expected a commutative-context element");
  return std::get<SeqFunction>(v_);
}

AlgebraElement AlgebraContext::sub(const AlgebraElement& a, const AlgebraElement& b) const {
  if (a.is_matrix()) return AlgebraElement(shiftlab::sub(a.matrix(), b.matrix()));
  return AlgebraElement(cstar::add(a.sequence(), scale(b.sequence(), Complex(-1.0, 0.0))));
}

double AlgebraContext::norm_of_difference(const AlgebraElement& a, const AlgebraElement& b) const {
  return norm(sub(a, b));
}

PhiShift make_phi_shift(AlgebraContext ctx, Automorphism phi, AlgebraElement b) {
  AlgebraElement b_inv = ctx.invert(b);
  const AlgebraElement prod = ctx.multiply(b, b_inv);
  const double defect = ctx.norm_of_difference(prod, ctx.unit());
  if (defect > kInvertibilityTol) {
    std::ostringstream oss;
    oss << "make_phi_shift: ||b b^{-1} - 1|| = " << defect << " exceeds " << kInvertibilityTol;
    throw SingularityError(oss.str(), defect);
  }
  return PhiShift{std::move(ctx), std::move(phi), std::move(b), std::move(b_inv)};
}

AlgebraElement apply_T_phi(const PhiShift& ps, const AlgebraElement& a) {
  return ps.ctx.multiply(ps.b, ps.phi.forward(a));
}

AlgebraElement apply_S_phi(const PhiShift& ps, const AlgebraElement& a) {
  return ps.ctx.multiply(ps.phi.inverse(ps.b_inv), ps.phi.inverse(a));
}

AlgebraElement apply_T_phi_power(const PhiShift& ps, long n, const AlgebraElement& a) {
  if (n < 1) throw InvalidArgumentError("apply_T_phi_power: n must be >= 1");
  check_horizon(ps.phi, n, "apply_T_phi_power");
  AlgebraElement acc = ps.b;
  AlgebraElement bi = ps.b;
  for (long i = 1; i < n; ++i) {
    bi = ps.phi.forward(bi);
    acc = ps.ctx.multiply(acc, bi);
  }
  AlgebraElement an = a;
  for (long i = 0; i < n; ++i) an = ps.phi.forward(an);
  return ps.ctx.multiply(acc, an);
}

AlgebraElement apply_S_phi_power(const PhiShift& ps, long n, const AlgebraElement& a) {
  if (n < 1) throw InvalidArgumentError("apply_S_phi_power: n must be >= 1");
  check_horizon(ps.phi, n, "apply_S_phi_power");
  AlgebraElement ci = ps.phi.inverse(ps.b_inv);  // Phi^{-1}(b^{-1})
  AlgebraElement acc = ci;
  for (long i = 2; i <= n; ++i) {
    ci = ps.phi.inverse(ci);
    acc = ps.ctx.multiply(acc, ci);
  }
  AlgebraElement an = a;
  for (long i = 0; i < n; ++i) an = ps.phi.inverse(an);
  return ps.ctx.multiply(acc, an);
}

CriterionReport check_hc_criterion_phi(
    const PhiShift& ps, long alpha, const PowerSchedule& sched,
    const std::function<std::pair<AlgebraElement, AlgebraElement>(int k)>& provider, double tol) {
  if (!(tol > 0.0)) throw InvalidArgumentError("check_hc_criterion_phi: tol must be > 0");
  if (!provider) throw InvalidArgumentError("check_hc_criterion_phi: provider must be callable");
  check_horizon(ps.phi, sched.at(sched.max_k()), "check_hc_criterion_phi");

  const AlgebraElement p = ps.ctx.approx_unit(alpha);
  const AlgebraElement p2 = ps.ctx.multiply(p, p);

  ReportBuilder builder("phi-hc", "(ii) of the equivalence; this run exercises (ii) => (i)",
                              tol, sched.max_k());
  if (auto n_alpha = ps.phi.aperiodicity_horizon(alpha)) {
    builder.note("aperiodicity horizon N_alpha = " + std::to_string(*n_alpha) + " at alpha = " +
                 std::to_string(alpha));
  } else {
    builder.note("aperiodicity horizon not attained within the experiment horizon at alpha = " +
                 std::to_string(alpha) + " (recorded only; not required for (ii) => (i))");
  }

  // P(n) = Phi^{-n}(b) ... Phi^{-1}(b), Q(n) = Phi^{n-1}(b^{-1}) ... b^{-1},
  // both extended by left-multiplying the newest factor.
  AlgebraElement fwd_factor = ps.b;     // becomes Phi^{-n}(b)
  AlgebraElement inv_factor = ps.b_inv;  // becomes Phi^{n-1}(b^{-1})
  std::optional<AlgebraElement> fwd_acc;
  std::optional<AlgebraElement> inv_acc;
  long built = 0;
  for (int k = 1; k <= sched.max_k(); ++k) {
    const long n = sched.at(k);
    while (built < n) {
      ++built;
      fwd_factor = ps.phi.inverse(fwd_factor);
      if (built == 1) {
        fwd_acc = fwd_factor;
        inv_acc = inv_factor;
      } else {
        inv_factor = ps.phi.forward(inv_factor);
        fwd_acc = ps.ctx.multiply(fwd_factor, *fwd_acc);
        inv_acc = ps.ctx.multiply(inv_factor, *inv_acc);
      }
    }
    auto [q_k, d_k] = provider(k);
    if (!ps.ctx.in_ideal(q_k) || !ps.ctx.in_ideal(d_k))
      throw InvalidArgumentError("check_hc_criterion_phi: provider outputs must lie in the ideal");
    builder.record(alpha, k, n, "approx_err_q", ps.ctx.norm_of_difference(q_k, p2), true);
    builder.record(alpha, k, n, "approx_err_d", ps.ctx.norm_of_difference(d_k, p2), true);
    builder.record(alpha, k, n, "forward_multiplier_decay",
                   ps.ctx.norm(ps.ctx.multiply(*fwd_acc, q_k)), true);
    builder.record(alpha, k, n, "inverse_multiplier_decay",
                   ps.ctx.norm(ps.ctx.multiply(*inv_acc, d_k)), true);
  }
  return builder.finish(/*require_common_k=*/true);
}

CriterionReport check_pointwise_multiplier(const PhiShift& ps,
                                           const std::vector<AlgebraElement>& omega1,
                                           const std::vector<AlgebraElement>& omega2,
                                           const PowerSchedule& sched, double tol) {
  if (!(tol > 0.0)) throw InvalidArgumentError("check_pointwise_multiplier: tol must be > 0");
  if (omega1.empty() || omega2.empty())
    throw InvalidArgumentError("check_pointwise_multiplier: omega1 and omega2 must be non-empty");
  check_horizon(ps.phi, sched.at(sched.max_k()), "check_pointwise_multiplier");
  for (const auto& x : omega1) {
    if (!ps.ctx.in_ideal(x))
      throw InvalidArgumentError("check_pointwise_multiplier: omega1 elements must lie in A");
  }
  for (const auto& y : omega2) {
    if (!ps.ctx.in_ideal(y))
      throw InvalidArgumentError("check_pointwise_multiplier: omega2 elements must lie in A");
  }

  ReportBuilder builder("phi-pointwise-multiplier", "sufficient condition", tol,
                              sched.max_k());
  AlgebraElement fwd_factor = ps.b;
  AlgebraElement inv_factor = ps.b_inv;
  std::optional<AlgebraElement> fwd_acc;
  std::optional<AlgebraElement> inv_acc;
  long built = 0;
  for (int k = 1; k <= sched.max_k(); ++k) {
    const long n = sched.at(k);
    while (built < n) {
      ++built;
      fwd_factor = ps.phi.inverse(fwd_factor);
      if (built == 1) {
        fwd_acc = fwd_factor;
        inv_acc = inv_factor;
      } else {
        inv_factor = ps.phi.forward(inv_factor);
        fwd_acc = ps.ctx.multiply(fwd_factor, *fwd_acc);
        inv_acc = ps.ctx.multiply(inv_factor, *inv_acc);
      }
    }
    for (size_t i = 0; i < omega1.size(); ++i) {
      builder.record(0, k, n, "forward_multiplier_omega1_" + std::to_string(i),
                     ps.ctx.norm(ps.ctx.multiply(*fwd_acc, omega1[i])), true);
    }
    for (size_t i = 0; i < omega2.size(); ++i) {
      builder.record(0, k, n, "inverse_multiplier_omega2_" + std::to_string(i),
                     ps.ctx.norm(ps.ctx.multiply(*inv_acc, omega2[i])), true);
    }
  }
  return builder.finish(/*require_common_k=*/false);
}

std::pair<AlgebraContext, Automorphism> commutative_context(long window_points, long alpha_step) {
  if (window_points < 1 || window_points % 2 == 0)
    throw InvalidArgumentError("commutative_context: window_points must be odd and positive");
  if (alpha_step == 0) throw InvalidArgumentError("commutative_context: alpha_step must be != 0");
  const long radius = (window_points - 1) / 2;

  AlgebraContext ctx;
  ctx.name = "commutative";
  ctx.multiply = [](const AlgebraElement& a, const AlgebraElement& b) {
    return AlgebraElement(multiply(a.sequence(), b.sequence()));
  };
  ctx.add = [](const AlgebraElement& a, const AlgebraElement& b) {
    return AlgebraElement(add(a.sequence(), b.sequence()));
  };
  ctx.adjoint = [](const AlgebraElement& a) {
    return AlgebraElement(conjugate(a.sequence()));
  };
  ctx.norm = [](const AlgebraElement& a) { return a.sequence().sup_norm(); };
  ctx.invert = [](const AlgebraElement& a) {
    return AlgebraElement(reciprocal(a.sequence(), kInversionThreshold));
  };
  ctx.unit = []() { return AlgebraElement(SeqFunction::constant(Complex(1.0, 0.0))); };
  ctx.in_ideal = [](const AlgebraElement& a) { return a.sequence().finitely_supported(); };
  ctx.approx_unit = [radius](long K) {
    if (K < 0 || K > radius) {
      std::ostringstream oss;
      oss << "commutative_context: plateau radius K = " << K << " outside [0, " << radius << "]";
      throw WindowOverflowError(oss.str());
    }
    return AlgebraElement(SeqFunction::indicator(-K, K));
  };

  Automorphism phi;
  const long s = alpha_step;
  // Phi(f) = f o alpha, alpha(n) = n - s, i.e. the window moves by +s.
  phi.forward = [s](const AlgebraElement& a) {
    return AlgebraElement(a.sequence().translated(s));
  };
  phi.inverse = [s](const AlgebraElement& a) {
    return AlgebraElement(a.sequence().translated(-s));
  };
  phi.aperiodicity_horizon = [s, radius](long K) -> std::optional<long> {
    if (K < 0 || K > radius) return std::nullopt;
    // supp p_K = [-K, K]; Phi^n moves it by n*s, disjoint once |n*s| > 2K.
    return 2 * K / std::labs(s) + 1;
  };
  phi.experiment_horizon = std::nullopt;
  return {std::move(ctx), std::move(phi)};
}

std::pair<AlgebraContext, Automorphism> compact_context(const BasisWindow& w, const UnitaryOp& u,
                                                        long horizon) {
  require_same_window(w, u.window(), "compact_context");
  if (horizon < 1) throw InvalidArgumentError("compact_context: horizon must be >= 1");

  AlgebraContext ctx;
  ctx.name = "compact";
  ctx.multiply = [](const AlgebraElement& a, const AlgebraElement& b) {
    return AlgebraElement(matmul(a.matrix(), b.matrix()));
  };
  ctx.add = [](const AlgebraElement& a, const AlgebraElement& b) {
    return AlgebraElement(shiftlab::add(a.matrix(), b.matrix()));
  };
  ctx.adjoint = [](const AlgebraElement& a) {
    return AlgebraElement(shiftlab::adjoint(a.matrix()));
  };
  ctx.norm = [](const AlgebraElement& a) { return op_norm(a.matrix()); };
  ctx.invert = [](const AlgebraElement& a) { return AlgebraElement(inverse(a.matrix())); };
  ctx.unit = [w]() { return AlgebraElement(CompactOp::identity(w)); };
  // Truncation collapses the ideal distinction: A = A1 at desk scale.
  ctx.in_ideal = [](const AlgebraElement& a) { return a.is_matrix(); };
  ctx.approx_unit = [w](long m) { return AlgebraElement(projection_P(w, m)); };

  Automorphism phi;
  const CompactOp u_mat = u.matrix();
  const CompactOp u_adj = u.adjoint_matrix();
  phi.forward = [u_mat, u_adj](const AlgebraElement& a) {
    return AlgebraElement(matmul(matmul(u_adj, a.matrix()), u_mat));
  };
  phi.inverse = [u_mat, u_adj](const AlgebraElement& a) {
    return AlgebraElement(matmul(matmul(u_mat, a.matrix()), u_adj));
  };
  phi.aperiodicity_horizon = [w, u, horizon](long m) -> std::optional<long> {
    const CompactOp pm = projection_P(w, m);
    CompactOp un = CompactOp::identity(w);
    const CompactOp step = u.matrix();
    for (long n = 1; n <= horizon; ++n) {
      un = matmul(step, un);
      if (op_norm(matmul(matmul(pm, un), pm)) < 1e-12) return n;
    }
    return std::nullopt;
  };
  phi.experiment_horizon = horizon;
  return {std::move(ctx), std::move(phi)};
}

}  // namespace shiftlab::cstar
