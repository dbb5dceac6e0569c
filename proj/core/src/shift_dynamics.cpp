#include "shiftlab/shift_dynamics.hpp"

#include <sstream>
#include <utility>

namespace shiftlab {

namespace {

// Slack applied to declared weight bounds; covers roundoff in op_norm only.
constexpr double kBoundSlack = 1e-9;

void check_bound(double value, double declared, long j, const char* what) {
  if (value > declared + kBoundSlack) {
    std::ostringstream oss;
    oss << "WeightFamily: " << what << " at j = " << j << " is " << value
        << ", violating declared bound " << declared;
    throw WeightBoundError(oss.str());
  }
}

}  // namespace

WeightFamily::WeightFamily(BasisWindow w, Provider provider, double M, double M_inv)
    : WeightFamily(w, std::move(provider), Provider(), M, M_inv) {}

WeightFamily::WeightFamily(BasisWindow w, Provider provider, Provider inverse_provider, double M,
                           double M_inv)
    : window_(w),
      provider_(std::move(provider)),
      inverse_provider_(std::move(inverse_provider)),
      M_(M),
      M_inv_(M_inv),
      cache_(std::make_shared<Cache>()) {
  if (!provider_) throw InvalidArgumentError("WeightFamily: provider must be callable");
  if (!(M_ > 0.0) || !(M_inv_ > 0.0))
    throw InvalidArgumentError("WeightFamily: bounds M and M_inv must be positive");
}

CompactOp WeightFamily::weight(long j) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->fwd.find(j);
    if (it != cache_->fwd.end()) return it->second;
  }
  CompactOp w = provider_(j);
  require_same_window(window_, w.window(), "WeightFamily::weight");
  check_bound(op_norm(w), M_, j, "||W_j||");
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->fwd.try_emplace(j, std::move(w)).first->second;
}

CompactOp WeightFamily::weight_inverse(long j) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->inv.find(j);
    if (it != cache_->inv.end()) return it->second;
  }
  CompactOp inv = inverse_provider_ ? inverse_provider_(j) : inverse(weight(j));
  require_same_window(window_, inv.window(), "WeightFamily::weight_inverse");
  check_bound(op_norm(inv), M_inv_, j, "||W_j^{-1}||");
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->inv.try_emplace(j, std::move(inv)).first->second;
}

ShiftOperator::ShiftOperator(WeightFamily w, UnitaryOp u)
    : weights(std::move(w)), unitary(std::move(u)) {
  require_same_window(weights.window(), unitary.window(), "ShiftOperator");
}

ModuleVector apply_T(const ShiftOperator& op, const ModuleVector& x) {
  require_same_window(op.weights.window(), x.window(), "apply_T");
  const CompactOp u = op.unitary.matrix();
  std::map<long, CompactOp> out;
  for (const auto& [xi, c] : x.coeffs()) {
    const long target = xi + 1;
    out.emplace(target, matmul(matmul(op.weights.weight(target), c), u));
  }
  return ModuleVector(x.window(), std::move(out));
}

ModuleVector apply_S(const ShiftOperator& op, const ModuleVector& y) {
  require_same_window(op.weights.window(), y.window(), "apply_S");
  const CompactOp ustar = op.unitary.adjoint_matrix();
  std::map<long, CompactOp> out;
  for (const auto& [xi, c] : y.coeffs()) {
    const long target = xi - 1;
    out.emplace(target, matmul(matmul(op.weights.weight_inverse(xi), c), ustar));
  }
  return ModuleVector(y.window(), std::move(out));
}

ModuleVector apply_T_power(const ShiftOperator& op, long n, const ModuleVector& x) {
  if (n < 1) throw InvalidArgumentError("apply_T_power: n must be >= 1");
  require_same_window(op.weights.window(), x.window(), "apply_T_power");
  const CompactOp un = unitary_power(op.unitary, n);
  std::map<long, CompactOp> out;
  for (const auto& [xi, c] : x.coeffs()) {
    const long target = xi + n;
    // W_target W_{target-1} ... W_{xi+1} = forward_product(xi, n)
    const CompactOp prod = forward_product(op.weights, xi, n);
    out.emplace(target, matmul(matmul(prod, c), un));
  }
  return ModuleVector(x.window(), std::move(out));
}

ModuleVector apply_S_power(const ShiftOperator& op, long n, const ModuleVector& y) {
  if (n < 1) throw InvalidArgumentError("apply_S_power: n must be >= 1");
  require_same_window(op.weights.window(), y.window(), "apply_S_power");
  const CompactOp ustar_n = unitary_power(op.unitary, -n);
  std::map<long, CompactOp> out;
  for (const auto& [xi, c] : y.coeffs()) {
    const long target = xi - n;
    // W_{target+1}^{-1} ... W_{xi}^{-1} = inverse_product(xi, n)
    const CompactOp prod = inverse_product(op.weights, xi, n);
    out.emplace(target, matmul(matmul(prod, c), ustar_n));
  }
  return ModuleVector(y.window(), std::move(out));
}

ModuleVector apply_C_avg(const ShiftOperator& op, long n, const ModuleVector& x) {
  if (n < 1) throw InvalidArgumentError("apply_C_avg: n must be >= 1");
  return 0.5 * (apply_T_power(op, n, x) + apply_S_power(op, n, x));
}

ForwardProductSweep::ForwardProductSweep(WeightFamily weights, long j)
    : weights_(std::move(weights)), j_(j), acc_(CompactOp::identity(weights_.window())) {}

const CompactOp& ForwardProductSweep::advance_to(long n) {
  if (n < n_) throw InvalidArgumentError("ForwardProductSweep: cannot shrink the product");
  while (n_ < n) {
    ++n_;
    acc_ = matmul(weights_.weight(j_ + n_), acc_);
  }
  return acc_;
}

InverseProductSweep::InverseProductSweep(WeightFamily weights, long j)
    : weights_(std::move(weights)), j_(j), acc_(CompactOp::identity(weights_.window())) {}

const CompactOp& InverseProductSweep::advance_to(long n) {
  if (n < n_) throw InvalidArgumentError("InverseProductSweep: cannot shrink the product");
  while (n_ < n) {
    ++n_;
    acc_ = matmul(weights_.weight_inverse(j_ - n_ + 1), acc_);
  }
  return acc_;
}

CompactOp forward_product(const WeightFamily& w, long j, long n) {
  if (n < 1) throw InvalidArgumentError("forward_product: n must be >= 1");
  ForwardProductSweep sweep(w, j);
  return sweep.advance_to(n);
}

CompactOp inverse_product(const WeightFamily& w, long j, long n) {
  if (n < 1) throw InvalidArgumentError("inverse_product: n must be >= 1");
  InverseProductSweep sweep(w, j);
  return sweep.advance_to(n);
}

}  // namespace shiftlab
