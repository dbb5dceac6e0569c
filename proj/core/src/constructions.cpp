#include "shiftlab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shiftlab {

namespace {

constexpr double kParamSlack = 1e-12;

// Validates one translation weight function on the whole grid against the
// boundedness and sign inequalities.
void validate_translation_weight(const GridModel& grid, const TranslationWeightParams& p,
                                 long j) {
  const BasisWindow& w = grid.window();
  for (long i = -w.m_max(); i <= w.m_max(); ++i) {
    const double t = grid.point(i);
    const double v = p.weight(j, t);
    if (!std::isfinite(v) || v < 1.0 / p.M - kParamSlack || v > p.M + kParamSlack) {
      std::ostringstream oss;
      oss << "translation_weights: w_" << j << "(" << t << ") = " << v << " outside [1/M, M]";
      throw InvalidArgumentError(oss.str());
    }
    if (j >= 0 && t >= 0.0 && v > 1.0 - p.eps + kParamSlack) {
      std::ostringstream oss;
      oss << "translation_weights: w_" << j << "(" << t << ") = " << v
          << " violates w_j <= 1 - eps on t >= 0 for j >= 0";
      throw InvalidArgumentError(oss.str());
    }
    if (j < 0 && t < 0.0 && v < 1.0 + p.eps - kParamSlack) {
      std::ostringstream oss;
      oss << "translation_weights: w_" << j << "(" << t << ") = " << v
          << " violates w_j >= 1 + eps on t < 0 for j < 0";
      throw InvalidArgumentError(oss.str());
    }
  }
}

void validate_params(const TranslationWeightParams& p) {
  if (!(p.eps > 0.0) || !(p.eps < 1.0))
    throw InvalidArgumentError("translation weights: eps must lie in (0, 1)");
  if (!(p.M >= 1.0)) throw InvalidArgumentError("translation weights: M must be >= 1");
  if (!(p.C > 0.0)) throw InvalidArgumentError("translation weights: C must be > 0");
  if (!p.r || !p.weight)
    throw InvalidArgumentError("translation weights: r and weight must be callable");
}

long translation_steps(const GridModel& grid, const TranslationWeightParams& p, long j) {
  const double rj = p.r(j);
  if (!(rj >= p.C - kParamSlack)) {
    std::ostringstream oss;
    oss << "translation_weights: r_" << j << " = " << rj << " below the declared bound C = "
        << p.C;
    throw InvalidArgumentError(oss.str());
  }
  return grid.steps_of(rj);
}

CompactOp translation_matrix(const GridModel& grid, const TranslationWeightParams& p, long j) {
  validate_translation_weight(grid, p, j);
  const BasisWindow& w = grid.window();
  const long s = translation_steps(grid, p, j);
  Matrix m = Matrix::Zero(w.dim(), w.dim());
  // (W_j f)(t_i) = w_j(t_i) f(t_i - r_j); zero padding off the grid.
  for (long i = -w.m_max(); i <= w.m_max(); ++i) {
    const long src = i - s;
    if (!w.contains(src)) continue;
    m(w.to_col(i), w.to_col(src)) = Complex(p.weight(j, grid.point(i)), 0.0);
  }
  return CompactOp(w, std::move(m));
}

CompactOp translation_pseudo_inverse(const GridModel& grid, const TranslationWeightParams& p,
                                     long j) {
  validate_translation_weight(grid, p, j);
  const BasisWindow& w = grid.window();
  const long s = translation_steps(grid, p, j);
  Matrix m = Matrix::Zero(w.dim(), w.dim());
  // (W_j^- g)(t_i) = g(t_i + r_j) / w_j(t_i + r_j); exact inverse away from
  // the boundary band of width s.
  for (long i = -w.m_max(); i <= w.m_max(); ++i) {
    const long src = i + s;
    if (!w.contains(src)) continue;
    m(w.to_col(i), w.to_col(src)) = Complex(1.0 / p.weight(j, grid.point(src)), 0.0);
  }
  return CompactOp(w, std::move(m));
}

// Dense-class membership check used by the witness preconditions.
void require_dense_class(const ModuleVector& v, IndexRange J, const CompactOp& pm,
                         const char* name) {
  for (const auto& [j, c] : v.coeffs()) {
    if (!J.contains(j)) {
      std::ostringstream oss;
      oss << name << " must be supported in [-" << J.J << ", " << J.J << "], found index " << j;
      throw InvalidArgumentError(oss.str());
    }
    if (op_norm(sub(matmul(pm, c), c)) > 1e-12) {
      std::ostringstream oss;
      oss << name << " must satisfy P_m x_j = x_j on [J]; violated at j = " << j;
      throw InvalidArgumentError(oss.str());
    }
  }
}

ModuleVector apply_provider(const ModuleVector& v, const ApproximantProvider& prov, int k,
                            bool use_G, const BasisWindow& w) {
  std::map<long, CompactOp> out;
  for (const auto& [j, c] : v.coeffs()) {
    auto pair = prov.get(j, k, w);
    out.emplace(j, matmul(use_G ? pair.G : pair.D, c));
  }
  return ModuleVector(w, std::move(out));
}

}  // namespace

GridModel::GridModel(BasisWindow w, double h) : window_(w), h_(h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw InvalidArgumentError("GridModel: step h must be positive and finite");
}

long GridModel::steps_of(double r) const {
  const double raw = r / h_;
  const double rounded = std::round(raw);
  if (!(r > 0.0) || std::abs(raw - rounded) > 1e-9 * std::max(1.0, std::abs(raw))) {
    std::ostringstream oss;
    oss << "GridModel: translation " << r << " is not a positive integer multiple of h = " << h_;
    throw InvalidArgumentError(oss.str());
  }
  return static_cast<long>(rounded);
}

TranslationWeightParams TranslationWeightParams::step(double eps, double M, double r_value,
                                                      double off_value) {
  TranslationWeightParams p;
  p.eps = eps;
  p.M = M;
  p.C = r_value;
  p.r = [r_value](long) { return r_value; };
  p.weight = [eps, off_value](long j, double t) {
    if (j >= 0) return t >= 0.0 ? 1.0 - eps : off_value;
    return t < 0.0 ? 1.0 + eps : off_value;
  };
  return p;
}

TranslationWeightParams TranslationWeightParams::constant_by_sign(double eps, double M,
                                                                  double r_value) {
  return step(eps, M, r_value, 1.0);
}

TranslationWeightParams TranslationWeightParams::plateau(double eps, double M, double r_value,
                                                         double ramp_width) {
  if (!(ramp_width > 0.0)) throw InvalidArgumentError("plateau: ramp width must be positive");
  TranslationWeightParams p;
  p.eps = eps;
  p.M = M;
  p.C = r_value;
  p.r = [r_value](long) { return r_value; };
  p.weight = [eps, ramp_width](long j, double t) {
    if (j >= 0) {
      if (t >= 0.0) return 1.0 - eps;
      if (t <= -ramp_width) return 1.0;
      return 1.0 - eps * (1.0 + t / ramp_width);
    }
    if (t < 0.0) return 1.0 + eps;
    if (t >= ramp_width) return 1.0;
    return 1.0 + eps * (1.0 - t / ramp_width);
  };
  return p;
}

WeightFamily salas_weights(const BasisWindow& w, double lambda) {
  if (!(lambda > 1.0))
    throw InvalidArgumentError("salas_weights: lambda must be > 1 (lambda = 1 is the identity "
                               "family and carries no decay)");
  auto fwd = [w, lambda](long j) {
    return CompactOp::scalar(w, Complex(j < 0 ? lambda : 1.0 / lambda, 0.0));
  };
  auto inv = [w, lambda](long j) {
    return CompactOp::scalar(w, Complex(j < 0 ? 1.0 / lambda : lambda, 0.0));
  };
  return WeightFamily(w, fwd, inv, lambda, lambda);
}

WeightFamily identity_weights(const BasisWindow& w) {
  return WeightFamily(
      w, [w](long) { return CompactOp::identity(w); },
      [w](long) { return CompactOp::identity(w); }, 1.0, 1.0);
}

WeightFamily translation_weights(const GridModel& grid, const TranslationWeightParams& params) {
  validate_params(params);
  auto fwd = [grid, params](long j) { return translation_matrix(grid, params, j); };
  auto inv = [grid, params](long j) { return translation_pseudo_inverse(grid, params, j); };
  return WeightFamily(grid.window(), fwd, inv, params.M, params.M);
}

WeightFamily mixed_weights(const GridModel& grid, const TranslationWeightParams& params,
                           long stride, std::function<double(long, double)> mult_weight) {
  validate_params(params);
  if (stride < 1) throw InvalidArgumentError("mixed_weights: stride must be >= 1");
  if (!mult_weight) throw InvalidArgumentError("mixed_weights: mult_weight must be callable");
  const BasisWindow w = grid.window();
  const double M = params.M;
  auto is_translation_index = [stride](long j) { return j != 0 && std::labs(j) % stride == 0; };
  auto mult_diag = [grid, w, M, mult_weight](long j, bool invert) {
    Vector diag(w.dim());
    for (long i = -w.m_max(); i <= w.m_max(); ++i) {
      const double v = mult_weight(j, grid.point(i));
      const double lo = j >= 0 ? 1.0 / M : 1.0;
      const double hi = j >= 0 ? 1.0 : M;
      if (!std::isfinite(v) || std::abs(v) < lo - kParamSlack ||
          std::abs(v) > hi + kParamSlack) {
        std::ostringstream oss;
        oss << "mixed_weights: multiplication weight w_" << j << "(" << grid.point(i) << ") = "
            << v << " outside [" << lo << ", " << hi << "]";
        throw InvalidArgumentError(oss.str());
      }
      diag(w.to_col(i)) = Complex(invert ? 1.0 / v : v, 0.0);
    }
    return CompactOp::diagonal(w, diag);
  };
  auto fwd = [grid, params, is_translation_index, mult_diag](long j) {
    return is_translation_index(j) ? translation_matrix(grid, params, j) : mult_diag(j, false);
  };
  auto inv = [grid, params, is_translation_index, mult_diag](long j) {
    return is_translation_index(j) ? translation_pseudo_inverse(grid, params, j)
                                   : mult_diag(j, true);
  };
  return WeightFamily(w, fwd, inv, params.M, params.M);
}

long safe_horizon(const BasisWindow& w, long support_m, long max_r_steps) {
  if (support_m < 0 || support_m > w.m_max())
    throw InvalidArgumentError("safe_horizon: support_m must lie within the window");
  if (max_r_steps < 1) throw InvalidArgumentError("safe_horizon: max_r_steps must be >= 1");
  return (w.m_max() - support_m) / max_r_steps;
}

std::pair<CompactOp, CompactOp> example_DG(const BasisWindow& w, long m, long k,
                                           const GridModel& grid) {
  if (k < 1) throw InvalidArgumentError("example_DG: k must be >= 1");
  require_same_window(w, grid.window(), "example_DG");
  const CompactOp pm = projection_P(w, m);
  Vector indicator(w.dim());
  for (long i = -w.m_max(); i <= w.m_max(); ++i) {
    indicator(w.to_col(i)) =
        std::abs(grid.point(i)) <= static_cast<double>(k) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
  }
  const CompactOp d = matmul(CompactOp::diagonal(w, indicator), pm);
  return {d, d};
}

ApproximantProvider example_provider(const GridModel& grid, long m) {
  const BasisWindow w = grid.window();
  return ApproximantProvider(
      [w, m, grid](long, int k) {
        auto [D, G] = example_DG(w, m, k, grid);
        return ApproximantProvider::Pair{std::move(D), std::move(G)};
      },
      1.0);
}

std::pair<ModuleVector, WitnessDiagnostics> build_transitivity_witness(
    const ShiftOperator& op, const ModuleVector& x, const ModuleVector& y,
    const ApproximantProvider& prov, int k, long t_k, IndexRange J, long m) {
  const BasisWindow& w = op.weights.window();
  require_same_window(w, x.window(), "build_transitivity_witness");
  require_same_window(w, y.window(), "build_transitivity_witness");
  if (t_k <= 2 * J.J) {
    std::ostringstream oss;
    oss << "build_transitivity_witness: t_k = " << t_k << " must exceed 2J = " << 2 * J.J;
    throw InvalidArgumentError(oss.str());
  }
  const CompactOp pm = projection_P(w, m);
  require_dense_class(x, J, pm, "x");
  require_dense_class(y, J, pm, "y");

  const ModuleVector u = apply_provider(x, prov, k, /*use_G=*/false, w);
  const ModuleVector v = apply_provider(y, prov, k, /*use_G=*/true, w);
  const ModuleVector eta = v.empty() ? u : add(u, apply_S_power(op, t_k, v));

  WitnessDiagnostics diag;
  diag.err_to_x = distance(eta, x);
  diag.err_image_to_y =
      eta.empty() ? norm2(y) : distance(apply_T_power(op, t_k, eta), y);
  return {eta, diag};
}

std::pair<ModuleVector, WitnessDiagnostics> build_avg_witness(
    const ShiftOperator& op, const ModuleVector& x, const ModuleVector& y,
    const ApproximantProvider& prov, int k, long n_k, IndexRange J, long m) {
  const BasisWindow& w = op.weights.window();
  require_same_window(w, x.window(), "build_avg_witness");
  require_same_window(w, y.window(), "build_avg_witness");
  if (n_k <= 2 * J.J) {
    std::ostringstream oss;
    oss << "build_avg_witness: n_k = " << n_k << " must exceed 2J = " << 2 * J.J
        << " (added support-disjointness assumption)";
    throw InvalidArgumentError(oss.str());
  }
  const CompactOp pm = projection_P(w, m);
  require_dense_class(x, J, pm, "x");
  require_dense_class(y, J, pm, "y");

  const ModuleVector mu = apply_provider(x, prov, k, /*use_G=*/false, w);
  const ModuleVector v = apply_provider(y, prov, k, /*use_G=*/true, w);
  ModuleVector eta = mu;
  if (!v.empty()) eta = add(eta, add(apply_T_power(op, n_k, v), apply_S_power(op, n_k, v)));

  WitnessDiagnostics diag;
  diag.err_to_x = distance(eta, x);
  diag.err_image_to_y = eta.empty() ? norm2(y) : distance(apply_C_avg(op, n_k, eta), y);
  return {eta, diag};
}

std::pair<ModuleVector, PeriodicDiagnostics> build_periodic_point(
    const ShiftOperator& op, const ModuleVector& y, const ApproximantProvider& prov, int k,
    long n_k, IndexRange J, long m, int series_cutoff, double tol) {
  const BasisWindow& w = op.weights.window();
  require_same_window(w, y.window(), "build_periodic_point");
  if (n_k <= 2 * J.J) {
    std::ostringstream oss;
    oss << "build_periodic_point: n_k = " << n_k << " must exceed 2J = " << 2 * J.J
        << " so translated copies have disjoint support";
    throw InvalidArgumentError(oss.str());
  }
  if (series_cutoff < 1)
    throw InvalidArgumentError("build_periodic_point: series_cutoff must be >= 1");
  if (!(tol > 0.0)) throw InvalidArgumentError("build_periodic_point: tol must be > 0");
  const CompactOp pm = projection_P(w, m);
  require_dense_class(y, J, pm, "y");

  const ModuleVector z = apply_provider(y, prov, k, /*use_G=*/false, w);

  PeriodicDiagnostics diag;
  ModuleVector q = z;
  ModuleVector t_cur = z;
  ModuleVector s_cur = z;
  auto check_decreasing = [&](const std::vector<double>& terms, const char* side) {
    const size_t n = terms.size();
    if (n >= 2 && terms[n - 1] >= terms[n - 2] && terms[n - 1] > tol) {
      std::ostringstream oss;
      oss << "build_periodic_point: " << side << " series terms stopped decreasing at l = " << n
          << " (non-summable at this n_k)";
      std::vector<double> partials = {0.0, 0.0};
      for (double a : diag.fwd_terms) partials[0] += a;
      for (double b : diag.inv_terms) partials[1] += b;
      throw ConstructionFailedError(oss.str(), partials);
    }
  };
  for (int l = 1; l <= series_cutoff; ++l) {
    if (!t_cur.empty()) {
      t_cur = apply_T_power(op, n_k, t_cur);
      const double a = norm2(t_cur);
      diag.fwd_terms.push_back(a);
      check_decreasing(diag.fwd_terms, "forward");
      if (!t_cur.empty()) q = add(q, t_cur);
    } else {
      diag.fwd_terms.push_back(0.0);
    }
    if (!s_cur.empty()) {
      s_cur = apply_S_power(op, n_k, s_cur);
      const double b = norm2(s_cur);
      diag.inv_terms.push_back(b);
      check_decreasing(diag.inv_terms, "inverse");
      if (!s_cur.empty()) q = add(q, s_cur);
    } else {
      diag.inv_terms.push_back(0.0);
    }
  }

  auto geometric_tail = [](const std::vector<double>& terms) {
    const size_t n = terms.size();
    if (n == 0 || terms[n - 1] == 0.0) return 0.0;
    if (n < 2 || terms[n - 2] <= 0.0) return terms[n - 1];  // no ratio: assume one more term
    const double r = terms[n - 1] / terms[n - 2];
    return r < 1.0 ? terms[n - 1] * r / (1.0 - r) : terms[n - 1];
  };
  diag.tail_bound = geometric_tail(diag.fwd_terms) + geometric_tail(diag.inv_terms);

  diag.periodicity_defect = q.empty() ? 0.0 : distance(apply_T_power(op, n_k, q), q);
  diag.err_to_y = distance(q, y);
  double term_sum = 0.0;
  for (double a : diag.fwd_terms) term_sum += a;
  for (double b : diag.inv_terms) term_sum += b;
  diag.approx_bound = distance(z, y) + term_sum + diag.tail_bound;
  return {q, diag};
}

}  // namespace shiftlab
