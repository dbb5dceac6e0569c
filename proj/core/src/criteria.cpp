#include "shiftlab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "report_builder.hpp"

namespace shiftlab {

using detail::ReportBuilder;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Series terms below this floor (relative to the first term) no longer move a
// double-precision partial sum; the accumulation stops there.
constexpr double kSeriesTermFloor = 1e-40;
// Terms past this magnitude are treated as divergent before matrix entries
// can overflow.
constexpr double kSeriesTermCeiling = 1e50;

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct SeriesResult {
  double partial = 0.0;
  double tail = 0.0;
  bool bounded = true;
  int terms = 0;
};

// Accumulates sum_{l>=1} ||product(l * n) * D|| with early stopping once terms
// stop mattering, plus a geometric tail estimate from the last two terms.
template <typename Sweep>
SeriesResult evaluate_series(Sweep& sweep, const CompactOp& approximant, long n,
                             int series_cutoff) {
  SeriesResult res;
  double prev = -1.0;
  double last = -1.0;
  double first = 0.0;
  for (int l = 1; l <= series_cutoff; ++l) {
    const CompactOp& prod = sweep.advance_to(static_cast<long>(l) * n);
    const double term = op_norm(matmul(prod, approximant));
    ++res.terms;
    res.partial += term;
    prev = last;
    last = term;
    if (l == 1) first = term;
    if (term >= kSeriesTermCeiling) {
      res.bounded = false;
      return res;
    }
    // An exactly zero term forces every later term to zero: longer products
    // extend this one by left multiplication.
    if (term == 0.0) break;
    if (l >= 2 && term <= kSeriesTermFloor * std::max(1.0, first)) break;
  }
  if (last == 0.0) {
    res.tail = 0.0;
  } else if (prev <= 0.0) {
    // no usable ratio information
    res.bounded = false;
  } else {
    const double r = last / prev;
    if (r < 1.0) {
      res.tail = last * r / (1.0 - r);
    } else {
      res.bounded = false;
    }
  }
  return res;
}

}  // namespace

PowerSchedule::PowerSchedule(std::vector<long> t) : t_(std::move(t)) {
  if (t_.empty()) throw InvalidArgumentError("PowerSchedule: schedule must be non-empty");
  if (t_.front() < 1) throw InvalidArgumentError("PowerSchedule: t[0] must be >= 1");
  for (size_t i = 1; i < t_.size(); ++i) {
    if (t_[i] <= t_[i - 1])
      throw InvalidArgumentError("PowerSchedule: schedule must be strictly increasing");
  }
}

PowerSchedule PowerSchedule::arithmetic(long start, long step, int max_k) {
  if (max_k < 1) throw InvalidArgumentError("PowerSchedule: max_k must be >= 1");
  if (step < 1) throw InvalidArgumentError("PowerSchedule: step must be >= 1");
  std::vector<long> t;
  t.reserve(max_k);
  for (int k = 0; k < max_k; ++k) t.push_back(start + step * k);
  return PowerSchedule(std::move(t));
}

PowerSchedule PowerSchedule::explicit_list(std::vector<long> t) {
  return PowerSchedule(std::move(t));
}

long PowerSchedule::at(int k) const {
  if (k < 1 || k > max_k()) throw InvalidArgumentError("PowerSchedule: k out of range");
  return t_[k - 1];
}

ApproximantProvider::ApproximantProvider(Fn fn, double norm_bound)
    : fn_(std::move(fn)), norm_bound_(norm_bound) {
  if (!fn_) throw InvalidArgumentError("ApproximantProvider: function must be callable");
  if (!(norm_bound_ > 0.0))
    throw InvalidArgumentError("ApproximantProvider: norm bound must be positive");
}

ApproximantProvider::Pair ApproximantProvider::get(long j, int k, const BasisWindow& w) const {
  Pair p = fn_(j, k);
  require_same_window(w, p.D.window(), "ApproximantProvider");
  require_same_window(w, p.G.window(), "ApproximantProvider");
  const double slack = 1e-9;
  if (op_norm(p.D) > norm_bound_ + slack || op_norm(p.G) > norm_bound_ + slack) {
    std::ostringstream oss;
    oss << "ApproximantProvider: output at (j=" << j << ", k=" << k
        << ") violates declared norm bound " << norm_bound_;
    throw InvalidArgumentError(oss.str());
  }
  return p;
}

ApproximantProvider ApproximantProvider::constant_projection(const BasisWindow& w, long m) {
  CompactOp pm = projection_P(w, m);
  return ApproximantProvider([pm](long, int) { return Pair{pm, pm}; }, 1.0);
}

TestVectorSets TestVectorSets::normalized(std::map<long, std::vector<Vector>> h1,
                                          std::map<long, std::vector<Vector>> h2) {
  auto normalize = [](std::map<long, std::vector<Vector>>& sets) {
    for (auto& [j, vectors] : sets) {
      for (auto& v : vectors) {
        const double n = v.norm();
        if (!(n > 0.0) || !std::isfinite(n))
          throw InvalidArgumentError("TestVectorSets: vectors must be non-zero and finite");
        v /= n;
      }
    }
  };
  normalize(h1);
  normalize(h2);
  return TestVectorSets{std::move(h1), std::move(h2)};
}

std::string to_string(Verdict v) {
  return v == Verdict::SatisfiedAtTolerance ? "satisfied-at-tolerance"
                                            : "not-satisfied-within-horizon";
}

std::string CriterionReport::to_csv() const {
  std::string out = "check,j,k,t_k,quantity,value\n";
  for (const auto& r : rows) {
    out += check;
    out += ',';
    out += std::to_string(r.j);
    out += ',';
    out += std::to_string(r.k);
    out += ',';
    out += std::to_string(r.t_k);
    out += ',';
    out += r.quantity;
    out += ',';
    out += format_value(r.value);
    out += '\n';
  }
  return out;
}

std::string CriterionReport::to_json_string(int indent) const {
  nlohmann::json doc;
  doc["check"] = check;
  doc["condition"] = condition;
  doc["tol"] = tol;
  doc["recorded_k"] = recorded_k;
  doc["verdict"] = shiftlab::to_string(verdict);
  doc["satisfied_at_k"] = satisfied_at_k;
  doc["notes"] = notes;
  auto rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"j", r.j},
                         {"k", r.k},
                         {"t_k", r.t_k},
                         {"quantity", r.quantity},
                         {"value", r.value}});
  }
  doc["rows"] = std::move(rows_json);
  auto seq_json = nlohmann::json::array();
  for (const auto& s : sequences) {
    seq_json.push_back({{"j", s.j},
                        {"quantity", s.quantity},
                        {"participates", s.participates},
                        {"first_k_below_tol", s.first_k_below_tol},
                        {"tail_monotone", s.tail_monotone}});
  }
  doc["sequences"] = std::move(seq_json);
  return doc.dump(indent);
}

std::vector<double> CriterionReport::sequence_values(long j, const std::string& quantity) const {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.j == j && r.quantity == quantity) out.push_back(r.value);
  }
  return out;
}

CriterionReport check_dense_hypercyclicity(const ShiftOperator& op, const PowerSchedule& sched,
                                           const ApproximantProvider& prov, IndexRange J, long m,
                                           double tol) {
  if (!(tol > 0.0)) throw InvalidArgumentError("check_dense_hypercyclicity: tol must be > 0");
  const BasisWindow& w = op.weights.window();
  const CompactOp pm = projection_P(w, m);
  ReportBuilder builder("dense-hypercyclicity",
                        "equivalent condition; run certifies the (2)=>(1) data numerically",
                        tol, sched.max_k());
  for (long j = -J.J; j <= J.J; ++j) {
    ForwardProductSweep fwd(op.weights, j);
    InverseProductSweep inv(op.weights, j);
    for (int k = 1; k <= sched.max_k(); ++k) {
      const long t = sched.at(k);
      const auto [D, G] = prov.get(j, k, w);
      builder.record(j, k, t, "approx_err_D", op_norm(sub(D, pm)), true);
      builder.record(j, k, t, "approx_err_G", op_norm(sub(G, pm)), true);
      builder.record(j, k, t, "forward_decay_D", op_norm(matmul(fwd.advance_to(t), D)), true);
      builder.record(j, k, t, "inverse_decay_G", op_norm(matmul(inv.advance_to(t), G)), true);
    }
  }
  return builder.finish(/*require_common_k=*/true);
}

CriterionReport check_pointwise_sufficient(const ShiftOperator& op, const PowerSchedule& sched,
                                           const TestVectorSets& tv, IndexRange J, double tol) {
  if (!(tol > 0.0)) throw InvalidArgumentError("check_pointwise_sufficient: tol must be > 0");
  const BasisWindow& w = op.weights.window();
  ReportBuilder builder("pointwise-sufficient", "sufficient condition", tol, sched.max_k());
  for (long j = -J.J; j <= J.J; ++j) {
    const auto h1_it = tv.h1.find(j);
    const auto h2_it = tv.h2.find(j);
    ForwardProductSweep fwd(op.weights, j);
    InverseProductSweep inv(op.weights, j);
    for (int k = 1; k <= sched.max_k(); ++k) {
      const long t = sched.at(k);
      if (h1_it != tv.h1.end()) {
        const CompactOp& prod = fwd.advance_to(t);
        for (size_t i = 0; i < h1_it->second.size(); ++i) {
          const Vector& h = h1_it->second[i];
          if (h.size() != w.dim())
            throw WindowMismatchError("check_pointwise_sufficient: vector dimension mismatch");
          builder.record(j, k, t, "forward_pointwise_" + std::to_string(i),
                         (prod.entries() * h).norm(), true);
        }
      }
      if (h2_it != tv.h2.end()) {
        const CompactOp& prod = inv.advance_to(t);
        for (size_t i = 0; i < h2_it->second.size(); ++i) {
          const Vector& g = h2_it->second[i];
          if (g.size() != w.dim())
            throw WindowMismatchError("check_pointwise_sufficient: vector dimension mismatch");
          builder.record(j, k, t, "inverse_pointwise_" + std::to_string(i),
                         (prod.entries() * g).norm(), true);
        }
      }
    }
  }
  return builder.finish(/*require_common_k=*/false);
}

CriterionReport check_chaos(const ShiftOperator& op, const PowerSchedule& sched,
                            const ApproximantProvider& prov, IndexRange J, long m, double tol,
                            int series_cutoff) {
  if (!(tol > 0.0)) throw InvalidArgumentError("check_chaos: tol must be > 0");
  if (series_cutoff < 2) throw InvalidArgumentError("check_chaos: series_cutoff must be >= 2");
  const BasisWindow& w = op.weights.window();
  const CompactOp pm = projection_P(w, m);
  ReportBuilder builder("chaos", "sufficient condition", tol, sched.max_k());
  bool any_unbounded = false;
  for (long j = -J.J; j <= J.J; ++j) {
    for (int k = 1; k <= sched.max_k(); ++k) {
      const long n = sched.at(k);
      const auto [D, G] = prov.get(j, k, w);
      (void)G;  // the chaos condition only involves the D sequence
      builder.record(j, k, n, "approx_err_D", op_norm(sub(D, pm)), true);

      ForwardProductSweep fwd(op.weights, j);
      const SeriesResult f = evaluate_series(fwd, D, n, series_cutoff);
      builder.record(j, k, n, "fwd_series_partial", f.partial, false);
      builder.record(j, k, n, "fwd_series_tail", f.tail, false);
      builder.record(j, k, n, "fwd_series_bounded", f.bounded ? 1.0 : 0.0, false);
      builder.record(j, k, n, "fwd_series_total", f.partial + f.tail, true,
                     f.bounded ? f.partial + f.tail : kInf);

      InverseProductSweep inv(op.weights, j);
      const SeriesResult g = evaluate_series(inv, D, n, series_cutoff);
      builder.record(j, k, n, "inv_series_partial", g.partial, false);
      builder.record(j, k, n, "inv_series_tail", g.tail, false);
      builder.record(j, k, n, "inv_series_bounded", g.bounded ? 1.0 : 0.0, false);
      builder.record(j, k, n, "inv_series_total", g.partial + g.tail, true,
                     g.bounded ? g.partial + g.tail : kInf);

      any_unbounded = any_unbounded || !f.bounded || !g.bounded;
    }
  }
  if (any_unbounded)
    builder.note("series unbounded-at-horizon for some (j, k); totals there are excluded from "
                 "tolerance attainment");
  return builder.finish(/*require_common_k=*/true);
}

CriterionReport check_avg_transitivity(const ShiftOperator& op, const PowerSchedule& sched,
                                       const ApproximantProvider& prov, IndexRange J, long m,
                                       double tol) {
  if (!(tol > 0.0)) throw InvalidArgumentError("check_avg_transitivity: tol must be > 0");
  const BasisWindow& w = op.weights.window();
  const CompactOp pm = projection_P(w, m);
  ReportBuilder builder("avg-transitivity", "sufficient condition", tol, sched.max_k());
  for (long j = -J.J; j <= J.J; ++j) {
    ForwardProductSweep fwd_n(op.weights, j);
    ForwardProductSweep fwd_2n(op.weights, j);
    InverseProductSweep inv_n(op.weights, j);
    InverseProductSweep inv_2n(op.weights, j);
    for (int k = 1; k <= sched.max_k(); ++k) {
      const long n = sched.at(k);
      const auto [D, G] = prov.get(j, k, w);
      builder.record(j, k, n, "approx_err_D", op_norm(sub(D, pm)), true);
      builder.record(j, k, n, "approx_err_G", op_norm(sub(G, pm)), true);
      const CompactOp& pf = fwd_n.advance_to(n);
      const CompactOp& pi = inv_n.advance_to(n);
      builder.record(j, k, n, "forward_decay_D", op_norm(matmul(pf, D)), true);
      builder.record(j, k, n, "inverse_decay_D", op_norm(matmul(pi, D)), true);
      builder.record(j, k, n, "forward_decay_G", op_norm(matmul(pf, G)), true);
      builder.record(j, k, n, "inverse_decay_G", op_norm(matmul(pi, G)), true);
      builder.record(j, k, n, "forward2_decay_G", op_norm(matmul(fwd_2n.advance_to(2 * n), G)),
                     true);
      builder.record(j, k, n, "inverse2_decay_G", op_norm(matmul(inv_2n.advance_to(2 * n), G)),
                     true);
    }
  }
  return builder.finish(/*require_common_k=*/true);
}

CriterionReport check_necessary_periodic_T(const WeightFamily& weights,
                                           const PowerSchedule& sched, IndexRange J, double tol) {
  if (!(tol > 0.0)) throw InvalidArgumentError("check_necessary_periodic_T: tol must be > 0");
  ReportBuilder builder("necessary-periodic-T", "necessary condition", tol, sched.max_k());
  for (long j = -J.J; j <= J.J; ++j) {
    ForwardProductSweep fwd(weights, j);
    for (int k = 1; k <= sched.max_k(); ++k) {
      const long n = sched.at(k);
      builder.record(j, k, n, "lower_bound_forward", lower_bound_m(fwd.advance_to(n)), true);
    }
  }
  return builder.finish(/*require_common_k=*/false);
}

CriterionReport check_necessary_periodic_S(const WeightFamily& weights,
                                           const PowerSchedule& sched, IndexRange J, double tol) {
  if (!(tol > 0.0)) throw InvalidArgumentError("check_necessary_periodic_S: tol must be > 0");
  ReportBuilder builder("necessary-periodic-S", "necessary condition", tol, sched.max_k());
  for (long j = -J.J; j <= J.J; ++j) {
    InverseProductSweep inv(weights, j);
    for (int k = 1; k <= sched.max_k(); ++k) {
      const long n = sched.at(k);
      builder.record(j, k, n, "lower_bound_inverse", lower_bound_m(inv.advance_to(n)), true);
    }
  }
  return builder.finish(/*require_common_k=*/false);
}

}  // namespace shiftlab
