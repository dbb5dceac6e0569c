#pragma once

//
// criteria: numerical checkers for the sufficient and necessary conditions
// attached to the shift dynamics.
//
// A finite horizon cannot certify a limit, so "lim = 0" is operationalized
// as: the recorded value falls below the tolerance at some recorded k AND the
// sequence is non-increasing over the final three recorded k (monotone-tail
// heuristic).  Checkers therefore return one of two verdicts:
// satisfied-at-tolerance or not-satisfied-within-horizon.  They never claim
// the dynamical property fails.
//

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "shiftlab/shift_dynamics.hpp"

namespace shiftlab {

inline constexpr double kDefaultTol = 1e-6;
inline constexpr int kDefaultMaxK = 40;
inline constexpr int kDefaultSeriesCutoff = 64;

// One power schedule: the paper's (t_n) together with the chosen subsequence
// (n_k) collapsed into a single strictly increasing list, truncated at max_k.
class PowerSchedule {
 public:
  explicit PowerSchedule(std::vector<long> t);

  static PowerSchedule arithmetic(long start, long step, int max_k);
  static PowerSchedule explicit_list(std::vector<long> t);

  const std::vector<long>& values() const noexcept { return t_; }
  int max_k() const noexcept { return static_cast<int>(t_.size()); }
  long at(int k) const;  // 1-based schedule position

 private:
  std::vector<long> t_;
};

// Approximant sequences D_j^(k), G_j^(k) as a total function of (j, k).
// Outputs must share the experiment window and respect the declared norm
// bound (checked lazily).
class ApproximantProvider {
 public:
  struct Pair {
    CompactOp D;
    CompactOp G;
  };
  using Fn = std::function<Pair(long j, int k)>;

  ApproximantProvider(Fn fn, double norm_bound);

  Pair get(long j, int k, const BasisWindow& w) const;
  double norm_bound() const noexcept { return norm_bound_; }

  // D = G = P_m for every (j, k).
  static ApproximantProvider constant_projection(const BasisWindow& w, long m);

 private:
  Fn fn_;
  double norm_bound_;
};

// Per-j finite lists of unit-norm Hilbert-space vectors: H1_j feeds the
// forward decay condition, H2_j the inverse one.
struct TestVectorSets {
  std::map<long, std::vector<Vector>> h1;
  std::map<long, std::vector<Vector>> h2;

  // Validates non-zero vectors and normalizes them.
  static TestVectorSets normalized(std::map<long, std::vector<Vector>> h1,
                                   std::map<long, std::vector<Vector>> h2);
};

enum class Verdict { SatisfiedAtTolerance, NotSatisfiedWithinHorizon };

std::string to_string(Verdict v);

struct ReportRow {
  long j;
  int k;        // 1-based schedule position
  long t_k;     // schedule value used at that position
  std::string quantity;
  double value;
};

struct SequenceSummary {
  long j;
  std::string quantity;
  bool participates;        // enters the verdict as a limit quantity
  int first_k_below_tol;    // -1 if never attained
  bool tail_monotone;       // non-increasing over the final 3 recorded k
};

struct CriterionReport {
  std::string check;
  std::string condition;    // which direction of the criterion the run exercises
  double tol = 0.0;
  int recorded_k = 0;
  Verdict verdict = Verdict::NotSatisfiedWithinHorizon;
  int satisfied_at_k = -1;  // schedule position where all limits are below tol
  std::vector<ReportRow> rows;          // ordered by j, then k, then quantity
  std::vector<SequenceSummary> sequences;
  std::vector<std::string> notes;

  // CSV with header "check,j,k,t_k,quantity,value"; values use 17 significant
  // digits so repeated runs are byte-identical and round-trip exactly.
  std::string to_csv() const;
  std::string to_json_string(int indent = -1) const;

  // Values of one recorded sequence in schedule order.
  std::vector<double> sequence_values(long j, const std::string& quantity) const;
};

// Condition (2) of the dense-hypercyclicity equivalence: approximant errors
// ||D_j^(k) - P_m||, ||G_j^(k) - P_m|| and the two product decays
// ||W_{j+t_k} ... W_{j+1} D_j^(k)||, ||W_{j-t_k+1}^{-1} ... W_j^{-1} G_j^(k)||
// for j in [J].  Satisfied iff all four sequences drop below tol at a common
// k and have monotone tails.
CriterionReport check_dense_hypercyclicity(const ShiftOperator& op, const PowerSchedule& sched,
                                           const ApproximantProvider& prov, IndexRange J, long m,
                                           double tol);

// Pointwise sufficiency: ||forward_product(j, t_k) h|| for h in H1_j and
// ||inverse_product(j, t_k) g|| for g in H2_j must all decay below tol.
CriterionReport check_pointwise_sufficient(const ShiftOperator& op, const PowerSchedule& sched,
                                           const TestVectorSets& tv, IndexRange J, double tol);

// Chaos condition: partial sums over l of ||W_{j+l n_k} ... W_{j+1} D_j^(k)||
// and ||W_{j-l n_k+1}^{-1} ... W_j^{-1} D_j^(k)|| up to series_cutoff, plus a
// geometric tail estimate from the ratio of the last two computed terms.  A
// ratio >= 1 marks the series unbounded-at-horizon (recorded, never thrown).
CriterionReport check_chaos(const ShiftOperator& op, const PowerSchedule& sched,
                            const ApproximantProvider& prov, IndexRange J, long m, double tol,
                            int series_cutoff);

// Averaged-operator transitivity: the six decay sequences (forward/inverse at
// n_k for D and G, forward/inverse at 2 n_k for G) plus both approximant
// errors, all below tol at a common k.
CriterionReport check_avg_transitivity(const ShiftOperator& op, const PowerSchedule& sched,
                                       const ApproximantProvider& prov, IndexRange J, long m,
                                       double tol);

// Necessary conditions for P~_{J,m} to be approximable by periodic points:
// m(W_{j+n_k} ... W_{j+1}) resp. m(W_{j-n_k+1}^{-1} ... W_j^{-1}) must decay.
CriterionReport check_necessary_periodic_T(const WeightFamily& weights,
                                           const PowerSchedule& sched, IndexRange J,
                                           double tol = kDefaultTol);
CriterionReport check_necessary_periodic_S(const WeightFamily& weights,
                                           const PowerSchedule& sched, IndexRange J,
                                           double tol = kDefaultTol);

}  // namespace shiftlab
