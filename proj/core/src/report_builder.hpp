#pragma once

// Internal report assembly shared by the criteria and cstar checkers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "shiftlab/criteria.hpp"

namespace shiftlab::detail {

// Collects rows and per-sequence effective values, then derives the verdict:
// every participating sequence must be non-increasing over its final three
// recorded k, and the tolerance must be attained (at a common k when
// require_common_k is set, per sequence otherwise).
class ReportBuilder {
 public:
  ReportBuilder(std::string check, std::string condition, double tol, int recorded_k)
      : check_(std::move(check)), condition_(std::move(condition)), tol_(tol),
        recorded_k_(recorded_k) {}

  // participates marks limit quantities entering the verdict; effective
  // overrides the recorded value for verdict purposes (used for series totals
  // that are unbounded at the horizon).
  void record(long j, int k, long t_k, const std::string& quantity, double value,
              bool participates, double effective = std::numeric_limits<double>::quiet_NaN()) {
    if (!std::isfinite(value) || value < 0.0) {
      std::ostringstream oss;
      oss << check_ << ": recorded value for " << quantity << " at (j=" << j << ", k=" << k
          << ") is " << value << "; reports only hold finite nonnegative numbers";
      throw MalformedInputError(oss.str());
    }
    rows_.push_back(ReportRow{j, k, t_k, quantity, value});
    if (participates) {
      auto& seq = sequences_[{j, quantity}];
      seq.resize(recorded_k_, std::numeric_limits<double>::infinity());
      seq[k - 1] = std::isnan(effective) ? value : effective;
    }
  }

  void note(std::string text) { notes_.push_back(std::move(text)); }

  CriterionReport finish(bool require_common_k) {
    CriterionReport rep;
    rep.check = check_;
    rep.condition = condition_;
    rep.tol = tol_;
    rep.recorded_k = recorded_k_;
    rep.notes = notes_;

    std::stable_sort(rows_.begin(), rows_.end(), [](const ReportRow& a, const ReportRow& b) {
      if (a.j != b.j) return a.j < b.j;
      if (a.k != b.k) return a.k < b.k;
      return a.quantity < b.quantity;
    });
    rep.rows = rows_;

    bool all_monotone = true;
    bool all_attained = !sequences_.empty();
    int latest_first_k = -1;
    for (const auto& [key, values] : sequences_) {
      SequenceSummary s;
      s.j = key.first;
      s.quantity = key.second;
      s.participates = true;
      s.first_k_below_tol = -1;
      for (int k = 1; k <= recorded_k_; ++k) {
        if (values[k - 1] < tol_) {
          s.first_k_below_tol = k;
          break;
        }
      }
      s.tail_monotone = tail_monotone(values);
      all_monotone = all_monotone && s.tail_monotone;
      if (s.first_k_below_tol < 0) {
        all_attained = false;
      } else {
        latest_first_k = std::max(latest_first_k, s.first_k_below_tol);
      }
      rep.sequences.push_back(std::move(s));
    }

    int common_k = -1;
    if (require_common_k && !sequences_.empty()) {
      for (int k = 1; k <= recorded_k_ && common_k < 0; ++k) {
        bool all_below = true;
        for (const auto& [key, values] : sequences_) {
          if (!(values[k - 1] < tol_)) {
            all_below = false;
            break;
          }
        }
        if (all_below) common_k = k;
      }
    }

    bool satisfied = false;
    if (!sequences_.empty() && all_monotone) {
      if (require_common_k) {
        satisfied = common_k > 0;
        rep.satisfied_at_k = common_k;
      } else {
        satisfied = all_attained;
        rep.satisfied_at_k = all_attained ? latest_first_k : -1;
      }
    }
    rep.verdict = satisfied ? Verdict::SatisfiedAtTolerance : Verdict::NotSatisfiedWithinHorizon;
    return rep;
  }

 private:
  static bool tail_monotone(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    const int from = std::max(0, n - 3);
    for (int i = from; i + 1 < n; ++i) {
      if (values[i] < values[i + 1]) return false;
    }
    return true;
  }

  std::string check_;
  std::string condition_;
  double tol_;
  int recorded_k_;
  std::vector<ReportRow> rows_;
  std::map<std::pair<long, std::string>, std::vector<double>> sequences_;
  std::vector<std::string> notes_;
};

}  // namespace shiftlab::detail
