#pragma once

//
// constructions: the concrete objects used by the proofs and examples --
// scalar Salas-style weights, the discretized weighted-translation family on
// an L^2(R) grid, the indicator-times-projection approximants, transitivity
// and averaged-transitivity witnesses, and truncated periodic points.
//

#include <functional>
#include <utility>
#include <vector>

#include "shiftlab/criteria.hpp"

namespace shiftlab {

// Uniform grid t_i = i*h for |i| <= m_max, mapped bijectively onto the basis
// window; the half-width is L = m_max * h.
class GridModel {
 public:
  GridModel(BasisWindow w, double h);

  const BasisWindow& window() const noexcept { return window_; }
  double h() const noexcept { return h_; }
  double half_width() const noexcept { return h_ * window_.m_max(); }
  double point(long basis_index) const { return h_ * basis_index; }

  // Converts a translation amount r to grid steps; r must be a positive
  // integer multiple of h (to 1e-9 relative), otherwise throws.
  long steps_of(double r) const;

 private:
  BasisWindow window_;
  double h_;
};

// Parameters of the weighted-translation family W_j f = w_j (f o alpha_j),
// alpha_j(t) = t - r_j.  The weight functions must satisfy
//   1/M <= w_j <= M                 everywhere,
//   w_j <= 1 - eps on t >= 0        for j >= 0,
//   w_j >= 1 + eps on t < 0         for j < 0,
// and r_j >= C > 0 must be grid-aligned.  Violations surface lazily, on the
// first j requested.
struct TranslationWeightParams {
  double eps = 0.0;
  double M = 1.0;
  double C = 0.0;                              // lower bound on r_j
  std::function<double(long)> r;               // j -> r_j
  std::function<double(long, double)> weight;  // (j, t) -> w_j(t)

  // w_j = 1 - eps on the decaying half-line and off_value elsewhere (with the
  // mirrored arrangement for j < 0).
  static TranslationWeightParams step(double eps, double M, double r_value, double off_value);
  // step with off_value = 1.
  static TranslationWeightParams constant_by_sign(double eps, double M, double r_value);
  // linear ramp of the given width between the off region and the half-line.
  static TranslationWeightParams plateau(double eps, double M, double r_value, double ramp_width);
};

// Scalar Salas-style family: W_j = lambda * I for j < 0, (1/lambda) * I for
// j >= 0, with M = M_inv = lambda.  Requires lambda > 1.
WeightFamily salas_weights(const BasisWindow& w, double lambda);

// W_j = I for all j.
WeightFamily identity_weights(const BasisWindow& w);

// Discretized weighted translations.  The truncated matrices are nilpotent at
// the grid boundary, so the family carries an explicit pseudo-inverse that is
// exact away from a boundary band; experiments must confine supports to a
// safe horizon (see safe_horizon) for the algebra to be loss-free.
WeightFamily translation_weights(const GridModel& grid, const TranslationWeightParams& params);

// Mixed family from the tail of the translation example: translation weights
// on the index subsequences {stride, 2*stride, ...} and {-stride, -2*stride,
// ...}, pointwise multiplication weights everywhere else.  The multiplication
// weights must satisfy 1/M <= |w_j| <= 1 for j >= 0 and 1 <= |w_j| <= M for
// j < 0.
WeightFamily mixed_weights(const GridModel& grid, const TranslationWeightParams& params,
                           long stride, std::function<double(long, double)> mult_weight);

// Largest power n such that supports within [-support_m, support_m] moved by
// at most n * max_r_steps stay inside the window (zero boundary loss).
long safe_horizon(const BasisWindow& w, long support_m, long max_r_steps);

// D_j^(k) = G_j^(k) = (multiplication by the indicator of [-k, k]) P_m,
// evaluated on the grid.  Identical for every j.
std::pair<CompactOp, CompactOp> example_DG(const BasisWindow& w, long m, long k,
                                           const GridModel& grid);

// Provider wrapping example_DG.
ApproximantProvider example_provider(const GridModel& grid, long m);

struct WitnessDiagnostics {
  double err_to_x = 0.0;        // ||eta - x||_2
  double err_image_to_y = 0.0;  // ||T^t eta - y||_2 (averaged: ||C^(n) eta - y||_2)
};

// eta_k = u_k + S^{t_k} v_k with (u_k)_j = D_j^(k) x_j and (v_k)_j = G_j^(k) y_j.
// Preconditions: x and y lie in the dense class for (J, m) and t_k > 2J.
// k selects the approximant stage used from the provider.
std::pair<ModuleVector, WitnessDiagnostics> build_transitivity_witness(
    const ShiftOperator& op, const ModuleVector& x, const ModuleVector& y,
    const ApproximantProvider& prov, int k, long t_k, IndexRange J, long m);

// eta_k = mu_k + T^{n_k} v_k + S^{n_k} v_k for the averaged operator C^(n_k).
// n_k > 2J is enforced here as well (an added assumption; the averaged
// proposition does not restate support disjointness).
std::pair<ModuleVector, WitnessDiagnostics> build_avg_witness(
    const ShiftOperator& op, const ModuleVector& x, const ModuleVector& y,
    const ApproximantProvider& prov, int k, long n_k, IndexRange J, long m);

struct PeriodicDiagnostics {
  double periodicity_defect = 0.0;  // ||T^{n_k} q - q||_2
  double err_to_y = 0.0;            // ||q - y||_2
  double tail_bound = 0.0;          // geometric estimate of the dropped terms
  double approx_bound = 0.0;        // ||Z - y||_2 + sum of term norms + tail
  std::vector<double> fwd_terms;    // ||T^{l n_k} Z||_2, l = 1..cutoff
  std::vector<double> inv_terms;    // ||S^{l n_k} Z||_2, l = 1..cutoff
};

// q_k = sum_{l=0}^{cutoff} T^{l n_k} Z + sum_{l=1}^{cutoff} S^{l n_k} Z with
// Z_j = D_j^(k) y_j on [J].  Requires n_k > 2J so the translated copies have
// disjoint module support.  Throws ConstructionFailedError (carrying the
// partial sums) if the series terms fail to decrease above tol.
std::pair<ModuleVector, PeriodicDiagnostics> build_periodic_point(
    const ShiftOperator& op, const ModuleVector& y, const ApproximantProvider& prov, int k,
    long n_k, IndexRange J, long m, int series_cutoff, double tol);

}  // namespace shiftlab
