#pragma once

// Shared generators for the test suites.  Everything is seeded; tests are
// deterministic run to run.

#include <complex>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "shiftlab/constructions.hpp"
#include "shiftlab/module_space.hpp"
#include "shiftlab/operator_core.hpp"
#include "shiftlab/shift_dynamics.hpp"

namespace testsupport {

using shiftlab::BasisWindow;
using shiftlab::CompactOp;
using shiftlab::Complex;
using shiftlab::Matrix;
using shiftlab::ModuleVector;
using shiftlab::UnitaryOp;
using shiftlab::Vector;
using shiftlab::WeightFamily;

using Rng = std::mt19937_64;

inline Matrix random_matrix(Rng& rng, long d, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Matrix m(d, d);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
  return m;
}

inline CompactOp random_compact(Rng& rng, const BasisWindow& w, double scale = 1.0) {
  return CompactOp(w, random_matrix(rng, w.dim(), scale));
}

// Haar-ish random unitary via QR of a Gaussian matrix.
inline Matrix random_unitary_matrix(Rng& rng, long d) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, d));
  Matrix q = qr.householderQ();
  // Fix the phases so Q is uniquely determined by the input.
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    if (std::abs(rii) > 0) q.col(i) *= rii / std::abs(rii);
  }
  return q;
}

// Random matrix with singular values drawn uniformly from [smin, smax]:
// keeps both SVD routes well conditioned.
inline CompactOp random_with_spectrum(Rng& rng, const BasisWindow& w, double smin, double smax) {
  const long d = w.dim();
  std::uniform_real_distribution<double> unif(smin, smax);
  Eigen::VectorXd sv(d);
  for (long i = 0; i < d; ++i) sv(i) = unif(rng);
  const Matrix u = random_unitary_matrix(rng, d);
  const Matrix v = random_unitary_matrix(rng, d);
  return CompactOp(w, u * sv.asDiagonal() * v.adjoint());
}

inline UnitaryOp random_unitary_op(Rng& rng, const BasisWindow& w) {
  std::uniform_int_distribution<int> pick(0, 2);
  switch (pick(rng)) {
    case 0:
      return UnitaryOp::identity(w);
    case 1: {
      std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
      std::vector<double> theta(w.dim());
      for (auto& t : theta) t = angle(rng);
      return UnitaryOp::diagonal_phase(w, std::move(theta));
    }
    default: {
      std::uniform_int_distribution<long> shift(1, w.dim() - 1);
      return UnitaryOp::cyclic_shift(w, shift(rng));
    }
  }
}

inline ModuleVector random_module_vector(Rng& rng, const BasisWindow& w, long min_xi, long max_xi,
                                         int terms, double scale = 1.0) {
  std::uniform_int_distribution<long> xi(min_xi, max_xi);
  std::map<long, CompactOp> coeffs;
  for (int i = 0; i < terms; ++i) {
    const long idx = xi(rng);
    if (coeffs.find(idx) == coeffs.end()) {
      coeffs.emplace(idx, random_compact(rng, w, scale));
    }
  }
  return ModuleVector(w, std::move(coeffs));
}

// Random invertible weight family with known bounds: W_j has singular values
// in [1/2, bound], so M = bound and M_inv = 2.  Each index is generated from
// a hash of (seed, j), making the family a pure function of j.
inline WeightFamily random_weight_family(const BasisWindow& w, unsigned long seed, double bound) {
  auto provider = [w, seed, bound](long j) {
    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<unsigned long>(j + 1000003)));
    return random_with_spectrum(rng, w, 0.5, bound);
  };
  return WeightFamily(w, provider, bound, 2.0);
}

}  // namespace testsupport
