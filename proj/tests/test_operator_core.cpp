#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "shiftlab/operator_core.hpp"
#include "support.hpp"

using namespace shiftlab;
using testsupport::Rng;

namespace {

// Independent oracle: largest/smallest singular value via a self-adjoint
// eigensolver on A*A (a different algorithm than the SVD the implementation
// uses).
double largest_sv_eig_oracle(const CompactOp& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.entries().adjoint() * a.entries());
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double smallest_sv_eig_oracle(const CompactOp& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.entries().adjoint() * a.entries());
  return std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
}

}  // namespace

TEST_SUITE("operator_core") {
  TEST_CASE("basis window indexing") {
    BasisWindow w(3);
    CHECK(w.dim() == 7);
    CHECK(w.to_col(-3) == 0);
    CHECK(w.to_col(0) == 3);
    CHECK(w.to_col(3) == 6);
    CHECK(w.to_basis(0) == -3);
    CHECK_THROWS_AS(w.to_col(4), WindowOverflowError);
    CHECK_THROWS_AS(BasisWindow(-1), InvalidArgumentError);
  }

  TEST_CASE("op_norm on identity and diagonal") {
    BasisWindow w(1);
    CHECK(op_norm(CompactOp::identity(w)) == doctest::Approx(1.0).epsilon(1e-14));
    Vector d(3);
    d << Complex(2, 0), Complex(0.5, 0), Complex(0.9, 0);
    CHECK(op_norm(CompactOp::diagonal(w, d)) == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("op_norm matches eigensolver oracle on random matrices") {
    Rng rng(11);
    BasisWindow w(4);  // 9x9
    for (int trial = 0; trial < 25; ++trial) {
      const CompactOp a = testsupport::random_compact(rng, w);
      const double expected = largest_sv_eig_oracle(a);
      CHECK(op_norm(a) == doctest::Approx(expected).epsilon(1e-8));
    }
  }

  TEST_CASE("op_norm rejects non-finite entries") {
    BasisWindow w(1);
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK_THROWS_AS(CompactOp(w, m), MalformedInputError);
  }

  TEST_CASE("power iteration path above the SVD limit") {
    // d = 301 > 256 exercises the power-iteration branch.
    Rng rng(12);
    BasisWindow w(150);
    const CompactOp a = testsupport::random_compact(rng, w, 0.1);
    Eigen::BDCSVD<Matrix> svd(a.entries());
    CHECK(op_norm(a) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-8));
  }

  TEST_CASE("lower_bound_m basics") {
    BasisWindow w(1);
    Vector d(3);
    d << Complex(2, 0), Complex(0.5, 0), Complex(0.9, 0);
    CHECK(lower_bound_m(CompactOp::diagonal(w, d)) == doctest::Approx(0.5).epsilon(1e-14));

    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
      const UnitaryOp u = testsupport::random_unitary_op(rng, w);
      CHECK(lower_bound_m(u.matrix()) == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Rank-deficient: one row duplicated.
    BasisWindow w2(2);
    Matrix m = testsupport::random_matrix(rng, 5);
    m.row(4) = m.row(3);
    CHECK(lower_bound_m(CompactOp(w2, m)) <= 1e-12);
  }

  TEST_CASE("projection_P") {
    BasisWindow w(3);
    CHECK(op_norm(sub(projection_P(w, 3), CompactOp::identity(w))) == 0.0);
    const CompactOp p0 = projection_P(w, 0);
    CHECK(p0.at(0, 0) == Complex(1, 0));
    CHECK(op_norm(p0) == doctest::Approx(1.0));
    CHECK(p0.entries().cwiseAbs().sum() == doctest::Approx(1.0));  // rank one
    CHECK_THROWS_AS(projection_P(w, 4), WindowOverflowError);

    // P_m P_m' = P_min(m, m')
    Rng rng(14);
    std::uniform_int_distribution<long> pick(0, 3);
    for (int trial = 0; trial < 20; ++trial) {
      const long m1 = pick(rng), m2 = pick(rng);
      const CompactOp lhs = matmul(projection_P(w, m1), projection_P(w, m2));
      const CompactOp rhs = projection_P(w, std::min(m1, m2));
      CHECK(op_norm(sub(lhs, rhs)) <= 1e-15);
    }
  }

  TEST_CASE("projections are idempotent and self-adjoint") {
    BasisWindow w(5);
    for (long m = 0; m <= 5; ++m) {
      const CompactOp p = projection_P(w, m);
      CHECK(op_norm(sub(matmul(p, p), p)) <= 1e-12);
      CHECK(op_norm(sub(adjoint(p), p)) <= 1e-12);
    }
  }

  TEST_CASE("adjoint is an antihomomorphism") {
    Rng rng(15);
    BasisWindow w(2);  // hits 5x5; the stated 6x6 rounds to the nearest odd window
    for (int trial = 0; trial < 20; ++trial) {
      const CompactOp a = testsupport::random_compact(rng, w);
      const CompactOp b = testsupport::random_compact(rng, w);
      const CompactOp lhs = adjoint(matmul(a, b));
      const CompactOp rhs = matmul(adjoint(b), adjoint(a));
      CHECK((lhs.entries() - rhs.entries()).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("inverse basics and error path") {
    BasisWindow w(1);
    CHECK(op_norm(sub(inverse(CompactOp::identity(w)), CompactOp::identity(w))) <= 1e-15);

    Vector d(3);
    d << Complex(2, 0), Complex(4, 0), Complex(5, 0);
    Vector dinv(3);
    dinv << Complex(0.5, 0), Complex(0.25, 0), Complex(0.2, 0);
    CHECK(op_norm(sub(inverse(CompactOp::diagonal(w, d)), CompactOp::diagonal(w, dinv))) <= 1e-14);

    CHECK_THROWS_AS(inverse(CompactOp::zero(w)), SingularityError);
    try {
      inverse(CompactOp::zero(w));
    } catch (const SingularityError& e) {
      CHECK(e.sigma_min() == 0.0);
    }
  }

  TEST_CASE("inverse satisfies ||A A^{-1} - I|| <= 1e-9") {
    Rng rng(16);
    BasisWindow w(3);
    for (int trial = 0; trial < 20; ++trial) {
      const CompactOp a = testsupport::random_with_spectrum(rng, w, 0.3, 3.0);
      CHECK(op_norm(sub(matmul(a, inverse(a)), CompactOp::identity(w))) <= 1e-9);
    }
  }

  TEST_CASE("op_norm is submultiplicative") {
    Rng rng(17);
    BasisWindow w(3);
    for (int trial = 0; trial < 30; ++trial) {
      const CompactOp a = testsupport::random_compact(rng, w);
      const CompactOp b = testsupport::random_compact(rng, w);
      CHECK(op_norm(matmul(a, b)) <= op_norm(a) * op_norm(b) + 1e-9);
    }
  }

  TEST_CASE("lower bound property: m(A) ||h|| <= ||A h||") {
    Rng rng(18);
    BasisWindow w(3);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 5; ++trial) {
      const CompactOp a = testsupport::random_compact(rng, w);
      const double m = lower_bound_m(a);
      for (int i = 0; i < 100; ++i) {
        Vector h(w.dim());
        for (long c = 0; c < w.dim(); ++c) h(c) = Complex(gauss(rng), gauss(rng));
        CHECK(m * h.norm() <= (a.entries() * h).norm() + 1e-9);
      }
    }
  }

  TEST_CASE("m(A) = 1 / op_norm(A^{-1}) for invertible A") {
    Rng rng(19);
    BasisWindow w(3);
    for (int trial = 0; trial < 20; ++trial) {
      const CompactOp a = testsupport::random_with_spectrum(rng, w, 0.2, 2.5);
      CHECK(lower_bound_m(a) == doctest::Approx(1.0 / op_norm(inverse(a))).epsilon(1e-8));
    }
  }

  TEST_CASE("lower_bound_m matches eigensolver oracle") {
    Rng rng(20);
    BasisWindow w(4);
    for (int trial = 0; trial < 25; ++trial) {
      const CompactOp a = testsupport::random_with_spectrum(rng, w, 0.05, 4.0);
      CHECK(lower_bound_m(a) == doctest::Approx(smallest_sv_eig_oracle(a)).epsilon(1e-8));
    }
  }

  TEST_CASE("unitaries satisfy U*U = UU* = I") {
    Rng rng(21);
    BasisWindow w(4);
    for (int trial = 0; trial < 15; ++trial) {
      const UnitaryOp u = testsupport::random_unitary_op(rng, w);
      const CompactOp um = u.matrix();
      CHECK(op_norm(sub(matmul(adjoint(um), um), CompactOp::identity(w))) <= 1e-12);
      CHECK(op_norm(sub(matmul(um, adjoint(um)), CompactOp::identity(w))) <= 1e-12);
    }
    CHECK_THROWS_AS(UnitaryOp::basis_permutation(w, std::vector<long>(w.dim(), 0)),
                    InvalidArgumentError);
  }

  TEST_CASE("unitary_power matches repeated multiplication and stays unitary") {
    Rng rng(22);
    BasisWindow w(3);
    const UnitaryOp u = testsupport::random_unitary_op(rng, w);
    CompactOp acc = CompactOp::identity(w);
    for (long n = 1; n <= 10; ++n) {
      acc = matmul(u.matrix(), acc);
      CHECK(op_norm(sub(unitary_power(u, n), acc)) <= 1e-12);
    }
    // Long power: re-unitarization keeps the drift in check.
    const CompactOp big = unitary_power(u, 200);
    CHECK(op_norm(sub(matmul(adjoint(big), big), CompactOp::identity(w))) <= 1e-10);
    // Negative powers invert.
    CHECK(op_norm(sub(matmul(unitary_power(u, 5), unitary_power(u, -5)),
                      CompactOp::identity(w))) <= 1e-12);
  }
}
