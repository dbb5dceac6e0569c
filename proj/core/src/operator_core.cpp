#include "shiftlab/operator_core.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numeric>
#include <sstream>

namespace shiftlab {

namespace {

bool all_finite(const Matrix& m) {
  return m.array().isFinite().all();
}

void require_finite(const Matrix& m, const char* where) {
  if (!all_finite(m)) {
    std::ostringstream oss;
    oss << where << ": matrix has non-finite entries";
    throw MalformedInputError(oss.str());
  }
}

// Dimension threshold between full SVD and power iteration for op_norm.
constexpr long kSvdDimLimit = 256;
constexpr double kPowerIterTol = 1e-12;
constexpr int kPowerIterMax = 10000;

double largest_sv_power_iteration(const Matrix& a) {
  const long d = a.rows();
  const Matrix gram = a.adjoint() * a;  // Hermitian PSD, largest eig = ||A||^2
  Vector v = Vector::Ones(d) / std::sqrt(double(d));
  double lambda = 0.0;
  for (int it = 0; it < kPowerIterMax; ++it) {
    Vector w = gram * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    w /= nw;
    const double next = std::real(Complex(w.adjoint() * (gram * w)));
    if (std::abs(next - lambda) <= kPowerIterTol * std::max(1.0, std::abs(next))) {
      lambda = next;
      break;
    }
    lambda = next;
    v = w;
  }
  return std::sqrt(std::max(0.0, lambda));
}

Eigen::VectorXd singular_values(const Matrix& a) {
  // BDCSVD falls back to Jacobi below its internal cutoff; values only.
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues();
}

}  // namespace

BasisWindow::BasisWindow(long m_max) : m_max_(m_max) {
  if (m_max < 0) throw InvalidArgumentError("BasisWindow: m_max must be >= 0");
}

long BasisWindow::to_col(long basis_index) const {
  if (!contains(basis_index)) {
    std::ostringstream oss;
    oss << "BasisWindow: basis index " << basis_index << " outside [-" << m_max_ << ", "
        << m_max_ << "]";
    throw WindowOverflowError(oss.str());
  }
  return basis_index + m_max_;
}

long BasisWindow::to_basis(long col) const {
  if (col < 0 || col >= dim()) throw WindowOverflowError("BasisWindow: column out of range");
  return col - m_max_;
}

void require_same_window(const BasisWindow& a, const BasisWindow& b, const char* where) {
  if (a != b) {
    std::ostringstream oss;
    oss << where << ": window mismatch (m_max " << a.m_max() << " vs " << b.m_max() << ")";
    throw WindowMismatchError(oss.str());
  }
}

CompactOp::CompactOp(BasisWindow window, Matrix entries)
    : window_(window), entries_(std::move(entries)) {
  if (entries_.rows() != window_.dim() || entries_.cols() != window_.dim()) {
    std::ostringstream oss;
    oss << "CompactOp: entries are " << entries_.rows() << "x" << entries_.cols()
        << " but window dimension is " << window_.dim();
    throw InvalidArgumentError(oss.str());
  }
  require_finite(entries_, "CompactOp");
}

CompactOp CompactOp::zero(const BasisWindow& w) {
  return CompactOp(w, Matrix::Zero(w.dim(), w.dim()));
}

CompactOp CompactOp::identity(const BasisWindow& w) {
  return CompactOp(w, Matrix::Identity(w.dim(), w.dim()));
}

CompactOp CompactOp::diagonal(const BasisWindow& w, const Vector& diag) {
  if (diag.size() != w.dim())
    throw InvalidArgumentError("CompactOp::diagonal: diagonal length does not match window");
  Matrix m = Matrix::Zero(w.dim(), w.dim());
  m.diagonal() = diag;
  return CompactOp(w, std::move(m));
}

CompactOp CompactOp::scalar(const BasisWindow& w, Complex value) {
  return CompactOp(w, value * Matrix::Identity(w.dim(), w.dim()));
}

Complex CompactOp::at(long row_basis, long col_basis) const {
  return entries_(window_.to_col(row_basis), window_.to_col(col_basis));
}

bool CompactOp::is_zero(double threshold) const {
  return entries_.cwiseAbs().maxCoeff() <= threshold;
}

UnitaryOp::UnitaryOp(BasisWindow w, UnitaryKind kind, Matrix m)
    : window_(w), kind_(kind), matrix_(std::move(m)) {}

UnitaryOp UnitaryOp::identity(const BasisWindow& w) {
  return UnitaryOp(w, UnitaryKind::Identity, Matrix::Identity(w.dim(), w.dim()));
}

UnitaryOp UnitaryOp::diagonal_phase(const BasisWindow& w, std::vector<double> theta) {
  if (static_cast<long>(theta.size()) != w.dim())
    throw InvalidArgumentError("UnitaryOp::diagonal_phase: need one angle per basis index");
  Matrix m = Matrix::Zero(w.dim(), w.dim());
  for (long c = 0; c < w.dim(); ++c) {
    if (!std::isfinite(theta[c]))
      throw MalformedInputError("UnitaryOp::diagonal_phase: non-finite angle");
    m(c, c) = std::polar(1.0, theta[c]);
  }
  return UnitaryOp(w, UnitaryKind::DiagonalPhase, std::move(m));
}

UnitaryOp UnitaryOp::basis_permutation(const BasisWindow& w, std::vector<long> perm) {
  if (static_cast<long>(perm.size()) != w.dim())
    throw InvalidArgumentError("UnitaryOp::basis_permutation: need one target per basis index");
  std::vector<bool> hit(perm.size(), false);
  Matrix m = Matrix::Zero(w.dim(), w.dim());
  for (long c = 0; c < w.dim(); ++c) {
    const long src = w.to_basis(c);
    const long dst = perm[c];
    if (!w.contains(dst))
      throw InvalidArgumentError("UnitaryOp::basis_permutation: target outside window");
    const long r = w.to_col(dst);
    if (hit[r]) throw InvalidArgumentError("UnitaryOp::basis_permutation: not a bijection");
    hit[r] = true;
    m(r, c) = Complex(1.0, 0.0);
    (void)src;
  }
  return UnitaryOp(w, UnitaryKind::BasisPermutation, std::move(m));
}

UnitaryOp UnitaryOp::cyclic_shift(const BasisWindow& w, long s) {
  const long d = w.dim();
  std::vector<long> perm(d);
  for (long c = 0; c < d; ++c) {
    long target = c + s;
    target %= d;
    if (target < 0) target += d;
    perm[c] = w.to_basis(target);
  }
  return basis_permutation(w, std::move(perm));
}

CompactOp UnitaryOp::matrix() const { return CompactOp(window_, matrix_); }

CompactOp UnitaryOp::adjoint_matrix() const { return CompactOp(window_, matrix_.adjoint()); }

double op_norm(const CompactOp& a) {
  if (a.dim() <= kSvdDimLimit) {
    const Eigen::VectorXd sv = singular_values(a.entries());
    return sv.size() > 0 ? sv(0) : 0.0;
  }
  return largest_sv_power_iteration(a.entries());
}

double lower_bound_m(const CompactOp& a) {
  const Eigen::VectorXd sv = singular_values(a.entries());
  return sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
}

CompactOp projection_P(const BasisWindow& w, long m) {
  if (m < 0) throw InvalidArgumentError("projection_P: m must be >= 0");
  if (m > w.m_max()) {
    std::ostringstream oss;
    oss << "projection_P: m = " << m << " exceeds window m_max = " << w.m_max();
    throw WindowOverflowError(oss.str());
  }
  Matrix p = Matrix::Zero(w.dim(), w.dim());
  for (long i = -m; i <= m; ++i) {
    const long c = w.to_col(i);
    p(c, c) = Complex(1.0, 0.0);
  }
  return CompactOp(w, std::move(p));
}

CompactOp matmul(const CompactOp& a, const CompactOp& b) {
  require_same_window(a.window(), b.window(), "matmul");
  return CompactOp(a.window(), a.entries() * b.entries());
}

CompactOp add(const CompactOp& a, const CompactOp& b) {
  require_same_window(a.window(), b.window(), "add");
  return CompactOp(a.window(), a.entries() + b.entries());
}

CompactOp sub(const CompactOp& a, const CompactOp& b) {
  require_same_window(a.window(), b.window(), "sub");
  return CompactOp(a.window(), a.entries() - b.entries());
}

CompactOp scale(const CompactOp& a, Complex c) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw MalformedInputError("scale: non-finite scalar");
  return CompactOp(a.window(), c * a.entries());
}

CompactOp adjoint(const CompactOp& a) { return CompactOp(a.window(), a.entries().adjoint()); }

CompactOp inverse(const CompactOp& a, double threshold) {
  const double smin = lower_bound_m(a);
  if (!(smin > threshold)) {
    std::ostringstream oss;
    oss << "inverse: matrix numerically singular (sigma_min = " << smin << " <= " << threshold
        << ")";
    throw SingularityError(oss.str(), smin);
  }
  return CompactOp(a.window(), a.entries().partialPivLu().inverse());
}

CompactOp unitary_power(const UnitaryOp& u, long n) {
  const BasisWindow& w = u.window();
  if (n == 0 || u.kind() == UnitaryKind::Identity) return CompactOp::identity(w);
  const Matrix step = n > 0 ? u.matrix().entries() : u.adjoint_matrix().entries();
  const long count = n > 0 ? n : -n;
  Matrix acc = Matrix::Identity(w.dim(), w.dim());
  for (long i = 1; i <= count; ++i) {
    acc = step * acc;
    if (i % 64 == 0) {
      // Polar projection onto the unitary group: U <- U_svd * V_svd^H.
      Eigen::BDCSVD<Matrix> svd(acc, Eigen::ComputeFullU | Eigen::ComputeFullV);
      acc = svd.matrixU() * svd.matrixV().adjoint();
    }
  }
  return CompactOp(w, std::move(acc));
}

}  // namespace shiftlab
