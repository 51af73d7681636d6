#include "cvqkd/gaussian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace cvqkd {

namespace {

void check_even_square(const MatrixXd& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 2 || m.rows() % 2 != 0)
    throw std::invalid_argument(std::string(what) + ": need even square matrix");
}

}  // namespace

MatrixXd omega(int n_modes) {
  MatrixXd w = MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    w(2 * k, 2 * k + 1) = 1.0;
    w(2 * k + 1, 2 * k) = -1.0;
  }
  return w;
}

CovMatrix::CovMatrix(MatrixXd m) : m_(std::move(m)) {
  check_even_square(m_, "CovMatrix");
  n_modes_ = static_cast<int>(m_.rows()) / 2;
  const double scale = 1.0 + m_.cwiseAbs().maxCoeff();
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol::symmetry * scale)
    throw std::invalid_argument("CovMatrix: matrix not symmetric");
  m_ = 0.5 * (m_ + m_.transpose().eval());
}

CovMatrix CovMatrix::marginal(const std::vector<int>& keep_modes) const {
  const int k = static_cast<int>(keep_modes.size());
  MatrixXd out(2 * k, 2 * k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (keep_modes[a] < 0 || keep_modes[a] >= n_modes_ || keep_modes[b] >= n_modes_)
        throw std::out_of_range("CovMatrix::marginal: mode index");
      out.block<2, 2>(2 * a, 2 * b) = m_.block<2, 2>(2 * keep_modes[a], 2 * keep_modes[b]);
    }
  }
  return CovMatrix(out);
}

bool CovMatrix::is_physical(double slack) const {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m_);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) return false;
  const MatrixXd vhalf =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  Eigen::JacobiSVD<MatrixXd> svd(vhalf * omega(n_modes_) * vhalf);
  return svd.singularValues().minCoeff() >= 1.0 - slack;
}

void CovMatrix::require_physical(double slack) const {
  if (!is_physical(slack)) throw std::runtime_error("CovMatrix: uncertainty relation violated");
}

SymplecticMatrix::SymplecticMatrix(MatrixXd m) : m_(std::move(m)) {
  check_even_square(m_, "SymplecticMatrix");
  n_modes_ = static_cast<int>(m_.rows()) / 2;
  const MatrixXd w = omega(n_modes_);
  const double err = (m_ * w * m_.transpose() - w).cwiseAbs().maxCoeff();
  const double scale = 1.0 + m_.cwiseAbs().maxCoeff();
  if (err > tol::symplectic * scale * scale)
    throw std::invalid_argument("SymplecticMatrix: S Omega S^T != Omega");
}

SymplecticMatrix SymplecticMatrix::inverse() const {
  // S^-1 = Omega^T S^T Omega, from S Omega S^T = Omega.
  const MatrixXd w = omega(n_modes_);
  return SymplecticMatrix(w.transpose() * m_.transpose() * w);
}

double SymplecticSpectrum::min() const {
  return values.empty() ? 1.0 : values.back();
}

double SymplecticSpectrum::max() const {
  return values.empty() ? 1.0 : values.front();
}

double entropy_h(double x) {
  if (x < 1.0 - tol::validity)
    throw std::domain_error("entropy_h: argument below 1 (unphysical symplectic eigenvalue)");
  if (x <= 1.0) return 0.0;
  const double a = 0.5 * (x + 1.0);
  const double b = 0.5 * (x - 1.0);
  double s = a * std::log2(a);
  if (b > 0.0) s -= b * std::log2(b);
  return s;
}

SymplecticSpectrum symplectic_eigenvalues(const CovMatrix& v) {
  // The moduli of the eigenvalues of i*Omega*V equal the singular values of
  // the skew-symmetric V^1/2 Omega V^1/2 (similar matrices, and the latter
  // is normal), which is numerically far better conditioned for near-pure
  // states than a nonsymmetric eigensolve.
  const int n = v.modes();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(v.mat());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symplectic_eigenvalues: eigen solver failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::runtime_error("symplectic_eigenvalues: CM not positive definite");
  const MatrixXd vhalf =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  Eigen::JacobiSVD<MatrixXd> svd(vhalf * omega(n) * vhalf);
  // Singular values come in equal pairs; keep one per pair.
  SymplecticSpectrum out;
  out.values.resize(n);
  for (int k = 0; k < n; ++k)
    out.values[k] = 0.5 * (svd.singularValues()(2 * k) + svd.singularValues()(2 * k + 1));
  if (out.values.back() < 1.0 - 1e-6)
    throw std::runtime_error("symplectic_eigenvalues: spectrum below 1 (invalid state)");
  return out;
}

std::pair<double, double> two_mode_spectrum_closed(double a, double b, double c) {
  const double disc = (a + b) * (a + b) - 4.0 * c * c;
  if (disc < 0.0) throw std::runtime_error("two_mode_spectrum_closed: negative discriminant");
  const double root = std::sqrt(disc);
  const double hi = 0.5 * (root + std::abs(a - b));
  const double lo = 0.5 * (root - std::abs(a - b));
  return {hi, lo};
}

SymplecticSpectrum spectrum_qp(const MatrixXd& vq, const MatrixXd& vp) {
  if (vq.rows() != vq.cols() || vp.rows() != vp.cols() || vq.rows() != vp.rows())
    throw std::invalid_argument("spectrum_qp: block size mismatch");
  SymplecticSpectrum out;
  const int n = static_cast<int>(vq.rows());
  if (n == 1) {
    out.values = {std::sqrt(vq(0, 0) * vp(0, 0))};
    return out;
  }
  if (n == 2) {
    // Closed form; the discriminant comes from the entries of Vq*Vp (no
    // half_tr^2 - det cancellation near degeneracy) and the small eigenvalue
    // from det/lambda_max (no subtraction across a wide dynamic range).
    const MatrixXd m = vq * vp;
    const double half_tr = 0.5 * (m(0, 0) + m(1, 1));
    const double det = (vq(0, 0) * vq(1, 1) - vq(0, 1) * vq(1, 0)) *
                       (vp(0, 0) * vp(1, 1) - vp(0, 1) * vp(1, 0));
    const double half_gap = 0.5 * (m(0, 0) - m(1, 1));
    const double disc = std::max(half_gap * half_gap + m(0, 1) * m(1, 0), 0.0);
    const double lam_hi = half_tr + std::sqrt(disc);
    const double lam_lo = (lam_hi > 0.0) ? det / lam_hi : 0.0;
    out.values = {std::sqrt(std::max(lam_hi, 0.0)), std::sqrt(std::max(lam_lo, 0.0))};
    return out;
  }
  Eigen::EigenSolver<MatrixXd> solver(vq * vp, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("spectrum_qp: solver failed");
  out.values.resize(n);
  for (int i = 0; i < n; ++i) {
    const std::complex<double> lam = solver.eigenvalues()(i);
    out.values[i] = std::sqrt(std::abs(lam));
  }
  std::sort(out.values.begin(), out.values.end(), std::greater<double>());
  return out;
}

double von_neumann_entropy(const SymplecticSpectrum& s) {
  double total = 0.0;
  for (double nu : s.values) {
    if (nu < 1.0 - 1e-6)
      throw std::runtime_error("von_neumann_entropy: spectrum below 1 (invalid state)");
    total += entropy_h(std::max(nu, 1.0));
  }
  return total;
}

double von_neumann_entropy(const CovMatrix& v) {
  return von_neumann_entropy(symplectic_eigenvalues(v));
}

namespace {

// Gather the blocks of V with `mode` as the measured subsystem.
struct Partition {
  MatrixXd a;  // kept block, 2(N-1) x 2(N-1)
  MatrixXd c;  // cross block, 2(N-1) x 2
  MatrixXd b;  // measured block, 2 x 2
  std::vector<int> kept;
};

Partition split_out_mode(const CovMatrix& v, int mode) {
  const int n = v.modes();
  if (mode < 0 || mode >= n) throw std::out_of_range("conditioning: mode index");
  if (n < 2) throw std::invalid_argument("conditioning: need at least two modes");
  Partition p;
  p.kept.reserve(n - 1);
  for (int m = 0; m < n; ++m)
    if (m != mode) p.kept.push_back(m);
  const int k = n - 1;
  p.a.resize(2 * k, 2 * k);
  p.c.resize(2 * k, 2);
  for (int i = 0; i < k; ++i) {
    p.c.block<2, 2>(2 * i, 0) = v.mat().block<2, 2>(2 * p.kept[i], 2 * mode);
    for (int j = 0; j < k; ++j)
      p.a.block<2, 2>(2 * i, 2 * j) = v.mat().block<2, 2>(2 * p.kept[i], 2 * p.kept[j]);
  }
  p.b = v.mat().block<2, 2>(2 * mode, 2 * mode);
  return p;
}

}  // namespace

CovMatrix condition_homodyne(const CovMatrix& v, int mode, Quadrature quad) {
  Partition p = split_out_mode(v, mode);
  const int qi = (quad == Quadrature::q) ? 0 : 1;
  const double var = p.b(qi, qi);
  if (var <= 0.0) throw std::runtime_error("condition_homodyne: measured quadrature variance <= 0");
  // (Pi B Pi)^+ has the single entry 1/var; only column qi of C contributes.
  const VectorXd col = p.c.col(qi);
  return CovMatrix(p.a - (col * col.transpose()) / var);
}

CovMatrix condition_heterodyne(const CovMatrix& v, int mode) {
  Partition p = split_out_mode(v, mode);
  const MatrixXd bi = p.b + MatrixXd::Identity(2, 2);
  const double det = bi(0, 0) * bi(1, 1) - bi(0, 1) * bi(1, 0);
  if (det <= 0.0) throw std::runtime_error("condition_heterodyne: B + I singular");
  MatrixXd inv(2, 2);
  inv << bi(1, 1), -bi(0, 1), -bi(1, 0), bi(0, 0);
  inv /= det;
  return CovMatrix(p.a - p.c * inv * p.c.transpose());
}

CovMatrix apply_symplectic(const CovMatrix& v, const SymplecticMatrix& s) {
  if (v.modes() != s.modes()) throw std::invalid_argument("apply_symplectic: dimension mismatch");
  return CovMatrix(s.mat() * v.mat() * s.mat().transpose());
}

CovMatrix tmsv_cm(double nu) {
  if (nu < 1.0) throw std::invalid_argument("tmsv_cm: nu < 1");
  const double c = std::sqrt(nu * nu - 1.0);
  MatrixXd m = MatrixXd::Zero(4, 4);
  m.diagonal().setConstant(nu);
  m(0, 2) = m(2, 0) = c;
  m(1, 3) = m(3, 1) = -c;
  return CovMatrix(m);
}

SymplecticMatrix beamsplitter(double tau) {
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("beamsplitter: tau outside [0, 1]");
  const double st = std::sqrt(tau);
  const double sr = std::sqrt(1.0 - tau);
  MatrixXd m = MatrixXd::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = st;
  m(0, 2) = m(1, 3) = sr;
  m(2, 0) = m(3, 1) = -sr;
  return SymplecticMatrix(m);
}

SymplecticMatrix squeezer(double r) {
  MatrixXd m = MatrixXd::Zero(2, 2);
  m(0, 0) = std::exp(-r);
  m(1, 1) = std::exp(r);
  return SymplecticMatrix(m);
}

SymplecticMatrix rotation(double theta) {
  MatrixXd m(2, 2);
  m << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return SymplecticMatrix(m);
}

namespace {

MatrixXd block_concat(const std::vector<const MatrixXd*>& blocks) {
  int dim = 0;
  for (const MatrixXd* b : blocks) dim += static_cast<int>(b->rows());
  MatrixXd out = MatrixXd::Zero(dim, dim);
  int at = 0;
  for (const MatrixXd* b : blocks) {
    out.block(at, at, b->rows(), b->cols()) = *b;
    at += static_cast<int>(b->rows());
  }
  return out;
}

}  // namespace

SymplecticMatrix direct_sum(const std::vector<SymplecticMatrix>& blocks) {
  std::vector<const MatrixXd*> ms;
  for (const auto& b : blocks) ms.push_back(&b.mat());
  return SymplecticMatrix(block_concat(ms));
}

CovMatrix direct_sum(const std::vector<CovMatrix>& blocks) {
  std::vector<const MatrixXd*> ms;
  for (const auto& b : blocks) ms.push_back(&b.mat());
  return CovMatrix(block_concat(ms));
}

SymplecticMatrix embed_symplectic(const SymplecticMatrix& s, const std::vector<int>& modes,
                                  int n_modes) {
  if (static_cast<int>(modes.size()) != s.modes())
    throw std::invalid_argument("embed_symplectic: mode count mismatch");
  MatrixXd m = MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  for (int i = 0; i < s.modes(); ++i) {
    for (int j = 0; j < s.modes(); ++j) {
      if (modes[i] < 0 || modes[i] >= n_modes || modes[j] >= n_modes)
        throw std::out_of_range("embed_symplectic: mode index");
      m.block<2, 2>(2 * modes[i], 2 * modes[j]) = s.mat().block<2, 2>(2 * i, 2 * j);
    }
  }
  return SymplecticMatrix(m);
}

WilliamsonForm williamson(const CovMatrix& v) {
  const int n = v.modes();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(v.mat());
  if (es.info() != Eigen::Success) throw std::runtime_error("williamson: eigen solver failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::runtime_error("williamson: CM not positive definite");
  const MatrixXd vhalf =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();

  // Real Schur form of the skew-symmetric V^1/2 Omega V^1/2 is block diagonal
  // with 2x2 blocks [[0, nu_k], [-nu_k, 0]] after sign fixing.
  const MatrixXd t = vhalf * omega(n) * vhalf;
  Eigen::RealSchur<MatrixXd> schur(t);
  if (schur.info() != Eigen::Success) throw std::runtime_error("williamson: Schur failed");
  MatrixXd u = schur.matrixU();
  const MatrixXd r = schur.matrixT();

  VectorXd nus(n);
  for (int k = 0; k < n; ++k) {
    double b = r(2 * k, 2 * k + 1);
    if (b < 0.0) {
      u.col(2 * k).swap(u.col(2 * k + 1));
      b = -b;
    }
    nus(k) = b;
  }

  VectorXd dscale(2 * n);
  for (int k = 0; k < n; ++k) dscale(2 * k) = dscale(2 * k + 1) = 1.0 / std::sqrt(nus(k));
  SymplecticMatrix s(vhalf * u * dscale.asDiagonal());

  SymplecticSpectrum spec;
  spec.values.assign(nus.data(), nus.data() + n);
  std::sort(spec.values.begin(), spec.values.end(), std::greater<double>());
  return {std::move(s), std::move(spec)};
}

CovMatrix purify(const CovMatrix& v) {
  const int n = v.modes();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(v.mat());
  const MatrixXd vhalf =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  const MatrixXd t = vhalf * omega(n) * vhalf;
  Eigen::RealSchur<MatrixXd> schur(t);
  MatrixXd u = schur.matrixU();
  const MatrixXd r = schur.matrixT();
  VectorXd nus(n);
  for (int k = 0; k < n; ++k) {
    double b = r(2 * k, 2 * k + 1);
    if (b < 0.0) {
      u.col(2 * k).swap(u.col(2 * k + 1));
      b = -b;
    }
    nus(k) = std::max(b, 1.0);
  }
  VectorXd dscale(2 * n);
  for (int k = 0; k < n; ++k) dscale(2 * k) = dscale(2 * k + 1) = 1.0 / std::sqrt(nus(k));
  const MatrixXd s = vhalf * u * dscale.asDiagonal();

  // TMSV-style extension: partner modes in the Williamson basis.
  MatrixXd cross = MatrixXd::Zero(2 * n, 2 * n);
  MatrixXd partner = MatrixXd::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    const double c = std::sqrt(std::max(nus(k) * nus(k) - 1.0, 0.0));
    cross(2 * k, 2 * k) = c;
    cross(2 * k + 1, 2 * k + 1) = -c;
    partner(2 * k, 2 * k) = partner(2 * k + 1, 2 * k + 1) = nus(k);
  }
  MatrixXd out(4 * n, 4 * n);
  out.topLeftCorner(2 * n, 2 * n) = v.mat();
  out.topRightCorner(2 * n, 2 * n) = s * cross;
  out.bottomLeftCorner(2 * n, 2 * n) = (s * cross).transpose();
  out.bottomRightCorner(2 * n, 2 * n) = partner;
  return CovMatrix(out);
}

}  // namespace cvqkd
