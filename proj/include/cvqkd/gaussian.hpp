#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>
#include <vector>

// Gaussian-state linear algebra in shot-noise units (vacuum variance = 1,
// hbar = 2). Quadrature ordering is (q1, p1, ..., qN, pN) throughout.
namespace cvqkd {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace tol {
inline constexpr double symmetry = 1e-12;    // relative, CM symmetry
inline constexpr double validity = 1e-9;     // symplectic eigenvalue >= 1 - validity
inline constexpr double symplectic = 1e-10;  // |S Omega S^T - Omega| entrywise
}  // namespace tol

// Symplectic form for n modes.
MatrixXd omega(int n_modes);

enum class Quadrature { q, p };

// 2N x 2N real symmetric covariance matrix of an N-mode Gaussian state.
class CovMatrix {
 public:
  explicit CovMatrix(MatrixXd m);

  int modes() const { return n_modes_; }
  const MatrixXd& mat() const { return m_; }

  double operator()(int i, int j) const { return m_(i, j); }

  // Marginal CM of the listed modes, in the listed order.
  CovMatrix marginal(const std::vector<int>& keep_modes) const;

  // Uncertainty relation V + i*Omega >= 0, i.e. all symplectic
  // eigenvalues >= 1 - slack.
  bool is_physical(double slack = tol::validity) const;
  void require_physical(double slack = tol::validity) const;

 private:
  MatrixXd m_;
  int n_modes_;
};

// 2N x 2N real matrix with S Omega S^T = Omega.
class SymplecticMatrix {
 public:
  explicit SymplecticMatrix(MatrixXd m);

  int modes() const { return n_modes_; }
  const MatrixXd& mat() const { return m_; }

  SymplecticMatrix inverse() const;

 private:
  MatrixXd m_;
  int n_modes_;
};

// Multiset of symplectic eigenvalues, sorted descending, each >= 1 - 1e-9.
struct SymplecticSpectrum {
  std::vector<double> values;

  double min() const;
  double max() const;
};

// h(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2), in bits.
// h(1) = 0 (pure-state limit). Throws std::domain_error for x < 1 - 1e-9.
double entropy_h(double x);

// Moduli of the eigenvalues of i*Omega*V, one representative per +/- pair.
SymplecticSpectrum symplectic_eigenvalues(const CovMatrix& v);

// Closed-form spectrum of the two-mode CM [[a I, c Z], [c Z, b I]]:
// nu_{+,-} = (sqrt((a+b)^2 - 4 c^2) +/- (a - b)) / 2.
std::pair<double, double> two_mode_spectrum_closed(double a, double b, double c);

// Spectrum of a CM that is block diagonal in the (q...q, p...p) split:
// nu_k = sqrt(eig_k(Vq * Vp)). Both blocks are n x n.
SymplecticSpectrum spectrum_qp(const MatrixXd& vq, const MatrixXd& vp);

// S(rho) = sum_k h(nu_k), in bits.
double von_neumann_entropy(const CovMatrix& v);
double von_neumann_entropy(const SymplecticSpectrum& s);

// Partial homodyne of one mode: kept CM is A - C (Pi B Pi)^+ C^T with the
// pseudo-inverse acting on the measured quadrature only.
CovMatrix condition_homodyne(const CovMatrix& v, int mode, Quadrature quad);

// Partial heterodyne of one mode: A - C (B + I)^-1 C^T.
CovMatrix condition_heterodyne(const CovMatrix& v, int mode);

// V -> S V S^T.
CovMatrix apply_symplectic(const CovMatrix& v, const SymplecticMatrix& s);

// Builders ----------------------------------------------------------------

// Two-mode squeezed vacuum, [[nu I, sqrt(nu^2-1) Z], [sqrt(nu^2-1) Z, nu I]].
CovMatrix tmsv_cm(double nu);

// Beamsplitter [[sqrt(tau) I, sqrt(1-tau) I], [-sqrt(1-tau) I, sqrt(tau) I]].
SymplecticMatrix beamsplitter(double tau);

// Single-mode squeezer diag(e^-r, e^r).
SymplecticMatrix squeezer(double r);

// Phase rotation [[cos, sin], [-sin, cos]].
SymplecticMatrix rotation(double theta);

// Block-diagonal concatenation preserving mode order.
SymplecticMatrix direct_sum(const std::vector<SymplecticMatrix>& blocks);
CovMatrix direct_sum(const std::vector<CovMatrix>& blocks);

// Expand a k-mode symplectic to n modes, acting on the listed modes
// (identity elsewhere).
SymplecticMatrix embed_symplectic(const SymplecticMatrix& s,
                                  const std::vector<int>& modes, int n_modes);

// Williamson decomposition V = S diag(nu_1 I, ..., nu_N I) S^T.
struct WilliamsonForm {
  SymplecticMatrix s;
  SymplecticSpectrum spectrum;
};
WilliamsonForm williamson(const CovMatrix& v);

// Pure 2N-mode extension of an N-mode CM (TMSV-style purification of the
// Williamson form). First N modes carry the input state.
CovMatrix purify(const CovMatrix& v);

}  // namespace cvqkd
