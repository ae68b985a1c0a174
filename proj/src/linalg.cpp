#include "wsrm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace wsrm {

CMatrix hermitianize(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

double hermitian_defect(const CMatrix& a) {
  const double scale = std::max(1.0, a.norm());
  return (a - CMatrix(a.adjoint())).norm() / scale;
}

namespace {

// Lexicographic (re, im) comparison of two equally sized column vectors.
bool lex_less(const CVector& a, const CVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

void phase_normalize(CMatrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const Complex v = vectors(r, c);
      if (std::abs(v) > 1e-12) {
        vectors.col(c) *= std::conj(v) / std::abs(v);
        break;
      }
    }
  }
}

}  // namespace

Eigh sorted_eigh(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitianize(a));
  if (es.info() != Eigen::Success)
    throw NumericalError("sorted_eigh: eigendecomposition failed");
  Eigh out{es.eigenvalues(), es.eigenvectors()};
  phase_normalize(out.vectors);

  std::vector<Eigen::Index> order(static_cast<size_t>(out.values.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    if (out.values(i) != out.values(j)) return out.values(i) < out.values(j);
    return lex_less(out.vectors.col(i), out.vectors.col(j));
  });

  Eigh sorted{RVector(out.values.size()), CMatrix(out.vectors.rows(), out.vectors.cols())};
  for (size_t i = 0; i < order.size(); ++i) {
    sorted.values(static_cast<Eigen::Index>(i)) = out.values(order[i]);
    sorted.vectors.col(static_cast<Eigen::Index>(i)) = out.vectors.col(order[i]);
  }
  return sorted;
}

double log2_det_identity_plus(const CMatrix& a) {
  if (hermitian_defect(a) > 1e-10)
    throw std::invalid_argument("log2_det_identity_plus: input is not Hermitian");
  const Eigh eig = sorted_eigh(a);
  const double floor = -1e-9 * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double lam = eig.values(i);
    if (lam < floor)
      throw NumericalError("log2_det_identity_plus: input is not PSD");
    sum += std::log1p(std::max(lam, 0.0));
  }
  return sum / kLn2;
}

double log2_det_hpd(const CMatrix& a) {
  // Cholesky keeps the log-det error independent of the condition number,
  // which the finite-difference checks of downstream gradients rely on.
  Eigen::LLT<CMatrix> llt(hermitianize(a));
  if (llt.info() != Eigen::Success)
    throw NumericalError("log2_det_hpd: matrix is singular");
  double sum = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double pivot = l(i, i).real();
    if (!(pivot > 0.0) || !std::isfinite(pivot))
      throw NumericalError("log2_det_hpd: matrix is singular");
    sum += std::log2(pivot);
  }
  return 2.0 * sum;
}

CMatrix psd_clip(const CMatrix& a) {
  Eigh eig = sorted_eigh(a);
  RVector clipped = eig.values.cwiseMax(0.0);
  return eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
}

CMatrix hpd_solve(const CMatrix& x, const CMatrix& b, const char* context) {
  Eigen::LLT<CMatrix> llt(hermitianize(x));
  if (llt.info() != Eigen::Success)
    throw NumericalError(std::string(context) + ": matrix is not positive definite");
  return llt.solve(b);
}

}  // namespace wsrm
