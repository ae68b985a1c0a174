#pragma once

#include "wsrm/types.hpp"

namespace wsrm {

/// (A + A^H) / 2.
CMatrix hermitianize(const CMatrix& a);

/// Relative Hermitian defect ||A - A^H|| / max(1, ||A||), Frobenius norms.
double hermitian_defect(const CMatrix& a);

/// Eigendecomposition of a Hermitian matrix with a deterministic convention:
/// eigenvalues ascending, each eigenvector phase-normalized so its first
/// entry of magnitude > 1e-12 is real-positive, exact eigenvalue ties broken
/// by lexicographic (re, im) comparison of the normalized vectors.
struct Eigh {
  RVector values;   // ascending
  CMatrix vectors;  // columns match values
};
Eigh sorted_eigh(const CMatrix& a);

/// log2 det(I + A) for Hermitian PSD A. Eigenvalues below zero are clamped
/// at -tol (relative) before being treated as 0; worse than that throws.
double log2_det_identity_plus(const CMatrix& a);

/// log2 det(A) for Hermitian A expected to be PD. Throws NumericalError when
/// an eigenvalue is <= 0 (singular or indefinite input).
double log2_det_hpd(const CMatrix& a);

/// Nearest-PSD clip: eigenvalues below zero set to 0, reconstructed.
CMatrix psd_clip(const CMatrix& a);

/// Solve X * Y = B for HPD X via Cholesky. Throws NumericalError when the
/// factorization fails.
CMatrix hpd_solve(const CMatrix& x, const CMatrix& b, const char* context);

}  // namespace wsrm
