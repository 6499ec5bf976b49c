#pragma once

#include "ttround/types.hpp"

namespace ttround::linalg {

//! C = A * B
Matrix mul(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b);
//! C = A^T * B
Matrix tmul(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b);
//! C = A * B^T
Matrix mul_nt(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b);

//! y = A * x (counted like a rank-1 GEMM)
Vector mul_vec(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Vector>& x);

struct ThinQR {
    Matrix q; // m x k, orthonormal columns, k = min(m, n)
    Matrix r; // k x n, upper trapezoidal
};

//! Thin Householder QR. Q is orthonormal even for rank-deficient input.
ThinQR thin_qr(const Eigen::Ref<const Matrix>& m);
//! Thin Q factor only.
Matrix thin_qr_q(const Eigen::Ref<const Matrix>& m);

struct SVD {
    Matrix u;  // m x k
    Vector s;  // k, descending
    Matrix v;  // n x k
};

//! Thin SVD, throws Errc::SVDFailure on non-convergence.
SVD svd(const Eigen::Ref<const Matrix>& m);

} // namespace ttround::linalg
