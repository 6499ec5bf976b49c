#include "ttround/linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include "ttround/flops.hpp"

namespace ttround::linalg {

namespace {

using flops::Counts;

void charge(std::uint64_t n, std::uint64_t Counts::*slot) {
    auto& c = flops::counters();
    c.*slot += n;
    if (flops::in_sketch_scope()) c.sketch += n;
}

std::uint64_t u64(Index v) { return static_cast<std::uint64_t>(v); }

} // namespace

Matrix mul(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
    charge(2 * u64(a.rows()) * u64(a.cols()) * u64(b.cols()), &Counts::gemm);
    return a * b;
}

Matrix tmul(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
    charge(2 * u64(a.cols()) * u64(a.rows()) * u64(b.cols()), &Counts::gemm);
    return a.transpose() * b;
}

Matrix mul_nt(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
    charge(2 * u64(a.rows()) * u64(a.cols()) * u64(b.rows()), &Counts::gemm);
    return a * b.transpose();
}

Vector mul_vec(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Vector>& x) {
    charge(2 * u64(a.rows()) * u64(a.cols()), &Counts::gemm);
    return a * x;
}

ThinQR thin_qr(const Eigen::Ref<const Matrix>& m) {
    const Index rows = m.rows(), cols = m.cols();
    const Index k = std::min(rows, cols);
    // factorization + explicit thin Q: ~4*m*n*min(m,n) flops
    charge(4 * u64(rows) * u64(cols) * u64(k), &Counts::qr);
    Eigen::HouseholderQR<Matrix> qr(m);
    ThinQR out;
    out.q = qr.householderQ() * Matrix::Identity(rows, k);
    out.r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
    return out;
}

Matrix thin_qr_q(const Eigen::Ref<const Matrix>& m) { return thin_qr(m).q; }

SVD svd(const Eigen::Ref<const Matrix>& m) {
    const Index rows = m.rows(), cols = m.cols();
    const Index k = std::min(rows, cols);
    charge(14 * u64(rows) * u64(cols) * u64(k) + 8 * u64(k) * u64(k) * u64(k), &Counts::svd);
    Eigen::JacobiSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success) fail(Errc::SVDFailure, "SVD did not converge");
    SVD out;
    out.u = dec.matrixU();
    out.s = dec.singularValues();
    out.v = dec.matrixV();
    return out;
}

} // namespace ttround::linalg
