#pragma once

#include "ttround/linalg.hpp"
#include "ttround/tensor.hpp"

// Core-level mode products shared by the sweep and rounding implementations.
namespace ttround::detail {

//! H(out) = m * H(core); out has shape (m.rows(), n, r_right).
inline Core contract_first(const Core& core, const Eigen::Ref<const Matrix>& m) {
    return Core::from_horizontal(core.n(), core.r_right(), linalg::mul(m, core.horizontal()));
}

//! V(out) = V(core) * m; out has shape (r_left, n, m.cols()).
inline Core contract_third(const Core& core, const Eigen::Ref<const Matrix>& m) {
    return Core::from_vertical(core.r_left(), core.n(), linalg::mul(core.vertical(), m));
}

//! Mode product along the middle index: out(i, j', g) = sum_j a(j', j) core(i, j, g).
inline Core contract_mode(const Core& core, const Eigen::Ref<const Matrix>& a) {
    Core out(core.r_left(), a.rows(), core.r_right());
    const Index block = core.r_left() * a.rows();
    for (Index g = 0; g < core.r_right(); ++g) {
        Matrix slab = linalg::mul_nt(core.slab(g), a); // r_left x a.rows()
        std::copy(slab.data(), slab.data() + block, out.data().data() + g * block);
    }
    return out;
}

} // namespace ttround::detail
