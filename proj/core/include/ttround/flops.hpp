#pragma once

#include <cstdint>

namespace ttround::flops {

//! Kernel-level operation counters. `gemm`/`qr`/`svd` count floating point
//! operations issued through the linalg wrappers; `sketch` additionally
//! accumulates the kernel flops issued while a SketchScope is active (the
//! randomization phase: partial contractions of a tensor against sketching
//! factors); `rng` counts Gaussian samples drawn.
struct Counts {
    std::uint64_t gemm = 0;
    std::uint64_t qr = 0;
    std::uint64_t svd = 0;
    std::uint64_t sketch = 0;
    std::uint64_t rng = 0;

    std::uint64_t total() const noexcept { return gemm + qr + svd; }
};

Counts& counters();
void reset();

//! Difference of two snapshots, a - b.
Counts diff(const Counts& a, const Counts& b);

//! While alive, kernel flops are also charged to the `sketch` category.
class SketchScope {
public:
    SketchScope();
    ~SketchScope();
    SketchScope(const SketchScope&) = delete;
    SketchScope& operator=(const SketchScope&) = delete;
};

bool in_sketch_scope();

} // namespace ttround::flops
