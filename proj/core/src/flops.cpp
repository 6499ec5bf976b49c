#include "ttround/flops.hpp"

namespace ttround::flops {

namespace {
thread_local Counts g_counts;
thread_local int g_sketch_depth = 0;
} // namespace

Counts& counters() { return g_counts; }

void reset() { g_counts = Counts{}; }

Counts diff(const Counts& a, const Counts& b) {
    Counts d;
    d.gemm = a.gemm - b.gemm;
    d.qr = a.qr - b.qr;
    d.svd = a.svd - b.svd;
    d.sketch = a.sketch - b.sketch;
    d.rng = a.rng - b.rng;
    return d;
}

SketchScope::SketchScope() { ++g_sketch_depth; }
SketchScope::~SketchScope() { --g_sketch_depth; }

bool in_sketch_scope() { return g_sketch_depth > 0; }

} // namespace ttround::flops
