#pragma once

#include <filesystem>

#include "ttround/tensor.hpp"

namespace ttround {

//! Binary TT file format "TTF1": magic bytes `TTF1`, u32 little-endian d,
//! d u32 mode sizes, d+1 u32 ranks, then the cores in order, each as its
//! vertical unfolding in column-major little-endian f64. Readers reject
//! rank-chain violations.
void write_ttf1(const TTTensor& tt, const std::filesystem::path& path);
TTTensor read_ttf1(const std::filesystem::path& path);

} // namespace ttround
