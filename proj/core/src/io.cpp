#include "ttround/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace ttround {

namespace {

constexpr char kMagic[4] = {'T', 'T', 'F', '1'};

void write_u32(std::ofstream& out, std::uint32_t v) {
    // file format is little-endian; so are all supported targets
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) fail(Errc::IoError, "unexpected end of TTF1 file");
    return v;
}

} // namespace

void write_ttf1(const TTTensor& tt, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoError, "cannot open " + path.string() + " for writing");
    out.write(kMagic, sizeof kMagic);
    const auto modes = tt.mode_sizes();
    const auto ranks = tt.ranks();
    write_u32(out, static_cast<std::uint32_t>(tt.order()));
    for (Index n : modes) write_u32(out, static_cast<std::uint32_t>(n));
    for (Index r : ranks) write_u32(out, static_cast<std::uint32_t>(r));
    for (Index k = 0; k < tt.order(); ++k) {
        const auto& data = tt.core(k).data();
        out.write(reinterpret_cast<const char*>(data.data()),
                  static_cast<std::streamsize>(data.size() * sizeof(double)));
    }
    if (!out) fail(Errc::IoError, "failed writing " + path.string());
}

TTTensor read_ttf1(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoError, "cannot open " + path.string());
    char magic[4];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
        fail(Errc::IoError, "not a TTF1 file: " + path.string());
    const std::uint32_t d = read_u32(in);
    if (d == 0 || d > 64) fail(Errc::IoError, "implausible TT order in " + path.string());
    std::vector<Index> modes(d), ranks(d + 1);
    for (auto& n : modes) n = static_cast<Index>(read_u32(in));
    for (auto& r : ranks) r = static_cast<Index>(read_u32(in));
    if (ranks.front() != 1 || ranks.back() != 1)
        fail(Errc::BoundaryRankNotOne, "TTF1 boundary ranks must be 1");
    for (std::uint32_t k = 0; k < d; ++k) {
        if (modes[k] < 1 || ranks[k] < 1 || ranks[k + 1] < 1)
            fail(Errc::IoError, "invalid TTF1 dimensions");
    }
    std::vector<Core> cores;
    cores.reserve(d);
    for (std::uint32_t k = 0; k < d; ++k) {
        const Index count = ranks[k] * modes[k] * ranks[k + 1];
        if (count > (Index{1} << 34))
            fail(Errc::IoError, "implausible core size in " + path.string());
        std::vector<double> data(static_cast<std::size_t>(count));
        in.read(reinterpret_cast<char*>(data.data()),
                static_cast<std::streamsize>(data.size() * sizeof(double)));
        if (!in) fail(Errc::IoError, "unexpected end of TTF1 file");
        cores.emplace_back(ranks[k], modes[k], ranks[k + 1], std::move(data));
    }
    // the constructor re-validates the rank chain
    return TTTensor(std::move(cores));
}

} // namespace ttround
