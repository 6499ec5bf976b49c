#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace ttround {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

//! Error kinds raised by the library. Tests match on these, not on messages.
enum class Errc {
    RankChainMismatch,
    BoundaryRankNotOne,
    EmptyCoreList,
    IndexOutOfRange,
    DenseTooLarge,
    ModeSizeMismatch,
    EmptyTermList,
    InvalidRankChain,
    SVDFailure,
    InvalidRanks,
    NotLeftOrthogonal,
    InvalidGrid,
    Breakdown,
    InvalidArgument,
    IoError,
};

constexpr const char* errc_name(Errc code) {
    switch (code) {
    case Errc::RankChainMismatch: return "RankChainMismatch";
    case Errc::BoundaryRankNotOne: return "BoundaryRankNotOne";
    case Errc::EmptyCoreList: return "EmptyCoreList";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::DenseTooLarge: return "DenseTooLarge";
    case Errc::ModeSizeMismatch: return "ModeSizeMismatch";
    case Errc::EmptyTermList: return "EmptyTermList";
    case Errc::InvalidRankChain: return "InvalidRankChain";
    case Errc::SVDFailure: return "SVDFailure";
    case Errc::InvalidRanks: return "InvalidRanks";
    case Errc::NotLeftOrthogonal: return "NotLeftOrthogonal";
    case Errc::InvalidGrid: return "InvalidGrid";
    case Errc::Breakdown: return "Breakdown";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace ttround
