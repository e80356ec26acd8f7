#include "eigenbridge/error.hpp"

namespace eigenbridge {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::RankDeficient: return "RankDeficient";
        case Errc::NotSymmetric: return "NotSymmetric";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::PoleTooClose: return "PoleTooClose";
        case Errc::BadDimension: return "BadDimension";
        case Errc::NotUnit: return "NotUnit";
        case Errc::NotOrthogonal: return "NotOrthogonal";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::BadParam: return "BadParam";
        case Errc::BadTheta: return "BadTheta";
        case Errc::NoRoot: return "NoRoot";
        case Errc::Degenerate: return "Degenerate";
        case Errc::TooFewPaths: return "TooFewPaths";
        case Errc::BadVariance: return "BadVariance";
        case Errc::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace eigenbridge
