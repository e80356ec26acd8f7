#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eigenbridge {

enum class Errc {
    RankDeficient,
    NotSymmetric,
    NoConvergence,
    PoleTooClose,
    BadDimension,
    NotUnit,
    NotOrthogonal,
    LengthMismatch,
    BadParam,
    BadTheta,
    NoRoot,
    Degenerate,
    TooFewPaths,
    BadVariance,
    ConfigError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (and tests) can branch on the kind of failure, not the message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace eigenbridge
