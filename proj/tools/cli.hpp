#pragma once

#include <iosfwd>

namespace uavinspect::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitTimeout = 2;
inline constexpr int kExitSafetyAbort = 3;

/// Entry point shared by the executable and the tests.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uavinspect::cli
