#pragma once

#include <spdlog/spdlog.h>

namespace classifly {

/// Library logger (stderr). Level comes from the CLASSIFLY_LOG environment
/// variable: trace, debug, info, warn (default), error, off.
spdlog::logger& logger();

}  // namespace classifly
