#include "classifly/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>

namespace classifly {

spdlog::logger& logger() {
    static std::shared_ptr<spdlog::logger> instance = [] {
        auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
        auto log = std::make_shared<spdlog::logger>("classifly", sink);
        log->set_pattern("[%l] %v");
        auto level = spdlog::level::warn;
        if (const char* env = std::getenv("CLASSIFLY_LOG")) level = spdlog::level::from_str(env);
        log->set_level(level);
        return log;
    }();
    return *instance;
}

}  // namespace classifly
