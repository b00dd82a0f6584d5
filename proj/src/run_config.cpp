#include "qslide/run_config.hpp"

#include <cstdlib>
#include <stdexcept>

namespace qslide {

RunConfig RunConfig::from_env() {
    RunConfig cfg;
    if (const char* cap = std::getenv("QSLIDE_MEM_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(cap, &end, 10);
        if (end == cap || *end != '\0' || v == 0)
            throw std::invalid_argument("QSLIDE_MEM_CAP must be a positive byte count");
        cfg.memory_cap_bytes = v;
    }
    return cfg;
}

}  // namespace qslide
