#pragma once

#include <cstdint>
#include <string>

namespace qslide {

struct RunConfig {
    std::uint64_t memory_cap_bytes = std::uint64_t{1} << 30;
    int workers = 1;
    std::string checkpoint_path;
    std::uint64_t rng_seed = 0x51edeULL;
    int sample_count = 1000;  // per sampled-mode structural check
    bool allow_large = false;

    // picks up QSLIDE_MEM_CAP when set
    static RunConfig from_env();
};

}  // namespace qslide
