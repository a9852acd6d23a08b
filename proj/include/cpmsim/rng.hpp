/*
 * cpmsim - container placement and migration simulator
 * Copyright (c) The cpmsim Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */

#pragma once

#include <cstdint>
#include <random>

namespace cpmsim {

/// Seeded RNG with an unbiased integer draw.
///
/// std::uniform_int_distribution is implementation-defined, so runs would
/// not reproduce across standard libraries; rejection sampling on the raw
/// mt19937 stream keeps results byte-identical everywhere.
class Rng {
public:
    explicit Rng(std::uint32_t seed) : engine_(seed) {}

    /// Uniform draw from [0, n); n must be >= 1.
    std::uint32_t below(std::uint32_t n) {
        const std::uint64_t range = static_cast<std::uint64_t>(UINT32_MAX) + 1;
        const std::uint64_t limit = range / n * n;
        for (;;) {
            std::uint32_t r = engine_();
            if (r < limit) return static_cast<std::uint32_t>(r % n);
        }
    }

private:
    std::mt19937 engine_;
};

} // namespace cpmsim
