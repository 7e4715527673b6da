// Copyright 2026 The spinmbqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPINMBQC_RNG_H
#define SPINMBQC_RNG_H

#include <cstdint>
#include <random>

namespace spinmbqc {

uint64_t splitmix64(uint64_t x);

/// Portable uniform stream: mt19937_64 with 53-bit doubles.
class Rng {
   public:
    explicit Rng(uint64_t seed) : engine_(seed) {
    }
    /// Independent stream for trial `index` of a run seeded with `seed`.
    static Rng for_trial(uint64_t seed, uint64_t index) {
        return Rng(splitmix64(seed ^ splitmix64(index + 1)));
    }
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace spinmbqc

#endif
