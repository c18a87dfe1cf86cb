#pragma once

#include <cstdint>
#include <random>

namespace bistoch {

// Portable random stream.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are NOT portable, so conversions are
// done here:
//   uniform()  = (next >> 11) * 2^-53, in [0, 1)
//   normal()   = Marsaglia polar method on 2*uniform()-1 pairs; the second
//                variate of each accepted pair is cached and returned by the
//                following call.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bistoch
