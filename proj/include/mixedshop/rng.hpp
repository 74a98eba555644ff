#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mixedshop {

// splitmix64 step, used both as a mixer and to derive substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive a substream seed from a base seed and a list of salts
// (bacterium index, loop counters, ...). Order-sensitive.
inline std::uint64_t mix_seed(std::uint64_t base, std::initializer_list<std::uint64_t> salts) {
    std::uint64_t s = base;
    std::uint64_t z = splitmix64(s);
    for (std::uint64_t salt : salts) {
        s = z ^ (salt + 0x100000001b3ULL);
        z = splitmix64(s);
    }
    return z;
}

// Seedable deterministic generator. All drawing goes through hand-rolled
// conversions so the bit stream is identical across platforms and standard
// library implementations (std distributions are not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1)
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform integer in [lo, hi], inclusive; unbiased via mask rejection
    int uniform_int(int lo, int hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t mask = range - 1;
        mask |= mask >> 1;  mask |= mask >> 2;  mask |= mask >> 4;
        mask |= mask >> 8;  mask |= mask >> 16; mask |= mask >> 32;
        std::uint64_t v;
        do {
            v = next_u64() & mask;
        } while (v >= range);
        return lo + static_cast<int>(v);
    }

    // Fisher-Yates; std::shuffle is implementation-defined, this is not
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            std::swap(v[static_cast<std::size_t>(i)],
                      v[static_cast<std::size_t>(uniform_int(0, i))]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace mixedshop
