#ifndef TRISTOCH_RNG_HPP
#define TRISTOCH_RNG_HPP

#include <cstdint>
#include <vector>

namespace tristoch {

// Deterministic, platform-independent RNG (xoshiro256**). Every randomized
// operation threads one of these through explicitly; identical seeds give
// bit-identical runs. Sub-streams are derived with stream(), so parallel
// jobs stay independent of scheduling.
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    static uint64_t splitmix64(uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t next() {
        uint64_t* s = state_;
        uint64_t result = rotl(s[1] * 5, 7) * 9;
        uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    // Uniform integer in [0, bound). Rejection keeps it unbiased and the
    // algorithm fixed, so sequences are reproducible everywhere.
    uint64_t below(uint64_t bound) {
        if (bound <= 1) return 0;
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    int index(size_t size) { return static_cast<int>(below(static_cast<uint64_t>(size))); }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t t = v.size(); t > 1; --t) std::swap(v[t - 1], v[below(t)]);
    }

    // Independent child stream; mixing tags keeps jobs decoupled from the
    // order in which they are launched.
    Rng stream(uint64_t tag) const {
        uint64_t x = state_[0] ^ (state_[3] + 0x9e3779b97f4a7c15ULL * (tag + 1));
        return Rng(splitmix64(x));
    }

    static uint64_t derive_seed(uint64_t master, uint64_t tag) {
        uint64_t x = master ^ (0xd1342543de82ef95ULL * (tag + 1));
        return splitmix64(x);
    }

  private:
    static uint64_t rotl(uint64_t v, int s) { return (v << s) | (v >> (64 - s)); }
    uint64_t state_[4];
};

}  // namespace tristoch

#endif
