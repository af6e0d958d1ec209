#pragma once

#include <cmath>
#include <cstdint>

namespace semilin {

// Philox4x32-10 counter-based generator. A (seed, stream) pair selects an
// independent substream; replicate i of a Monte Carlo run uses
// (master_seed, i), so parallel replicates never share state.
class Philox {
public:
    explicit Philox(std::uint64_t seed, std::uint64_t stream = 0)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)) {
        ctr_[0] = 0;
        ctr_[1] = 0;
        ctr_[2] = static_cast<std::uint32_t>(stream);
        ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
    }

    std::uint32_t next_u32() {
        if (idx_ == 4) {
            block();
            idx_ = 0;
        }
        return out_[idx_++];
    }

    std::uint64_t next_u64() {
        std::uint64_t lo = next_u32();
        std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [-1, 1].
    double uniform_sym() { return 2.0 * uniform01() - 1.0; }

    // Standard normal via Box-Muller; second value cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log1p(-u1));
        double th = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(th);
        have_cached_ = true;
        return r * std::cos(th);
    }

private:
    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
        std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(p >> 32);
        lo = static_cast<std::uint32_t>(p);
    }

    void block() {
        std::uint32_t c0 = ctr_[0], c1 = ctr_[1], c2 = ctr_[2], c3 = ctr_[3];
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(0xD2511F53u, c0, hi0, lo0);
            mulhilo(0xCD9E8D57u, c2, hi1, lo1);
            std::uint32_t n0 = hi1 ^ c1 ^ k0;
            std::uint32_t n1 = lo1;
            std::uint32_t n2 = hi0 ^ c3 ^ k1;
            std::uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        out_[0] = c0;
        out_[1] = c1;
        out_[2] = c2;
        out_[3] = c3;
        // 64-bit block counter in words 0..1; words 2..3 hold the stream id.
        if (++ctr_[0] == 0) ++ctr_[1];
    }

    std::uint32_t key0_, key1_;
    std::uint32_t ctr_[4];
    std::uint32_t out_[4] = {0, 0, 0, 0};
    int idx_ = 4;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace semilin
