#pragma once
#include <cmath>
#include <cstdint>
#include <string_view>

namespace dxl {

// Counter-based RNG (Philox4x32-10). Every consumer derives an independent
// stream from (master seed, purpose tag, stream indices), so fan-out across
// threads never changes the numbers a given task sees.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::string_view purpose,
              std::uint64_t stream_a = 0, std::uint64_t stream_b = 0) {
        std::uint64_t k = splitmix(master_seed ^ fnv1a64(purpose));
        key_[0] = static_cast<std::uint32_t>(k);
        key_[1] = static_cast<std::uint32_t>(k >> 32);
        std::uint64_t s = splitmix(stream_a ^ splitmix(stream_b ^ 0x6c62272e07bb0142ull));
        hi_[0] = static_cast<std::uint32_t>(s);
        hi_[1] = static_cast<std::uint32_t>(s >> 32);
    }

    std::uint32_t next_u32() {
        if (idx_ == 4) { fill(); idx_ = 0; }
        return out_[idx_++];
    }

    std::uint64_t next_u64() {
        std::uint64_t lo = next_u32(), hi = next_u32();
        return lo | (hi << 32);
    }

    // in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    // in (0,1]
    double uniform_open() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        if (have_cached_) { have_cached_ = false; return cached_; }
        double u1 = uniform_open(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    static std::uint64_t fnv1a64(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : s) { h ^= c; h *= 0x100000001b3ull; }
        return h;
    }

private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    static void round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
        std::uint64_t p0 = 0xD2511F53ull * ctr[0];
        std::uint64_t p1 = 0xCD9E8D57ull * ctr[2];
        std::uint32_t h0 = static_cast<std::uint32_t>(p0 >> 32), l0 = static_cast<std::uint32_t>(p0);
        std::uint32_t h1 = static_cast<std::uint32_t>(p1 >> 32), l1 = static_cast<std::uint32_t>(p1);
        std::uint32_t n0 = h1 ^ ctr[1] ^ key[0];
        std::uint32_t n2 = h0 ^ ctr[3] ^ key[1];
        ctr[0] = n0; ctr[1] = l1; ctr[2] = n2; ctr[3] = l0;
    }

    void fill() {
        std::uint32_t c[4] = { static_cast<std::uint32_t>(block_),
                               static_cast<std::uint32_t>(block_ >> 32), hi_[0], hi_[1] };
        std::uint32_t k[2] = { key_[0], key_[1] };
        for (int r = 0; r < 10; ++r) {
            round(c, k);
            k[0] += 0x9E3779B9u; k[1] += 0xBB67AE85u;
        }
        out_[0] = c[0]; out_[1] = c[1]; out_[2] = c[2]; out_[3] = c[3];
        ++block_;
    }

    std::uint32_t key_[2];
    std::uint32_t hi_[2];
    std::uint64_t block_ = 0;
    std::uint32_t out_[4] = {0, 0, 0, 0};
    int idx_ = 4;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace dxl
