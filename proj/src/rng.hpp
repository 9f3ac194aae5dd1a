#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace ccbs::detail {

using Philox4x32 = std::array<std::uint32_t, 4>;

// Philox4x32-10 block: counter in, 128 random bits out.
inline Philox4x32 philox4x32_10(Philox4x32 ctr, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

// Standard normals addressed by (seed, stream, step); the same address always yields the same draws.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          lo_(static_cast<std::uint32_t>(stream)), hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    template <std::size_t N>
    void fill(std::uint32_t step, std::array<double, N>& z) const {
        for (std::size_t i = 0; i < N; i += 2) {
            const auto r = philox4x32_10({lo_, hi_, step, static_cast<std::uint32_t>(i / 2)}, key_);
            const double u1 = to_unit(r[0], r[1]);
            const double u2 = to_unit(r[2], r[3]);
            const double rad = std::sqrt(-2.0 * std::log(u1));
            const double ang = 2.0 * std::numbers::pi * u2;
            z[i] = rad * std::cos(ang);
            if (i + 1 < N) z[i + 1] = rad * std::sin(ang);
        }
    }

private:
    // 53-bit uniform on (0, 1]
    static double to_unit(std::uint32_t a, std::uint32_t b) {
        const std::uint64_t x = (static_cast<std::uint64_t>(a) << 32 | b) >> 11;
        return (static_cast<double>(x) + 1.0) * 0x1.0p-53;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t lo_, hi_;
};

}  // namespace ccbs::detail
