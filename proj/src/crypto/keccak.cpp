#include <array>
#include <cstring>

#include "twc/crypto/hash.hpp"

namespace twc::crypto {

namespace {

constexpr std::array<std::uint64_t, 24> round_constants = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

// rho offsets and pi lane order, walked as a single cycle starting at lane 1
constexpr std::array<int, 24> rho = {1,  3,  6,  10, 15, 21, 28, 36, 45, 55, 2,  14,
                                     27, 41, 56, 8,  25, 43, 62, 18, 39, 61, 20, 44};
constexpr std::array<int, 24> pi = {10, 7,  11, 17, 18, 3, 5,  16, 8,  21, 24, 4,
                                    15, 23, 19, 13, 12, 2, 20, 14, 22, 9,  6,  1};

constexpr std::uint64_t rotl(std::uint64_t x, int n)
{
    return (x << n) | (x >> (64 - n));
}

void keccak_f1600(std::array<std::uint64_t, 25>& a)
{
    for (auto rc : round_constants) {
        std::uint64_t c[5];
        for (int x = 0; x < 5; ++x)
            c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
        for (int x = 0; x < 5; ++x) {
            std::uint64_t d = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5)
                a[y + x] ^= d;
        }

        std::uint64_t t = a[1];
        for (int i = 0; i < 24; ++i) {
            int j = pi[i];
            std::uint64_t next = a[j];
            a[j] = rotl(t, rho[i]);
            t = next;
        }

        for (int y = 0; y < 25; y += 5) {
            std::uint64_t row[5];
            for (int x = 0; x < 5; ++x)
                row[x] = a[y + x];
            for (int x = 0; x < 5; ++x)
                a[y + x] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5]);
        }

        a[0] ^= rc;
    }
}

std::uint64_t load_le64(const std::uint8_t* p)
{
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | p[i];
    return v;
}

} // namespace

Hash256 detail::keccak_sponge_256(ByteSpan data, std::uint8_t domain)
{
    constexpr std::size_t rate = 136;
    std::array<std::uint64_t, 25> state{};

    auto absorb = [&state](const std::uint8_t* block) {
        for (std::size_t i = 0; i < rate / 8; ++i)
            state[i] ^= load_le64(block + 8 * i);
        keccak_f1600(state);
    };

    std::size_t offset = 0;
    for (; data.size() - offset >= rate; offset += rate)
        absorb(data.data() + offset);

    std::array<std::uint8_t, rate> last{};
    std::size_t tail = data.size() - offset;
    if (tail > 0)
        std::memcpy(last.data(), data.data() + offset, tail);
    last[tail] ^= domain;
    last[rate - 1] ^= 0x80;
    absorb(last.data());

    Hash256 out;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t b = 0; b < 8; ++b)
            out.bytes[8 * i + b] = static_cast<std::uint8_t>(state[i] >> (8 * b));
    return out;
}

Hash256 keccak256(ByteSpan data)
{
    return detail::keccak_sponge_256(data, 0x01);
}

} // namespace twc::crypto
