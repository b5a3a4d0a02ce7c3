#include <array>
#include <cstring>

#include "twc/crypto/hash.hpp"

namespace twc::crypto {

namespace {

constexpr std::array<std::uint64_t, 8> iv = {
    0x6a09e667f3bcc908ULL, 0xbb67ae8584caa73bULL, 0x3c6ef372fe94f82bULL, 0xa54ff53a5f1d36f1ULL,
    0x510e527fade682d1ULL, 0x9b05688c2b3e6c1fULL, 0x1f83d9abfb41bd6bULL, 0x5be0cd19137e2179ULL,
};

constexpr std::uint8_t sigma[12][16] = {
    {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15},
    {14, 10, 4, 8, 9, 15, 13, 6, 1, 12, 0, 2, 11, 7, 5, 3},
    {11, 8, 12, 0, 5, 2, 15, 13, 10, 14, 3, 6, 7, 1, 9, 4},
    {7, 9, 3, 1, 13, 12, 11, 14, 2, 6, 5, 10, 4, 0, 15, 8},
    {9, 0, 5, 7, 2, 4, 10, 15, 14, 1, 11, 12, 6, 8, 3, 13},
    {2, 12, 6, 10, 0, 11, 8, 3, 4, 13, 7, 5, 15, 14, 1, 9},
    {12, 5, 1, 15, 14, 13, 4, 10, 0, 7, 6, 3, 9, 2, 8, 11},
    {13, 11, 7, 14, 12, 1, 3, 9, 5, 0, 15, 4, 8, 6, 2, 10},
    {6, 15, 14, 9, 11, 3, 0, 8, 12, 2, 13, 7, 1, 4, 10, 5},
    {10, 2, 8, 4, 7, 6, 1, 5, 15, 11, 9, 14, 3, 12, 13, 0},
    {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15},
    {14, 10, 4, 8, 9, 15, 13, 6, 1, 12, 0, 2, 11, 7, 5, 3},
};

constexpr std::uint64_t rotr(std::uint64_t x, int n)
{
    return (x >> n) | (x << (64 - n));
}

std::uint64_t load_le64(const std::uint8_t* p)
{
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | p[i];
    return v;
}

void compress(std::array<std::uint64_t, 8>& h, const std::uint8_t* block, std::uint64_t counter,
              bool last)
{
    std::uint64_t m[16];
    for (int i = 0; i < 16; ++i)
        m[i] = load_le64(block + 8 * i);

    std::uint64_t v[16];
    for (int i = 0; i < 8; ++i) {
        v[i] = h[i];
        v[i + 8] = iv[i];
    }
    v[12] ^= counter;
    // messages here never exceed 2^64 bytes, so the high counter word stays 0
    if (last)
        v[14] = ~v[14];

    auto g = [&v](int a, int b, int c, int d, std::uint64_t x, std::uint64_t y) {
        v[a] = v[a] + v[b] + x;
        v[d] = rotr(v[d] ^ v[a], 32);
        v[c] = v[c] + v[d];
        v[b] = rotr(v[b] ^ v[c], 24);
        v[a] = v[a] + v[b] + y;
        v[d] = rotr(v[d] ^ v[a], 16);
        v[c] = v[c] + v[d];
        v[b] = rotr(v[b] ^ v[c], 63);
    };

    for (const auto& s : sigma) {
        g(0, 4, 8, 12, m[s[0]], m[s[1]]);
        g(1, 5, 9, 13, m[s[2]], m[s[3]]);
        g(2, 6, 10, 14, m[s[4]], m[s[5]]);
        g(3, 7, 11, 15, m[s[6]], m[s[7]]);
        g(0, 5, 10, 15, m[s[8]], m[s[9]]);
        g(1, 6, 11, 12, m[s[10]], m[s[11]]);
        g(2, 7, 8, 13, m[s[12]], m[s[13]]);
        g(3, 4, 9, 14, m[s[14]], m[s[15]]);
    }

    for (int i = 0; i < 8; ++i)
        h[i] ^= v[i] ^ v[i + 8];
}

} // namespace

Hash256 blake2b256(ByteSpan data)
{
    constexpr std::size_t block_size = 128;
    constexpr std::uint64_t out_len = 32;

    auto h = iv;
    h[0] ^= 0x01010000ULL ^ out_len;

    std::size_t offset = 0;
    // the final block (possibly empty or full) is compressed with the last flag
    while (data.size() - offset > block_size) {
        offset += block_size;
        compress(h, data.data() + offset - block_size, offset, false);
    }
    std::array<std::uint8_t, block_size> last{};
    std::size_t tail = data.size() - offset;
    if (tail > 0)
        std::memcpy(last.data(), data.data() + offset, tail);
    compress(h, last.data(), data.size(), true);

    Hash256 out;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t b = 0; b < 8; ++b)
            out.bytes[8 * i + b] = static_cast<std::uint8_t>(h[i] >> (8 * b));
    return out;
}

std::string_view to_string(HashAlg alg)
{
    switch (alg) {
    case HashAlg::keccak256:
        return "keccak256";
    case HashAlg::blake2b256:
        return "blake2b256";
    }
    return "unknown";
}

std::optional<HashAlg> parse_hash_alg(std::string_view name)
{
    if (name == "keccak256")
        return HashAlg::keccak256;
    if (name == "blake2b256")
        return HashAlg::blake2b256;
    return std::nullopt;
}

Hash256 hash(HashAlg alg, ByteSpan data)
{
    return alg == HashAlg::keccak256 ? keccak256(data) : blake2b256(data);
}

} // namespace twc::crypto

namespace twc {

Address address_of(std::string_view label)
{
    std::string preimage = "twc:account:";
    preimage.append(label);
    return Address::from_span(crypto::keccak256(as_bytes(preimage)).span());
}

} // namespace twc
