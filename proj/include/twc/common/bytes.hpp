#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twc {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

std::string to_hex(ByteSpan data);
/// Accepts an optional "0x" prefix. Throws std::invalid_argument on odd length
/// or non-hex characters.
Bytes from_hex(std::string_view hex);

inline ByteSpan as_bytes(std::string_view s)
{
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Fixed 32-byte value. The tag keeps hashes, addresses and public keys from
/// being mixed up at call sites.
template <class Tag>
struct Bytes32 {
    std::array<std::uint8_t, 32> bytes{};

    static constexpr std::size_t size() { return 32; }
    const std::uint8_t* data() const { return bytes.data(); }
    std::uint8_t* data() { return bytes.data(); }
    ByteSpan span() const { return {bytes.data(), bytes.size()}; }

    bool is_zero() const
    {
        return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
    }
    std::string hex() const { return to_hex(span()); }

    static Bytes32 from_span(ByteSpan s)
    {
        Bytes32 out;
        if (s.size() != 32)
            throw std::invalid_argument("expected 32 bytes, got " + std::to_string(s.size()));
        std::copy(s.begin(), s.end(), out.bytes.begin());
        return out;
    }
    static Bytes32 from_hex(std::string_view hex) { return from_span(twc::from_hex(hex)); }

    friend auto operator<=>(const Bytes32&, const Bytes32&) = default;
    friend bool operator==(const Bytes32&, const Bytes32&) = default;
};

struct HashTag;
struct AddressTag;
struct PublicKeyTag;

using Hash256 = Bytes32<HashTag>;
using Address = Bytes32<AddressTag>;
using PublicKey = Bytes32<PublicKeyTag>;

/// Big-endian append-only encoder used for every canonical preimage in the
/// project (tx hashes, event digests, contract call payloads).
class ByteWriter {
public:
    ByteWriter& u8(std::uint8_t v);
    ByteWriter& u32(std::uint32_t v);
    ByteWriter& u64(std::uint64_t v);
    /// u64 left-padded to a 32-byte big-endian word.
    ByteWriter& word(std::uint64_t v);
    template <class Tag>
    ByteWriter& fixed(const Bytes32<Tag>& v)
    {
        return raw(v.span());
    }
    ByteWriter& raw(ByteSpan data);
    /// u32 length prefix followed by the bytes.
    ByteWriter& var(ByteSpan data);
    ByteWriter& str(std::string_view s) { return var(as_bytes(s)); }

    const Bytes& bytes() const& { return out_; }
    Bytes take() && { return std::move(out_); }

private:
    Bytes out_;
};

/// Counterpart of ByteWriter. Every read throws DecodeError when the input is
/// exhausted.
class ByteReader {
public:
    explicit ByteReader(ByteSpan in) : in_(in) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    template <class T>
    T fixed()
    {
        return T::from_span(take(32));
    }
    ByteSpan take(std::size_t n);
    Bytes var();
    std::string str();

    bool done() const { return pos_ == in_.size(); }
    std::size_t remaining() const { return in_.size() - pos_; }

private:
    ByteSpan in_;
    std::size_t pos_ = 0;
};

} // namespace twc

template <class Tag>
struct std::hash<twc::Bytes32<Tag>> {
    std::size_t operator()(const twc::Bytes32<Tag>& v) const noexcept
    {
        std::size_t h = 0;
        for (int i = 0; i < 8; ++i)
            h = (h << 8) | v.bytes[i];
        return h;
    }
};
