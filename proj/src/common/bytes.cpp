#include "twc/common/bytes.hpp"

#include "twc/common/errors.hpp"

namespace twc {

namespace {

int hex_value(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

} // namespace

std::string to_hex(ByteSpan data)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex)
{
    if (hex.starts_with("0x") || hex.starts_with("0X"))
        hex.remove_prefix(2);
    if (hex.size() % 2 != 0)
        throw std::invalid_argument("odd-length hex string");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("invalid hex character");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

ByteWriter& ByteWriter::u8(std::uint8_t v)
{
    out_.push_back(v);
    return *this;
}

ByteWriter& ByteWriter::u32(std::uint32_t v)
{
    for (int shift = 24; shift >= 0; shift -= 8)
        out_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
}

ByteWriter& ByteWriter::u64(std::uint64_t v)
{
    for (int shift = 56; shift >= 0; shift -= 8)
        out_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
}

ByteWriter& ByteWriter::word(std::uint64_t v)
{
    out_.insert(out_.end(), 24, 0);
    return u64(v);
}

ByteWriter& ByteWriter::raw(ByteSpan data)
{
    out_.insert(out_.end(), data.begin(), data.end());
    return *this;
}

ByteWriter& ByteWriter::var(ByteSpan data)
{
    u32(static_cast<std::uint32_t>(data.size()));
    return raw(data);
}

ByteSpan ByteReader::take(std::size_t n)
{
    if (n > remaining())
        throw DecodeError("truncated input: need " + std::to_string(n) + " bytes, have " +
                          std::to_string(remaining()));
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint8_t ByteReader::u8()
{
    return take(1)[0];
}

std::uint32_t ByteReader::u32()
{
    std::uint32_t v = 0;
    for (auto b : take(4))
        v = (v << 8) | b;
    return v;
}

std::uint64_t ByteReader::u64()
{
    std::uint64_t v = 0;
    for (auto b : take(8))
        v = (v << 8) | b;
    return v;
}

Bytes ByteReader::var()
{
    auto n = u32();
    auto s = take(n);
    return Bytes(s.begin(), s.end());
}

std::string ByteReader::str()
{
    auto b = var();
    return std::string(b.begin(), b.end());
}

} // namespace twc
