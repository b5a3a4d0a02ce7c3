#include "twc/crypto/abi.hpp"

#include <algorithm>

#include "twc/common/errors.hpp"
#include "twc/crypto/hash.hpp"

namespace twc::crypto {

namespace {

bool is_ident_start(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c)
{
    return is_ident_start(c) || (c >= '0' && c <= '9');
}

std::optional<AbiType> parse_type(std::string_view t)
{
    if (t == "uint64")
        return AbiType::uint64;
    if (t == "uint128")
        return AbiType::uint128;
    if (t == "address")
        return AbiType::address;
    return std::nullopt;
}

std::string_view type_name(AbiType t)
{
    switch (t) {
    case AbiType::uint64:
        return "uint64";
    case AbiType::uint128:
        return "uint128";
    case AbiType::address:
        return "address";
    }
    return "?";
}

bool leading_zero_bytes(const Word& w, std::size_t n)
{
    return std::all_of(w.bytes.begin(), w.bytes.begin() + n, [](auto b) { return b == 0; });
}

} // namespace

Word word_from_u128(Uint128 v)
{
    Word w;
    for (int i = 31; i >= 16; --i) {
        w.bytes[i] = static_cast<std::uint8_t>(v);
        v >>= 8;
    }
    return w;
}

Word word_from_address(const Address& a)
{
    return Word{a.bytes};
}

Uint128 word_to_u128(const Word& w)
{
    if (!leading_zero_bytes(w, 16))
        throw EncodingError("word does not fit in uint128");
    Uint128 v = 0;
    for (int i = 16; i < 32; ++i)
        v = (v << 8) | w.bytes[i];
    return v;
}

Address word_to_address(const Word& w)
{
    return Address{w.bytes};
}

std::string u128_to_string(Uint128 v)
{
    if (v == 0)
        return "0";
    std::string out;
    while (v > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

Uint128 u128_from_string(std::string_view s)
{
    if (s.empty())
        throw EncodingError("empty integer");
    constexpr Uint128 max = ~Uint128{0};
    Uint128 v = 0;
    for (char c : s) {
        if (c < '0' || c > '9')
            throw EncodingError("invalid digit in integer: " + std::string(s));
        unsigned d = static_cast<unsigned>(c - '0');
        if (v > (max - d) / 10)
            throw EncodingError("integer overflows uint128: " + std::string(s));
        v = v * 10 + d;
    }
    return v;
}

std::string FunctionSignature::text() const
{
    std::string out = name + "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i > 0)
            out += ',';
        out += type_name(params[i]);
    }
    return out + ")";
}

FunctionSignature parse_signature(std::string_view signature)
{
    auto open = signature.find('(');
    if (open == std::string_view::npos || signature.empty() || signature.back() != ')')
        throw EncodingError("malformed function signature: " + std::string(signature));

    FunctionSignature out;
    auto name = signature.substr(0, open);
    if (name.empty() || !is_ident_start(name.front()) ||
        !std::all_of(name.begin(), name.end(), is_ident_char))
        throw EncodingError("invalid function name in: " + std::string(signature));
    out.name = std::string(name);

    auto body = signature.substr(open + 1, signature.size() - open - 2);
    if (body.empty())
        return out;
    std::size_t start = 0;
    while (true) {
        auto comma = body.find(',', start);
        auto piece = body.substr(start, comma == std::string_view::npos ? body.npos : comma - start);
        auto type = parse_type(piece);
        if (!type)
            throw EncodingError("unsupported parameter type '" + std::string(piece) +
                                "' in: " + std::string(signature));
        out.params.push_back(*type);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

Selector selector_of(std::string_view signature)
{
    auto digest = keccak256(as_bytes(signature));
    Selector s;
    std::copy_n(digest.bytes.begin(), 4, s.begin());
    return s;
}

Selector EncodedCall::selector() const
{
    Selector s{};
    std::copy_n(bytes.begin(), std::min<std::size_t>(4, bytes.size()), s.begin());
    return s;
}

EncodedCall encode_function_call(std::string_view signature, const std::vector<Word>& args)
{
    auto sig = parse_signature(signature);
    if (sig.params.size() != args.size())
        throw EncodingError(sig.text() + " expects " + std::to_string(sig.params.size()) +
                            " arguments, got " + std::to_string(args.size()));

    for (std::size_t i = 0; i < args.size(); ++i) {
        bool fits = true;
        switch (sig.params[i]) {
        case AbiType::uint64:
            fits = leading_zero_bytes(args[i], 24);
            break;
        case AbiType::uint128:
            fits = leading_zero_bytes(args[i], 16);
            break;
        case AbiType::address:
            break;
        }
        if (!fits)
            throw EncodingError("argument " + std::to_string(i) + " does not fit " +
                                std::string(type_name(sig.params[i])));
    }

    EncodedCall out;
    auto sel = selector_of(sig.text());
    out.bytes.assign(sel.begin(), sel.end());
    for (const auto& a : args)
        out.bytes.insert(out.bytes.end(), a.bytes.begin(), a.bytes.end());
    return out;
}

void CallDecoder::add(std::string_view signature)
{
    auto sig = parse_signature(signature);
    entries_.push_back({selector_of(sig.text()), std::move(sig)});
}

std::optional<DecodedCall> CallDecoder::decode(ByteSpan call) const
{
    if (call.size() < 4)
        return std::nullopt;
    for (const auto& e : entries_) {
        if (!std::equal(e.selector.begin(), e.selector.end(), call.begin()))
            continue;
        if (call.size() != 4 + 32 * e.signature.params.size())
            return std::nullopt;
        DecodedCall out{e.signature.name, {}};
        for (std::size_t i = 0; i < e.signature.params.size(); ++i)
            out.args.push_back(Word::from_span(call.subspan(4 + 32 * i, 32)));
        return out;
    }
    return std::nullopt;
}

} // namespace twc::crypto
