#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twc/common/bytes.hpp"

namespace twc::crypto {

using Uint128 = unsigned __int128;

struct WordTag;
/// One 32-byte big-endian ABI argument slot.
using Word = Bytes32<WordTag>;

Word word_from_u128(Uint128 v);
Word word_from_address(const Address& a);
/// Throws EncodingError when the word does not fit in 128 bits.
Uint128 word_to_u128(const Word& w);
Address word_to_address(const Word& w);

std::string u128_to_string(Uint128 v);
/// Decimal, throws EncodingError on overflow or junk.
Uint128 u128_from_string(std::string_view s);

enum class AbiType : std::uint8_t { uint64, uint128, address };

struct FunctionSignature {
    std::string name;
    std::vector<AbiType> params;

    /// Canonical text form, e.g. "setValue(uint128)".
    std::string text() const;
};

/// Parses `name(type,...)` with types drawn from {uint64, uint128, address}.
/// No whitespace is allowed. Throws EncodingError.
FunctionSignature parse_signature(std::string_view signature);

using Selector = std::array<std::uint8_t, 4>;

/// First four bytes of keccak256 over the signature text, independent of the
/// chain's own hash algorithm.
Selector selector_of(std::string_view signature);

struct EncodedCall {
    Bytes bytes; ///< selector followed by 32-byte argument words

    Selector selector() const;
    std::size_t arg_count() const { return (bytes.size() - 4) / 32; }
};

/// Encodes a call with fixed-width arguments. Throws EncodingError on a
/// malformed signature, an argument count mismatch, or a value that does not
/// fit its declared type.
EncodedCall encode_function_call(std::string_view signature, const std::vector<Word>& args);

struct DecodedCall {
    std::string name;
    std::vector<Word> args;
};

/// Selector table held by a user contract to dispatch incoming calls.
class CallDecoder {
public:
    void add(std::string_view signature);
    std::optional<DecodedCall> decode(ByteSpan call) const;

private:
    struct Entry {
        Selector selector;
        FunctionSignature signature;
    };
    std::vector<Entry> entries_;
};

} // namespace twc::crypto
