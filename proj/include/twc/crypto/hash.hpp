#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "twc/common/bytes.hpp"

namespace twc::crypto {

enum class HashAlg : std::uint8_t { keccak256, blake2b256 };

std::string_view to_string(HashAlg alg);
std::optional<HashAlg> parse_hash_alg(std::string_view name);

/// Original Keccak-256 (0x01 padding), as used by Ethereum.
Hash256 keccak256(ByteSpan data);
/// BLAKE2b with a 32-byte digest, no key.
Hash256 blake2b256(ByteSpan data);

Hash256 hash(HashAlg alg, ByteSpan data);

namespace detail {
/// Keccak sponge at rate 136 with a caller-chosen domain byte: 0x01 gives
/// Keccak-256, 0x06 gives FIPS-202 SHA3-256.
Hash256 keccak_sponge_256(ByteSpan data, std::uint8_t domain);
} // namespace detail

} // namespace twc::crypto

namespace twc {

/// Deterministic account address for a human-readable label.
Address address_of(std::string_view label);

} // namespace twc
