#pragma once

#include <array>
#include <string>

#include "twc/common/bytes.hpp"

namespace twc::crypto {

struct SeedTag;
using Seed = Bytes32<SeedTag>;

/// Ed25519 detached signature.
using Signature = std::array<std::uint8_t, 64>;
inline constexpr std::size_t signature_size = 64;

struct Keypair {
    PublicKey public_key;
    std::array<std::uint8_t, 64> secret_key{}; ///< libsodium layout: seed || public key
};

/// A signatory's key material plus a human-readable label for reports.
struct SignatoryIdentity {
    std::string id;
    Keypair keys;
};

/// Deterministic: equal seeds give equal keypairs.
Keypair keygen(const Seed& seed);
/// Seed derived from an arbitrary label, for scenario configs.
Seed seed_from_label(std::string_view label);

Signature sign(const Keypair& keys, const Hash256& digest);
/// Never throws; malformed or truncated signatures simply fail.
bool verify(const PublicKey& pub, const Hash256& digest, ByteSpan signature);

} // namespace twc::crypto
