#pragma once

#include <cstdint>
#include <string>

#include "twc/common/bytes.hpp"
#include "twc/crypto/hash.hpp"

namespace twc::crypto {

/// Cross-chain payload relayed from the source adapter to the destination
/// adapter.
struct TransferMessage {
    Hash256 source_tx_hash;
    Address source_adapter;
    Address recipient;
    Bytes encoded_call; ///< at least a 4-byte selector
    std::uint64_t gas = 0;
    std::uint64_t transfer_id = 0;
    std::string source_network_id;

    friend bool operator==(const TransferMessage&, const TransferMessage&) = default;

    /// Throws EncodingError if the encoded call is shorter than a selector.
    void validate() const;
};

/// Wire-canonical preimage:
///   source_tx_hash || source_adapter || recipient || encoded_call
///   || gas (32-byte BE) || transfer_id (32-byte BE) || network id (raw UTF-8)
Bytes transfer_preimage(const TransferMessage& m);

Hash256 compute_transfer_hash(const TransferMessage& m, HashAlg alg);

/// Length-delimited binary form used inside contract call payloads.
void write_transfer(ByteWriter& w, const TransferMessage& m);
TransferMessage read_transfer(ByteReader& r);

} // namespace twc::crypto
