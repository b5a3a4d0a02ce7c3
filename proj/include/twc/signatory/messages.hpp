#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twc/chain/contract.hpp"
#include "twc/crypto/transfer.hpp"

namespace twc::signatory {

using chain::Json;
using crypto::TransferMessage;

/// What the bridge asks a signatory to attest.
struct SigningRequest {
    std::uint64_t source_block_number = 0;
    Hash256 source_block_hash;
    Hash256 source_tx_hash;
    Hash256 transfer_data_hash; ///< claimed by the requester, never trusted
    TransferMessage transfer;   ///< echoed so the signatory can recompute the hash

    friend bool operator==(const SigningRequest&, const SigningRequest&) = default;
};

enum class RefusalReason : std::uint8_t {
    block_hash_mismatch,
    insufficient_finality,
    tx_not_found,
    data_hash_mismatch,
};

std::string_view to_string(RefusalReason r);
std::optional<RefusalReason> parse_refusal(std::string_view s);

struct SignResponse {
    bool signed_ok = false;
    std::string signatory_id;
    Hash256 source_tx_hash;     ///< correlates the response with its request
    Hash256 transfer_data_hash;
    PublicKey public_key;       ///< when signed
    Bytes signature;            ///< when signed
    RefusalReason reason = RefusalReason::tx_not_found; ///< when refused

    friend bool operator==(const SignResponse&, const SignResponse&) = default;
};

// Canonical structured encoding. Byte fields are lowercase hex, key order is
// fixed. Decoders throw DecodeError.
Json to_json(const TransferMessage& m);
TransferMessage transfer_from_json(const Json& j);
Json to_json(const SigningRequest& r);
SigningRequest request_from_json(const Json& j);
Json to_json(const SignResponse& r);
SignResponse response_from_json(const Json& j);

/// 4-byte big-endian length prefix followed by the payload.
Bytes encode_frame(std::string_view payload);

/// Incremental splitter for a stream of frames.
class FrameDecoder {
public:
    explicit FrameDecoder(std::size_t max_frame = 1 << 20) : max_frame_(max_frame) {}

    void feed(ByteSpan data);
    /// Next complete payload, if any. Throws DecodeError when a length prefix
    /// exceeds the configured maximum.
    std::optional<std::string> next();
    std::size_t buffered() const { return buf_.size(); }

private:
    std::size_t max_frame_;
    Bytes buf_;
};

} // namespace twc::signatory
