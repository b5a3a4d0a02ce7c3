#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "twc/common/bytes.hpp"
#include "twc/crypto/hash.hpp"

namespace twc::chain {

using crypto::HashAlg;

struct ChainConfig {
    std::string network_id;
    std::uint64_t block_time_ticks = 1;
    HashAlg hash_alg = HashAlg::keccak256;
    std::uint64_t finality_depth = 0;

    /// Throws ConfigError.
    void validate() const;
};

struct Transaction {
    Hash256 hash; ///< assigned by the chain on submission
    Address sender;
    Address recipient;
    Bytes payload;
    std::uint64_t value = 0;
    std::uint64_t nonce = 0; ///< per-sender sequence number

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

Hash256 compute_tx_hash(HashAlg alg, const Transaction& tx);

enum class TxStatus : std::uint8_t { success, reverted };

struct Receipt {
    TxStatus status = TxStatus::success;
    std::string revert_reason;

    bool ok() const { return status == TxStatus::success; }
    friend bool operator==(const Receipt&, const Receipt&) = default;
};

using Attribute = std::pair<std::string, Bytes>;

struct EventLog {
    Address emitter;
    std::string name;
    std::vector<Attribute> attributes;
    Hash256 tx_hash;
    std::uint64_t block_number = 0;

    /// Value of the first attribute named `key`, or nullptr.
    const Bytes* attribute(std::string_view key) const;

    friend bool operator==(const EventLog&, const EventLog&) = default;
};

Hash256 event_digest(HashAlg alg, const EventLog& e);

struct Block {
    std::uint64_t number = 0;
    Hash256 hash;
    Hash256 parent_hash;
    std::uint64_t tick = 0;
    std::uint32_t branch = 0; ///< fork counter; makes replacement blocks hash differently
    std::vector<Transaction> transactions;
    std::vector<Receipt> receipts; ///< parallel to transactions
    std::vector<EventLog> events;

    friend bool operator==(const Block&, const Block&) = default;
};

Hash256 compute_block_hash(HashAlg alg, std::string_view network_id, const Block& b);

struct TxLocation {
    Transaction tx;
    Receipt receipt;
    std::uint64_t block_number = 0;
    std::uint32_t index = 0;
};

} // namespace twc::chain
