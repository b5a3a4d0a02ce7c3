#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "twc/chain/contract.hpp"
#include "twc/crypto/signature.hpp"
#include "twc/crypto/transfer.hpp"

namespace twc::adapter {

using chain::Json;
using crypto::TransferMessage;

/// Upper bound on the gas a requester may attach. Gas is carried, not metered.
inline constexpr std::uint64_t max_gas = 30'000'000;

struct AdapterConfig {
    Address owner;
    Address relayer;
    std::vector<PublicKey> signatories;
    std::uint32_t quorum = 1;
    std::uint64_t transaction_fee = 0;
    bool accept_only_authorized = false;
    std::set<Address> authorized_senders;
    Address remote_adapter;
};

/// Smallest quorum holding at least two thirds of `signatories`.
std::uint32_t two_thirds_quorum(std::size_t signatories);

struct AdapterState {
    Address owner;
    Address relayer;
    std::vector<PublicKey> signatories; ///< insertion order, no duplicates
    std::uint32_t quorum = 1;
    std::uint64_t transaction_fee = 0;
    bool accept_only_authorized = false;
    std::set<Address> authorized_senders;
    Address remote_adapter;
    std::uint64_t outbound_nonce = 0;
    std::uint64_t expected_inbound_nonce = 0;
    std::map<Hash256, std::uint64_t> processed; ///< source tx hash -> destination block
    std::uint64_t collected_fees = 0;

    bool is_signatory(const PublicKey& k) const;

    Json to_json() const;
    static AdapterState from_json(const Json& j);

    friend bool operator==(const AdapterState&, const AdapterState&) = default;
};

/// Throws ConfigError unless 1 <= quorum <= |signatories| and the signatory
/// keys are distinct.
AdapterState init_adapter(const AdapterConfig& config);

struct SignatureEntry {
    PublicKey public_key;
    Bytes signature;

    friend bool operator==(const SignatureEntry&, const SignatureEntry&) = default;
};

using SignatureBundle = std::vector<SignatureEntry>;

// Administrative changes. Each maps to one ConfigChanged field name.
struct SetRelayer {
    Address relayer;
};
struct SetSignatories {
    std::vector<PublicKey> signatories;
    std::uint32_t quorum = 1;
};
struct SetTransactionFee {
    std::uint64_t fee = 0;
};
struct SetAuthorizedSenders {
    bool accept_only_authorized = false;
    std::set<Address> senders;
};
struct SetRemoteAdapter {
    Address remote;
};

using AdminChange =
    std::variant<SetRelayer, SetSignatories, SetTransactionFee, SetAuthorizedSenders, SetRemoteAdapter>;

std::string_view field_name(const AdminChange& change);

// Contract call payloads. The first byte selects the entry point.
enum class Method : std::uint8_t { request_transfer = 1, process_transfer = 2, admin_set = 3 };

Bytes encode_request_transfer(const Address& recipient, ByteSpan encoded_call, std::uint64_t gas);
Bytes encode_process_transfer(const TransferMessage& m, const SignatureBundle& bundle);
Bytes encode_admin_set(const AdminChange& change);

struct ProcessTransferCall {
    TransferMessage message;
    SignatureBundle bundle;
};

/// nullopt unless `payload` is a well-formed processTransfer call.
std::optional<ProcessTransferCall> decode_process_transfer(ByteSpan payload);

// Events, with attributes in the order listed.
inline constexpr std::string_view ev_transfer_requested = "BridgeTransferRequested"; // transferId, recipientContract, encodedCall, gas
inline constexpr std::string_view ev_processed = "Processed";                  // sourceTxHash, transferId, callStatus
inline constexpr std::string_view ev_already_processed = "AlreadyProcessed";   // sourceTxHash, originalBlockNumber
inline constexpr std::string_view ev_config_changed = "ConfigChanged";         // field, oldValue, newValue

struct TransferRequested {
    std::uint64_t transfer_id = 0;
    Address recipient;
    Bytes encoded_call;
    std::uint64_t gas = 0;
};

struct Processed {
    Hash256 source_tx_hash;
    std::uint64_t transfer_id = 0;
    bool call_ok = false;
};

struct AlreadyProcessed {
    Hash256 source_tx_hash;
    std::uint64_t original_block = 0;
};

struct ConfigChanged {
    std::string field;
    Bytes old_value;
    Bytes new_value;
};

// Parsers throw DecodeError on a malformed event.
TransferRequested parse_transfer_requested(const chain::EventLog& e);
Processed parse_processed(const chain::EventLog& e);
AlreadyProcessed parse_already_processed(const chain::EventLog& e);
ConfigChanged parse_config_changed(const chain::EventLog& e);

/// Rebuilds the relayed message from a BridgeTransferRequested event.
TransferMessage message_from_event(const chain::EventLog& e, std::string_view source_network_id);

class Adapter final : public chain::Contract {
public:
    explicit Adapter(AdapterState state) : state_(std::move(state)) {}

    const AdapterState& state() const { return state_; }

    std::string_view kind() const override { return "adapter"; }
    std::unique_ptr<chain::Contract> clone() const override { return std::make_unique<Adapter>(*this); }
    chain::DispatchResult dispatch(chain::CallContext& ctx, ByteSpan payload) override;
    Json to_json() const override { return state_.to_json(); }

private:
    chain::DispatchResult request_transfer(chain::CallContext& ctx, ByteReader& in);
    chain::DispatchResult process_transfer(chain::CallContext& ctx, ByteReader& in);
    chain::DispatchResult admin_set(chain::CallContext& ctx, ByteReader& in);

    AdapterState state_;
};

} // namespace twc::adapter
