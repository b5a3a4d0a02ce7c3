#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "twc/bridge/bridge.hpp"
#include "twc/chain/types.hpp"
#include "twc/crypto/abi.hpp"
#include "twc/signatory/signatory.hpp"

namespace twc::harness {

using chain::Json;
using crypto::Uint128;

enum class Impact : std::uint8_t { low, medium, high };

std::string_view to_string(Impact i);
std::optional<Impact> parse_impact(std::string_view s);

// Every actor, account and contract is named by a label; address_of(label)
// gives its address. Contracts live at these fixed labels.
inline constexpr std::string_view source_adapter_label = "source.adapter";
inline constexpr std::string_view dest_adapter_label = "dest.adapter";
inline constexpr std::string_view source_token_label = "source.token";
inline constexpr std::string_view dest_token_label = "dest.token";
inline constexpr std::string_view dest_storage_label = "dest.storage";

enum class Side : std::uint8_t { source, dest };
std::string_view to_string(Side s);

/// Public key of the signing key derived from `label`.
PublicKey signing_key_of(std::string_view label);
crypto::Keypair keypair_of(std::string_view label);

struct AdapterSetup {
    std::string owner = "owner";
    std::string relayer = "relayer";
    std::optional<std::uint32_t> quorum; ///< two thirds of the signatories when absent
    std::uint64_t transaction_fee = 0;
    bool accept_only_authorized = false;
    std::vector<std::string> authorized_senders;
};

struct SignatorySetup {
    std::string id;
    std::string seed; ///< key label
    signatory::Behavior behavior = signatory::Behavior::honest;
};

struct RateLimitSetup {
    std::uint64_t budget = 0;
    std::uint64_t window_ticks = 1;
};

struct BridgeSetup {
    std::optional<std::uint64_t> source_finality; ///< defaults to the source chain's finality depth
    std::optional<std::uint64_t> dest_finality;
    std::uint64_t sign_timeout_ticks = 4;
    std::uint64_t submit_timeout_ticks = 4;
    std::uint32_t max_retries = 3;
    std::uint64_t liveness_timeout_ticks = 20;
    bridge::ReorgResponse reorg_response = bridge::ReorgResponse::retry;
    std::uint64_t lookahead = 16;
    std::optional<std::uint64_t> censor;
    bool replay = false;
};

struct MonitorSetup {
    bool enabled = true;
    bool auto_pause = false;
};

/// A destination call, resolved to bytes at run time.
struct SetValueCall {
    Uint128 value = 0;
};
struct MintCall {
    std::string to;
    Uint128 amount = 0;
};
struct RawCall {
    Bytes bytes;
};
using CallSpec = std::variant<SetValueCall, MintCall, RawCall>;

Bytes encode_call(const CallSpec& c);

struct Trigger {
    struct Confirmations {
        std::uint64_t request = 0; ///< index of a harness-issued request
        std::uint64_t depth = 0;
    };
    std::optional<std::uint64_t> tick;
    std::optional<std::uint64_t> delivered; ///< transfer id processed on the destination
    std::optional<Confirmations> source_confirmations;
};

struct RequestTransfer {
    std::string from = "user";
    std::string recipient = std::string(dest_storage_label);
    CallSpec call = SetValueCall{1};
    std::uint64_t gas = 100'000;
    std::optional<std::uint64_t> value; ///< defaults to the source adapter fee
};

struct BridgeOut {
    std::string from = "user";
    std::string to = "user";
    Uint128 amount = 0;
};

struct InjectReorg {
    Side chain = Side::source;
    std::optional<std::uint64_t> depth;
    std::optional<std::uint64_t> orphan_request; ///< reorg deep enough to orphan this request's block
    std::uint64_t extra = 0;
    std::vector<std::uint64_t> drop;              ///< request indices to drop from the replacement branch
};

struct RestoreView {};
struct SubstituteHash {
    std::uint64_t request = 0; ///< lie about the hash of the block holding this request
};
struct FabricateTransfer {
    std::string recipient;
    CallSpec call;
    std::uint64_t gas = 100'000;
};
struct HideRequests {};
struct FreezeHead {};
using Corruption = std::variant<RestoreView, SubstituteHash, FabricateTransfer, HideRequests, FreezeHead>;

struct InstallView {
    std::vector<std::string> actors; ///< "bridge" or "signatory:<id>"; "signatories" expands to all
    Side chain = Side::source;
    Corruption corruption;
};

struct SetRelayerSpec {
    std::string relayer;
};
struct SetSignatoriesSpec {
    std::vector<std::string> keys;
    std::optional<std::uint32_t> quorum;
};
struct SetFeeSpec {
    std::uint64_t fee = 0;
};
struct SetAuthorizedSpec {
    bool accept_only = false;
    std::vector<std::string> senders;
};
struct SetRemoteSpec {
    std::string remote;
};
using AdminSpec = std::variant<SetRelayerSpec, SetSignatoriesSpec, SetFeeSpec, SetAuthorizedSpec, SetRemoteSpec>;

struct AdminSet {
    Side chain = Side::dest;
    std::string from = "owner";
    AdminSpec change;
    bool declared = false; ///< expected by the operator; the monitor stays quiet
};

struct Pause {};
struct Resume {};

struct Forge {
    std::string recipient;
    CallSpec call;
    std::uint64_t gas = 100'000;
};

struct Flood {
    std::uint64_t count = 0;
};

/// A processTransfer sent straight to the destination adapter, bypassing
/// bridge and signatories.
struct ForgedProcessTransfer {
    std::string from = "attacker";
    std::string recipient;
    CallSpec call;
    std::uint64_t gas = 100'000;
    std::vector<std::string> signers;
    std::optional<std::uint64_t> transfer_id; ///< defaults to the destination's expected id
};

struct HaltChain {
    Side chain = Side::source;
};
struct ResumeChain {
    Side chain = Side::source;
};

using WorkloadAction = std::variant<RequestTransfer, BridgeOut, InjectReorg, InstallView, AdminSet, Pause, Resume,
                                    Forge, Flood, ForgedProcessTransfer, HaltChain, ResumeChain>;

struct WorkloadItem {
    Trigger when;
    WorkloadAction action;
    std::uint64_t count = 1;
    std::uint64_t every = 1;
};

struct Scenario {
    std::string name;
    std::string description;
    std::uint64_t seed = 0;
    std::uint64_t max_ticks = 100;
    std::optional<Impact> predicted;
    std::string risk; ///< carried through to the report, never simulated

    chain::ChainConfig source_chain{"source-net", 1, crypto::HashAlg::keccak256, 6};
    chain::ChainConfig dest_chain{"dest-net", 1, crypto::HashAlg::blake2b256, 6};
    AdapterSetup source_adapter;
    AdapterSetup dest_adapter;
    std::vector<SignatorySetup> signatories;
    RateLimitSetup rate_limit;
    BridgeSetup bridge;
    MonitorSetup monitor;
    bool tokens = false;
    Uint128 token_allocation = 0; ///< issued to "user" on the source token at genesis
    std::vector<std::string> funded; ///< extra accounts funded at genesis
    std::vector<WorkloadItem> workload;

    /// Throws ConfigError on anything inconsistent.
    void validate() const;
};

/// Throws ConfigError on unknown fields, wrong types or invalid values.
Scenario parse_scenario(const Json& j);
Scenario load_scenario(const std::string& path);

} // namespace twc::harness
