#include "twc/adapter/adapter.hpp"

#include <algorithm>

#include "twc/common/errors.hpp"

namespace twc::adapter {

using chain::CallContext;
using chain::DispatchResult;
using chain::EventLog;

namespace {

Bytes u64_bytes(std::uint64_t v)
{
    ByteWriter w;
    w.u64(v);
    return std::move(w).take();
}

Bytes signatories_bytes(const std::vector<PublicKey>& keys, std::uint32_t quorum)
{
    ByteWriter w;
    w.u32(quorum).u32(static_cast<std::uint32_t>(keys.size()));
    for (const auto& k : keys)
        w.fixed(k);
    return std::move(w).take();
}

Bytes senders_bytes(bool accept_only, const std::set<Address>& senders)
{
    ByteWriter w;
    w.u8(accept_only ? 1 : 0).u32(static_cast<std::uint32_t>(senders.size()));
    for (const auto& a : senders)
        w.fixed(a);
    return std::move(w).take();
}

Bytes change_value(const AdminChange& change)
{
    return std::visit(
        [](const auto& c) -> Bytes {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SetRelayer>)
                return Bytes(c.relayer.bytes.begin(), c.relayer.bytes.end());
            else if constexpr (std::is_same_v<T, SetSignatories>)
                return signatories_bytes(c.signatories, c.quorum);
            else if constexpr (std::is_same_v<T, SetTransactionFee>)
                return u64_bytes(c.fee);
            else if constexpr (std::is_same_v<T, SetAuthorizedSenders>)
                return senders_bytes(c.accept_only_authorized, c.senders);
            else
                return Bytes(c.remote.bytes.begin(), c.remote.bytes.end());
        },
        change);
}

/// Current value of the field `change` would overwrite, in the same encoding.
Bytes current_value(const AdapterState& s, const AdminChange& change)
{
    switch (change.index()) {
    case 0:
        return Bytes(s.relayer.bytes.begin(), s.relayer.bytes.end());
    case 1:
        return signatories_bytes(s.signatories, s.quorum);
    case 2:
        return u64_bytes(s.transaction_fee);
    case 3:
        return senders_bytes(s.accept_only_authorized, s.authorized_senders);
    default:
        return Bytes(s.remote_adapter.bytes.begin(), s.remote_adapter.bytes.end());
    }
}

AdminChange read_change(ByteReader& r)
{
    switch (r.u8()) {
    case 0:
        return SetRelayer{r.fixed<Address>()};
    case 1: {
        SetSignatories c;
        c.quorum = r.u32();
        auto n = r.u32();
        if (n > r.remaining() / 32)
            throw DecodeError("signatory count exceeds payload");
        for (std::uint32_t i = 0; i < n; ++i)
            c.signatories.push_back(r.fixed<PublicKey>());
        return c;
    }
    case 2:
        return SetTransactionFee{r.u64()};
    case 3: {
        SetAuthorizedSenders c;
        c.accept_only_authorized = r.u8() != 0;
        auto n = r.u32();
        if (n > r.remaining() / 32)
            throw DecodeError("sender count exceeds payload");
        for (std::uint32_t i = 0; i < n; ++i)
            c.senders.insert(r.fixed<Address>());
        return c;
    }
    case 4:
        return SetRemoteAdapter{r.fixed<Address>()};
    default:
        throw DecodeError("unknown admin field");
    }
}

void check_signatories(const std::vector<PublicKey>& keys, std::uint32_t quorum)
{
    if (quorum < 1 || quorum > keys.size())
        throw ConfigError("quorum " + std::to_string(quorum) + " outside [1, " +
                          std::to_string(keys.size()) + "]");
    std::set<PublicKey> distinct(keys.begin(), keys.end());
    if (distinct.size() != keys.size())
        throw ConfigError("duplicate signatory key");
}

const Bytes& need(const EventLog& e, std::string_view name, std::string_view key)
{
    if (e.name != name)
        throw DecodeError("expected " + std::string(name) + " event, got " + e.name);
    const Bytes* v = e.attribute(key);
    if (!v)
        throw DecodeError(std::string(name) + " lacks attribute " + std::string(key));
    return *v;
}

std::uint64_t need_u64(const EventLog& e, std::string_view name, std::string_view key)
{
    const Bytes& v = need(e, name, key);
    if (v.size() != 8)
        throw DecodeError(std::string(key) + " is not 8 bytes");
    ByteReader r(v);
    return r.u64();
}

template <class T>
T need_fixed(const EventLog& e, std::string_view name, std::string_view key)
{
    try {
        return T::from_span(need(e, name, key));
    } catch (const std::invalid_argument& ex) {
        throw DecodeError(std::string(key) + ": " + ex.what());
    }
}

Json hex_list(const auto& items)
{
    Json out = Json::array();
    for (const auto& i : items)
        out.push_back(i.hex());
    return out;
}

} // namespace

std::uint32_t two_thirds_quorum(std::size_t signatories)
{
    return static_cast<std::uint32_t>((2 * signatories + 2) / 3);
}

bool AdapterState::is_signatory(const PublicKey& k) const
{
    return std::find(signatories.begin(), signatories.end(), k) != signatories.end();
}

Json AdapterState::to_json() const
{
    Json j;
    j["owner"] = owner.hex();
    j["relayer"] = relayer.hex();
    j["signatories"] = hex_list(signatories);
    j["quorum"] = quorum;
    j["transactionFee"] = transaction_fee;
    j["acceptOnlyAuthorizedSenders"] = accept_only_authorized;
    j["authorizedSenders"] = hex_list(authorized_senders);
    j["remoteAdapterAddress"] = remote_adapter.hex();
    j["outboundNonce"] = outbound_nonce;
    j["expectedInboundNonce"] = expected_inbound_nonce;
    j["processed"] = Json::object();
    for (const auto& [h, n] : processed)
        j["processed"][h.hex()] = n;
    j["collectedFees"] = collected_fees;
    return j;
}

AdapterState AdapterState::from_json(const Json& j)
{
    AdapterState s;
    s.owner = Address::from_hex(j.at("owner").get<std::string>());
    s.relayer = Address::from_hex(j.at("relayer").get<std::string>());
    for (const auto& k : j.at("signatories"))
        s.signatories.push_back(PublicKey::from_hex(k.get<std::string>()));
    s.quorum = j.at("quorum").get<std::uint32_t>();
    s.transaction_fee = j.at("transactionFee").get<std::uint64_t>();
    s.accept_only_authorized = j.at("acceptOnlyAuthorizedSenders").get<bool>();
    for (const auto& a : j.at("authorizedSenders"))
        s.authorized_senders.insert(Address::from_hex(a.get<std::string>()));
    s.remote_adapter = Address::from_hex(j.at("remoteAdapterAddress").get<std::string>());
    s.outbound_nonce = j.at("outboundNonce").get<std::uint64_t>();
    s.expected_inbound_nonce = j.at("expectedInboundNonce").get<std::uint64_t>();
    for (const auto& [h, n] : j.at("processed").items())
        s.processed.emplace(Hash256::from_hex(h), n.get<std::uint64_t>());
    s.collected_fees = j.at("collectedFees").get<std::uint64_t>();
    return s;
}

AdapterState init_adapter(const AdapterConfig& config)
{
    check_signatories(config.signatories, config.quorum);
    AdapterState s;
    s.owner = config.owner;
    s.relayer = config.relayer;
    s.signatories = config.signatories;
    s.quorum = config.quorum;
    s.transaction_fee = config.transaction_fee;
    s.accept_only_authorized = config.accept_only_authorized;
    s.authorized_senders = config.authorized_senders;
    s.remote_adapter = config.remote_adapter;
    return s;
}

std::string_view field_name(const AdminChange& change)
{
    static constexpr std::string_view names[] = {"relayer", "signatories", "transactionFee",
                                                 "authorizedSenders", "remoteAdapterAddress"};
    return names[change.index()];
}

Bytes encode_request_transfer(const Address& recipient, ByteSpan encoded_call, std::uint64_t gas)
{
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(Method::request_transfer)).fixed(recipient).var(encoded_call).u64(gas);
    return std::move(w).take();
}

Bytes encode_process_transfer(const TransferMessage& m, const SignatureBundle& bundle)
{
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(Method::process_transfer));
    crypto::write_transfer(w, m);
    w.u32(static_cast<std::uint32_t>(bundle.size()));
    for (const auto& e : bundle)
        w.fixed(e.public_key).var(e.signature);
    return std::move(w).take();
}

Bytes encode_admin_set(const AdminChange& change)
{
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(Method::admin_set)).u8(static_cast<std::uint8_t>(change.index()));
    w.raw(change_value(change));
    return std::move(w).take();
}

namespace {

ProcessTransferCall read_process_transfer(ByteReader& r)
{
    ProcessTransferCall call;
    call.message = crypto::read_transfer(r);
    auto n = r.u32();
    if (n > r.remaining() / 36)
        throw DecodeError("bundle count exceeds payload");
    for (std::uint32_t i = 0; i < n; ++i) {
        SignatureEntry e;
        e.public_key = r.fixed<PublicKey>();
        e.signature = r.var();
        call.bundle.push_back(std::move(e));
    }
    if (!r.done())
        throw DecodeError("trailing bytes after processTransfer");
    return call;
}

} // namespace

std::optional<ProcessTransferCall> decode_process_transfer(ByteSpan payload)
{
    try {
        ByteReader r(payload);
        if (r.u8() != static_cast<std::uint8_t>(Method::process_transfer))
            return std::nullopt;
        return read_process_transfer(r);
    } catch (const Error&) {
        return std::nullopt;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

TransferRequested parse_transfer_requested(const EventLog& e)
{
    TransferRequested t;
    t.transfer_id = need_u64(e, ev_transfer_requested, "transferId");
    t.recipient = need_fixed<Address>(e, ev_transfer_requested, "recipientContract");
    t.encoded_call = need(e, ev_transfer_requested, "encodedCall");
    t.gas = need_u64(e, ev_transfer_requested, "gas");
    return t;
}

Processed parse_processed(const EventLog& e)
{
    Processed p;
    p.source_tx_hash = need_fixed<Hash256>(e, ev_processed, "sourceTxHash");
    p.transfer_id = need_u64(e, ev_processed, "transferId");
    const Bytes& status = need(e, ev_processed, "callStatus");
    if (status.size() != 1)
        throw DecodeError("callStatus is not 1 byte");
    p.call_ok = status[0] != 0;
    return p;
}

AlreadyProcessed parse_already_processed(const EventLog& e)
{
    AlreadyProcessed a;
    a.source_tx_hash = need_fixed<Hash256>(e, ev_already_processed, "sourceTxHash");
    a.original_block = need_u64(e, ev_already_processed, "originalBlockNumber");
    return a;
}

ConfigChanged parse_config_changed(const EventLog& e)
{
    const Bytes& field = need(e, ev_config_changed, "field");
    return ConfigChanged{std::string(field.begin(), field.end()), need(e, ev_config_changed, "oldValue"),
                         need(e, ev_config_changed, "newValue")};
}

TransferMessage message_from_event(const EventLog& e, std::string_view source_network_id)
{
    auto t = parse_transfer_requested(e);
    TransferMessage m;
    m.source_tx_hash = e.tx_hash;
    m.source_adapter = e.emitter;
    m.recipient = t.recipient;
    m.encoded_call = std::move(t.encoded_call);
    m.gas = t.gas;
    m.transfer_id = t.transfer_id;
    m.source_network_id = std::string(source_network_id);
    return m;
}

DispatchResult Adapter::dispatch(CallContext& ctx, ByteSpan payload)
{
    ByteReader in(payload);
    switch (static_cast<Method>(in.u8())) {
    case Method::request_transfer:
        return request_transfer(ctx, in);
    case Method::process_transfer:
        return process_transfer(ctx, in);
    case Method::admin_set:
        return admin_set(ctx, in);
    }
    return DispatchResult::revert("UnknownMethod");
}

DispatchResult Adapter::request_transfer(CallContext& ctx, ByteReader& in)
{
    auto recipient = in.fixed<Address>();
    auto call = in.var();
    auto gas = in.u64();
    if (!in.done())
        throw DecodeError("trailing bytes after requestTransfer");

    if (ctx.value() < state_.transaction_fee)
        return DispatchResult::revert("FeeTooLow");
    if (state_.accept_only_authorized && !state_.authorized_senders.contains(ctx.sender()))
        return DispatchResult::revert("Unauthorized");
    if (call.size() < 4)
        return DispatchResult::revert("MalformedCall");
    if (gas > max_gas)
        return DispatchResult::revert("GasTooHigh");

    auto id = state_.outbound_nonce++;
    state_.collected_fees += state_.transaction_fee;
    auto refund = ctx.value() - state_.transaction_fee;
    if (refund > 0 && !ctx.transfer(ctx.sender(), refund))
        return DispatchResult::revert("RefundFailed");

    ctx.emit(std::string(ev_transfer_requested),
             {{"transferId", u64_bytes(id)},
              {"recipientContract", Bytes(recipient.bytes.begin(), recipient.bytes.end())},
              {"encodedCall", std::move(call)},
              {"gas", u64_bytes(gas)}});
    return DispatchResult::success();
}

DispatchResult Adapter::process_transfer(CallContext& ctx, ByteReader& in)
{
    auto call = read_process_transfer(in);
    const auto& m = call.message;

    if (ctx.sender() != state_.relayer)
        return DispatchResult::revert("NotRelayer");

    if (auto it = state_.processed.find(m.source_tx_hash); it != state_.processed.end()) {
        ctx.emit(std::string(ev_already_processed),
                 {{"sourceTxHash", Bytes(m.source_tx_hash.bytes.begin(), m.source_tx_hash.bytes.end())},
                  {"originalBlockNumber", u64_bytes(it->second)}});
        return DispatchResult::success();
    }

    if (m.transfer_id != state_.expected_inbound_nonce)
        return DispatchResult::revert("OutOfOrder");

    auto digest = crypto::compute_transfer_hash(m, ctx.hash_alg());
    std::set<PublicKey> signers;
    for (const auto& e : call.bundle) {
        if (!state_.is_signatory(e.public_key) || !crypto::verify(e.public_key, digest, e.signature))
            return DispatchResult::revert("InvalidSignature");
        signers.insert(e.public_key);
    }
    if (signers.size() < state_.quorum)
        return DispatchResult::revert("InsufficientSignatures");

    bool call_ok = ctx.is_contract(m.recipient) && ctx.call(m.recipient, m.encoded_call).ok;

    state_.processed.emplace(m.source_tx_hash, ctx.block_number());
    ++state_.expected_inbound_nonce;
    ctx.emit(std::string(ev_processed),
             {{"sourceTxHash", Bytes(m.source_tx_hash.bytes.begin(), m.source_tx_hash.bytes.end())},
              {"transferId", u64_bytes(m.transfer_id)},
              {"callStatus", Bytes{static_cast<std::uint8_t>(call_ok ? 1 : 0)}}});
    return DispatchResult::success();
}

DispatchResult Adapter::admin_set(CallContext& ctx, ByteReader& in)
{
    auto change = read_change(in);
    if (!in.done())
        throw DecodeError("trailing bytes after adminSet");
    if (ctx.sender() != state_.owner)
        return DispatchResult::revert("NotOwner");

    auto old_value = current_value(state_, change);
    switch (change.index()) {
    case 0:
        state_.relayer = std::get<SetRelayer>(change).relayer;
        break;
    case 1: {
        auto& c = std::get<SetSignatories>(change);
        try {
            check_signatories(c.signatories, c.quorum);
        } catch (const ConfigError&) {
            return DispatchResult::revert("ConfigError");
        }
        state_.signatories = c.signatories;
        state_.quorum = c.quorum;
        break;
    }
    case 2:
        state_.transaction_fee = std::get<SetTransactionFee>(change).fee;
        break;
    case 3: {
        auto& c = std::get<SetAuthorizedSenders>(change);
        state_.accept_only_authorized = c.accept_only_authorized;
        state_.authorized_senders = c.senders;
        break;
    }
    default:
        state_.remote_adapter = std::get<SetRemoteAdapter>(change).remote;
        break;
    }

    auto name = field_name(change);
    ctx.emit(std::string(ev_config_changed),
             {{"field", Bytes(name.begin(), name.end())},
              {"oldValue", std::move(old_value)},
              {"newValue", change_value(change)}});
    return DispatchResult::success();
}

} // namespace twc::adapter
