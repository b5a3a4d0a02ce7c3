#include "twc/harness/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "twc/common/errors.hpp"
#include "twc/contracts/storage.hpp"
#include "twc/contracts/token.hpp"

namespace twc::harness {

namespace {

constexpr std::string_view impact_names[] = {"low", "medium", "high"};

/// Reads one JSON object, remembering which keys were consumed so that
/// unknown keys can be rejected.
class Fields {
public:
    Fields(const Json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ConfigError(path_ + ": expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& raw(const std::string& key)
    {
        used_.insert(key);
        if (!j_.contains(key))
            throw ConfigError(path_ + "." + key + ": missing");
        return j_.at(key);
    }

    std::string where(const std::string& key) const { return path_ + "." + key; }

    std::string str(const std::string& key)
    {
        const auto& v = raw(key);
        if (!v.is_string())
            throw ConfigError(where(key) + ": expected a string");
        return v.get<std::string>();
    }
    std::string str(const std::string& key, std::string fallback) { return has(key) ? str(key) : fallback; }

    std::uint64_t u64(const std::string& key)
    {
        const auto& v = raw(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            throw ConfigError(where(key) + ": expected a non-negative integer");
        return v.get<std::uint64_t>();
    }
    std::uint64_t u64(const std::string& key, std::uint64_t fallback) { return has(key) ? u64(key) : fallback; }
    std::optional<std::uint64_t> opt_u64(const std::string& key)
    {
        return has(key) ? std::optional(u64(key)) : std::nullopt;
    }

    std::uint32_t u32(const std::string& key, std::uint32_t fallback)
    {
        auto v = u64(key, fallback);
        if (v > UINT32_MAX)
            throw ConfigError(where(key) + ": out of range");
        return static_cast<std::uint32_t>(v);
    }

    bool flag(const std::string& key, bool fallback)
    {
        if (!has(key))
            return fallback;
        const auto& v = raw(key);
        if (!v.is_boolean())
            throw ConfigError(where(key) + ": expected true or false");
        return v.get<bool>();
    }

    Uint128 u128(const std::string& key)
    {
        const auto& v = raw(key);
        if (v.is_number_unsigned())
            return v.get<std::uint64_t>();
        if (v.is_string()) {
            try {
                return crypto::u128_from_string(v.get<std::string>());
            } catch (const EncodingError& e) {
                throw ConfigError(where(key) + ": " + e.what());
            }
        }
        throw ConfigError(where(key) + ": expected a decimal string or integer");
    }

    std::vector<std::string> strings(const std::string& key)
    {
        std::vector<std::string> out;
        if (!has(key))
            return out;
        const auto& v = raw(key);
        if (!v.is_array())
            throw ConfigError(where(key) + ": expected an array of strings");
        for (const auto& s : v) {
            if (!s.is_string())
                throw ConfigError(where(key) + ": expected an array of strings");
            out.push_back(s.get<std::string>());
        }
        return out;
    }

    std::vector<std::uint64_t> numbers(const std::string& key)
    {
        std::vector<std::uint64_t> out;
        if (!has(key))
            return out;
        const auto& v = raw(key);
        if (!v.is_array())
            throw ConfigError(where(key) + ": expected an array of integers");
        for (const auto& n : v) {
            if (!n.is_number_unsigned() && !(n.is_number_integer() && n.get<std::int64_t>() >= 0))
                throw ConfigError(where(key) + ": expected an array of integers");
            out.push_back(n.get<std::uint64_t>());
        }
        return out;
    }

    Fields object(const std::string& key) { return Fields(raw(key), where(key)); }

    void finish() const
    {
        for (const auto& [k, _] : j_.items())
            if (!used_.contains(k))
                throw ConfigError(path_ + ": unknown field '" + k + "'");
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> used_;
};

Side parse_side(Fields& f, const std::string& key, Side fallback)
{
    if (!f.has(key))
        return fallback;
    auto s = f.str(key);
    if (s == "source")
        return Side::source;
    if (s == "dest")
        return Side::dest;
    throw ConfigError(f.where(key) + ": expected 'source' or 'dest'");
}

chain::ChainConfig parse_chain(Fields f, chain::ChainConfig c)
{
    c.network_id = f.str("networkId", c.network_id);
    c.block_time_ticks = f.u64("blockTimeTicks", c.block_time_ticks);
    c.finality_depth = f.u64("finality", c.finality_depth);
    if (f.has("hashAlg")) {
        auto alg = crypto::parse_hash_alg(f.str("hashAlg"));
        if (!alg)
            throw ConfigError(f.where("hashAlg") + ": expected keccak256 or blake2b256");
        c.hash_alg = *alg;
    }
    f.finish();
    c.validate();
    return c;
}

AdapterSetup parse_adapter(Fields f)
{
    AdapterSetup a;
    a.owner = f.str("owner", a.owner);
    a.relayer = f.str("relayer", a.relayer);
    if (f.has("quorum"))
        a.quorum = f.u32("quorum", 1);
    a.transaction_fee = f.u64("transactionFee", 0);
    a.accept_only_authorized = f.flag("acceptOnlyAuthorizedSenders", false);
    a.authorized_senders = f.strings("authorizedSenders");
    f.finish();
    return a;
}

CallSpec parse_call(Fields f)
{
    CallSpec out;
    int kinds = 0;
    if (f.has("setValue")) {
        out = SetValueCall{f.u128("setValue")};
        ++kinds;
    }
    if (f.has("mint")) {
        auto m = f.object("mint");
        out = MintCall{m.str("to"), m.u128("amount")};
        m.finish();
        ++kinds;
    }
    if (f.has("hex")) {
        try {
            out = RawCall{from_hex(f.str("hex"))};
        } catch (const std::invalid_argument& e) {
            throw ConfigError(f.where("hex") + ": " + e.what());
        }
        ++kinds;
    }
    if (kinds != 1)
        throw ConfigError(f.where("") + " expected exactly one of setValue, mint, hex");
    f.finish();
    return out;
}

Corruption parse_corruption(Fields f)
{
    auto type = f.str("type");
    Corruption c;
    if (type == "none") {
        c = RestoreView{};
    } else if (type == "substituteBlockHash") {
        c = SubstituteHash{f.u64("request")};
    } else if (type == "fabricateTransfer") {
        FabricateTransfer t;
        t.recipient = f.str("recipient");
        t.call = parse_call(f.object("call"));
        t.gas = f.u64("gas", t.gas);
        c = std::move(t);
    } else if (type == "hideEvents") {
        c = HideRequests{};
    } else if (type == "freezeHead") {
        c = FreezeHead{};
    } else {
        throw ConfigError(f.where("type") + ": unknown corruption '" + type + "'");
    }
    f.finish();
    return c;
}

AdminSpec parse_admin_change(Fields f)
{
    AdminSpec out;
    int kinds = 0;
    if (f.has("relayer")) {
        out = SetRelayerSpec{f.str("relayer")};
        ++kinds;
    }
    if (f.has("signatories")) {
        auto s = f.object("signatories");
        SetSignatoriesSpec spec;
        spec.keys = s.strings("keys");
        if (s.has("quorum"))
            spec.quorum = s.u32("quorum", 1);
        s.finish();
        out = std::move(spec);
        ++kinds;
    }
    if (f.has("transactionFee")) {
        out = SetFeeSpec{f.u64("transactionFee")};
        ++kinds;
    }
    if (f.has("authorizedSenders")) {
        auto s = f.object("authorizedSenders");
        SetAuthorizedSpec spec;
        spec.accept_only = s.flag("acceptOnly", false);
        spec.senders = s.strings("senders");
        s.finish();
        out = std::move(spec);
        ++kinds;
    }
    if (f.has("remoteAdapter")) {
        out = SetRemoteSpec{f.str("remoteAdapter")};
        ++kinds;
    }
    if (kinds != 1)
        throw ConfigError(f.where("") + " expected exactly one configuration field");
    f.finish();
    return out;
}

Trigger parse_trigger(Fields& item)
{
    Trigger t;
    if (item.has("at"))
        t.tick = item.u64("at");
    if (item.has("when")) {
        auto w = item.object("when");
        t.tick = w.opt_u64("tick");
        t.delivered = w.opt_u64("delivered");
        if (w.has("sourceConfirmations")) {
            auto c = w.object("sourceConfirmations");
            t.source_confirmations = Trigger::Confirmations{c.u64("request"), c.u64("depth")};
            c.finish();
        }
        w.finish();
    }
    int kinds = t.tick.has_value() + t.delivered.has_value() + t.source_confirmations.has_value();
    if (kinds != 1)
        throw ConfigError(item.where("when") + ": expected exactly one of tick, delivered, sourceConfirmations");
    return t;
}

WorkloadItem parse_item(Fields f)
{
    WorkloadItem item;
    item.when = parse_trigger(f);
    item.count = f.u64("count", 1);
    item.every = f.u64("every", 1);
    if (item.count == 0 || item.every == 0)
        throw ConfigError(f.where("count") + ": count and every must be positive");

    auto kind = f.str("action");
    if (kind == "request_transfer") {
        RequestTransfer a;
        a.from = f.str("from", a.from);
        a.recipient = f.str("recipient", a.recipient);
        if (f.has("call"))
            a.call = parse_call(f.object("call"));
        a.gas = f.u64("gas", a.gas);
        a.value = f.opt_u64("value");
        item.action = std::move(a);
    } else if (kind == "bridge_out") {
        BridgeOut a;
        a.from = f.str("from", a.from);
        a.to = f.str("to", a.to);
        a.amount = f.u128("amount");
        item.action = std::move(a);
    } else if (kind == "inject_reorg") {
        InjectReorg a;
        a.chain = parse_side(f, "chain", Side::source);
        a.depth = f.opt_u64("depth");
        a.orphan_request = f.opt_u64("orphanRequest");
        a.extra = f.u64("extra", 0);
        a.drop = f.numbers("drop");
        if (a.depth.has_value() == a.orphan_request.has_value())
            throw ConfigError(f.where("depth") + ": expected exactly one of depth, orphanRequest");
        if (a.orphan_request && !f.has("drop"))
            a.drop = {*a.orphan_request};
        item.action = std::move(a);
    } else if (kind == "install_view") {
        InstallView a;
        a.actors = f.strings("actors");
        a.chain = parse_side(f, "chain", Side::source);
        a.corruption = parse_corruption(f.object("corruption"));
        if (a.actors.empty())
            throw ConfigError(f.where("actors") + ": at least one actor required");
        item.action = std::move(a);
    } else if (kind == "admin_set") {
        AdminSet a;
        a.chain = parse_side(f, "chain", Side::dest);
        a.from = f.str("from", a.from);
        a.change = parse_admin_change(f.object("change"));
        a.declared = f.flag("declared", false);
        item.action = std::move(a);
    } else if (kind == "pause") {
        item.action = Pause{};
    } else if (kind == "resume") {
        item.action = Resume{};
    } else if (kind == "forge") {
        Forge a;
        a.recipient = f.str("recipient");
        a.call = parse_call(f.object("call"));
        a.gas = f.u64("gas", a.gas);
        item.action = std::move(a);
    } else if (kind == "flood") {
        item.action = Flood{f.u64("requests")};
    } else if (kind == "forged_process_transfer") {
        ForgedProcessTransfer a;
        a.from = f.str("from", a.from);
        a.recipient = f.str("recipient");
        a.call = parse_call(f.object("call"));
        a.gas = f.u64("gas", a.gas);
        a.signers = f.strings("signers");
        a.transfer_id = f.opt_u64("transferId");
        item.action = std::move(a);
    } else if (kind == "halt_chain") {
        item.action = HaltChain{parse_side(f, "chain", Side::source)};
    } else if (kind == "resume_chain") {
        item.action = ResumeChain{parse_side(f, "chain", Side::source)};
    } else {
        throw ConfigError(f.where("action") + ": unknown action '" + kind + "'");
    }
    f.finish();
    return item;
}

} // namespace

std::string_view to_string(Impact i)
{
    return impact_names[static_cast<std::size_t>(i)];
}

std::optional<Impact> parse_impact(std::string_view s)
{
    for (std::size_t i = 0; i < std::size(impact_names); ++i)
        if (impact_names[i] == s)
            return static_cast<Impact>(i);
    return std::nullopt;
}

std::string_view to_string(Side s)
{
    return s == Side::source ? "source" : "dest";
}

crypto::Keypair keypair_of(std::string_view label)
{
    return crypto::keygen(crypto::seed_from_label(label));
}

PublicKey signing_key_of(std::string_view label)
{
    return keypair_of(label).public_key;
}

Bytes encode_call(const CallSpec& c)
{
    return std::visit(
        [](const auto& v) -> Bytes {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SetValueCall>)
                return crypto::encode_function_call(contracts::StorageContract::set_value_sig,
                                                    {crypto::word_from_u128(v.value)})
                    .bytes;
            else if constexpr (std::is_same_v<T, MintCall>)
                return crypto::encode_function_call(
                           contracts::MintableToken::mint_sig,
                           {crypto::word_from_address(address_of(v.to)), crypto::word_from_u128(v.amount)})
                    .bytes;
            else
                return v.bytes;
        },
        c);
}

void Scenario::validate() const
{
    if (name.empty())
        throw ConfigError("scenario name must be non-empty");
    if (max_ticks == 0)
        throw ConfigError("maxTicks must be positive");
    source_chain.validate();
    dest_chain.validate();
    if (source_chain.network_id == dest_chain.network_id)
        throw ConfigError("source and destination network ids must differ");
    if (signatories.empty())
        throw ConfigError("at least one signatory is required");

    std::set<std::string> ids;
    std::set<std::string> seeds;
    for (const auto& s : signatories) {
        if (s.id.empty())
            throw ConfigError("signatory id must be non-empty");
        if (!ids.insert(s.id).second)
            throw ConfigError("duplicate signatory id '" + s.id + "'");
        if (!seeds.insert(s.seed).second)
            throw ConfigError("signatories '" + s.id + "' share a key seed");
    }
    for (const auto* a : {&source_adapter, &dest_adapter})
        if (a->quorum && (*a->quorum < 1 || *a->quorum > signatories.size()))
            throw ConfigError("adapter quorum " + std::to_string(*a->quorum) + " outside [1, " +
                              std::to_string(signatories.size()) + "]");

    if (bridge.sign_timeout_ticks == 0 || bridge.submit_timeout_ticks == 0 || bridge.liveness_timeout_ticks == 0)
        throw ConfigError("bridge timeouts must be positive");
    if (bridge.lookahead == 0)
        throw ConfigError("bridge lookahead must be positive");

    std::uint64_t requests = 0;
    for (const auto& item : workload)
        if (std::holds_alternative<RequestTransfer>(item.action) || std::holds_alternative<BridgeOut>(item.action))
            requests += item.count;

    auto check_request = [&](std::uint64_t idx, const std::string& what) {
        if (idx >= requests)
            throw ConfigError(what + " refers to request " + std::to_string(idx) + " but the workload issues only " +
                              std::to_string(requests));
    };

    for (const auto& item : workload) {
        if (item.when.tick && *item.when.tick > max_ticks)
            throw ConfigError("workload tick " + std::to_string(*item.when.tick) + " exceeds maxTicks " +
                              std::to_string(max_ticks));
        if (item.when.source_confirmations)
            check_request(item.when.source_confirmations->request, "trigger");
        if (const auto* r = std::get_if<InjectReorg>(&item.action)) {
            if (r->depth && *r->depth == 0)
                throw ConfigError("inject_reorg depth must be positive");
            if (r->orphan_request)
                check_request(*r->orphan_request, "inject_reorg");
            for (auto d : r->drop)
                check_request(d, "inject_reorg drop");
        }
        if (const auto* v = std::get_if<InstallView>(&item.action)) {
            for (const auto& a : v->actors) {
                if (a == "bridge" || a == "signatories")
                    continue;
                if (!a.starts_with("signatory:") || !ids.contains(a.substr(10)))
                    throw ConfigError("install_view actor '" + a + "' does not resolve");
                if (v->chain == Side::dest)
                    throw ConfigError("signatories only watch the source chain");
            }
            if (const auto* s = std::get_if<SubstituteHash>(&v->corruption))
                check_request(s->request, "substituteBlockHash");
        }
        if (std::holds_alternative<BridgeOut>(item.action) && !tokens)
            throw ConfigError("bridge_out needs \"tokens\" enabled");
        if (const auto* a = std::get_if<AdminSet>(&item.action))
            if (const auto* s = std::get_if<SetSignatoriesSpec>(&a->change))
                if (s->keys.empty())
                    throw ConfigError("admin_set signatories needs at least one key");
    }
}

Scenario parse_scenario(const Json& j)
{
    Fields f(j, "scenario");
    Scenario s;
    s.name = f.str("name");
    s.description = f.str("description", "");
    s.seed = f.u64("seed", 0);
    s.max_ticks = f.u64("maxTicks", s.max_ticks);
    s.risk = f.str("risk", "");
    if (f.has("predicted")) {
        auto p = parse_impact(f.str("predicted"));
        if (!p)
            throw ConfigError("scenario.predicted: expected low, medium or high");
        s.predicted = *p;
    }

    if (f.has("chains")) {
        auto c = f.object("chains");
        if (c.has("source"))
            s.source_chain = parse_chain(c.object("source"), s.source_chain);
        if (c.has("dest"))
            s.dest_chain = parse_chain(c.object("dest"), s.dest_chain);
        c.finish();
    }
    if (f.has("adapters")) {
        auto a = f.object("adapters");
        if (a.has("source"))
            s.source_adapter = parse_adapter(a.object("source"));
        if (a.has("dest"))
            s.dest_adapter = parse_adapter(a.object("dest"));
        a.finish();
    }

    const auto& sigs = f.raw("signatories");
    if (!sigs.is_array())
        throw ConfigError("scenario.signatories: expected an array");
    for (std::size_t i = 0; i < sigs.size(); ++i) {
        Fields sf(sigs[i], "scenario.signatories[" + std::to_string(i) + "]");
        SignatorySetup sig;
        sig.id = sf.str("id");
        sig.seed = sf.str("seed", "signatory:" + sig.id);
        if (sf.has("behavior")) {
            auto b = signatory::parse_behavior(sf.str("behavior"));
            if (!b)
                throw ConfigError(sf.where("behavior") + ": expected honest, refuse, wrongSignature or colluding");
            sig.behavior = *b;
        }
        sf.finish();
        s.signatories.push_back(std::move(sig));
    }

    if (f.has("rateLimit")) {
        auto r = f.object("rateLimit");
        s.rate_limit.budget = r.u64("budget", 0);
        s.rate_limit.window_ticks = r.u64("windowTicks", 1);
        r.finish();
        if (s.rate_limit.window_ticks == 0)
            throw ConfigError("scenario.rateLimit.windowTicks must be positive");
    }

    if (f.has("bridge")) {
        auto b = f.object("bridge");
        auto& cfg = s.bridge;
        cfg.source_finality = b.opt_u64("sourceFinality");
        cfg.dest_finality = b.opt_u64("destFinality");
        cfg.sign_timeout_ticks = b.u64("signTimeoutTicks", cfg.sign_timeout_ticks);
        cfg.submit_timeout_ticks = b.u64("submitTimeoutTicks", cfg.submit_timeout_ticks);
        cfg.max_retries = b.u32("maxRetries", cfg.max_retries);
        cfg.liveness_timeout_ticks = b.u64("livenessTimeoutTicks", cfg.liveness_timeout_ticks);
        cfg.lookahead = b.u64("lookahead", cfg.lookahead);
        if (b.has("reorgResponse")) {
            auto r = bridge::parse_reorg_response(b.str("reorgResponse"));
            if (!r)
                throw ConfigError(b.where("reorgResponse") + ": expected pause, retry or continue");
            cfg.reorg_response = *r;
        }
        if (b.has("byzantine")) {
            auto z = b.object("byzantine");
            cfg.censor = z.opt_u64("censor");
            cfg.replay = z.flag("replay", false);
            z.finish();
        }
        b.finish();
    }

    if (f.has("monitor")) {
        auto m = f.object("monitor");
        s.monitor.enabled = m.flag("enabled", true);
        s.monitor.auto_pause = m.flag("autoPause", false);
        m.finish();
    }

    if (f.has("tokens")) {
        auto t = f.object("tokens");
        s.tokens = true;
        s.token_allocation = t.has("allocation") ? t.u128("allocation") : 0;
        t.finish();
    }
    s.funded = f.strings("funded");

    if (f.has("workload")) {
        const auto& w = f.raw("workload");
        if (!w.is_array())
            throw ConfigError("scenario.workload: expected an array");
        for (std::size_t i = 0; i < w.size(); ++i)
            s.workload.push_back(parse_item(Fields(w[i], "scenario.workload[" + std::to_string(i) + "]")));
    }
    f.finish();
    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read scenario file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    Json j;
    try {
        j = Json::parse(buf.str());
    } catch (const Json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_scenario(j);
}

} // namespace twc::harness
