#include "twc/harness/simulation.hpp"

#include <algorithm>

#include "twc/adapter/adapter.hpp"
#include "twc/chain/faulty_view.hpp"
#include "twc/common/errors.hpp"
#include "twc/contracts/storage.hpp"
#include "twc/contracts/token.hpp"

namespace twc::harness {

namespace {

constexpr std::uint64_t account_funding = 1'000'000'000'000'000;

Bytes u64_bytes(std::uint64_t v)
{
    ByteWriter w;
    w.u64(v);
    return std::move(w).take();
}

Hash256 label_hash(std::string_view tag, std::uint64_t n)
{
    ByteWriter w;
    w.str(tag).u64(n);
    return crypto::keccak256(w.bytes());
}

std::string u128_str(Uint128 v)
{
    return crypto::u128_to_string(v);
}

} // namespace

Simulation::Simulation(Scenario scenario, RunOptions options)
    : scenario_(std::move(scenario)), options_(options), seed_(options.seed.value_or(scenario_.seed))
{
    scenario_.validate();
    source_ = std::make_shared<chain::Chain>(scenario_.source_chain);
    dest_ = std::make_shared<chain::Chain>(scenario_.dest_chain);

    const auto src_adapter = address_of(source_adapter_label);
    const auto dst_adapter = address_of(dest_adapter_label);

    std::vector<crypto::SignatoryIdentity> identities;
    std::vector<PublicKey> keys;
    for (const auto& s : scenario_.signatories) {
        identities.push_back({s.id, keypair_of(s.seed)});
        keys.push_back(identities.back().keys.public_key);
    }

    auto adapter_config = [&](const AdapterSetup& a, std::string_view remote) {
        adapter::AdapterConfig c;
        c.owner = address_of(a.owner);
        c.relayer = address_of(a.relayer);
        c.signatories = keys;
        c.quorum = a.quorum.value_or(adapter::two_thirds_quorum(keys.size()));
        c.transaction_fee = a.transaction_fee;
        c.accept_only_authorized = a.accept_only_authorized;
        for (const auto& s : a.authorized_senders)
            c.authorized_senders.insert(address_of(s));
        c.remote_adapter = address_of(remote);
        return c;
    };
    auto dest_config = adapter_config(scenario_.dest_adapter, source_adapter_label);
    source_->deploy(src_adapter, std::make_unique<adapter::Adapter>(
                                     adapter::init_adapter(adapter_config(scenario_.source_adapter, dest_adapter_label))));
    dest_->deploy(dst_adapter, std::make_unique<adapter::Adapter>(adapter::init_adapter(dest_config)));
    dest_->deploy(address_of(dest_storage_label), std::make_unique<contracts::StorageContract>());

    if (scenario_.tokens) {
        auto src_token = std::make_unique<contracts::MintableToken>(src_adapter, address_of(dest_token_label));
        if (scenario_.token_allocation > 0)
            src_token->issue(address_of("user"), scenario_.token_allocation);
        source_->deploy(address_of(source_token_label), std::move(src_token));
        dest_->deploy(address_of(dest_token_label),
                      std::make_unique<contracts::MintableToken>(dst_adapter, address_of(source_token_label)));
    }

    std::set<std::string> accounts{"user", "attacker", "operator"};
    for (const auto* a : {&scenario_.source_adapter, &scenario_.dest_adapter}) {
        accounts.insert(a->owner);
        accounts.insert(a->relayer);
    }
    accounts.insert(scenario_.funded.begin(), scenario_.funded.end());
    for (const auto& item : scenario_.workload)
        std::visit(
            [&](const auto& a) {
                if constexpr (requires { a.from; })
                    accounts.insert(a.from);
            },
            item.action);
    for (const auto& label : accounts) {
        source_->fund(address_of(label), account_funding);
        dest_->fund(address_of(label), account_funding);
    }

    signatory::VerificationPolicy policy{src_adapter, scenario_.dest_chain.hash_alg,
                                         scenario_.source_chain.finality_depth};
    for (std::size_t i = 0; i < identities.size(); ++i)
        signatories_.emplace_back(identities[i], scenario_.signatories[i].behavior, source_, policy,
                                  signatory::RateLimiter(scenario_.rate_limit.budget, scenario_.rate_limit.window_ticks));

    const auto& b = scenario_.bridge;
    bridge_config_.id = "bridge";
    bridge_config_.source_adapter = src_adapter;
    bridge_config_.dest_adapter = dst_adapter;
    bridge_config_.relayer = address_of(scenario_.dest_adapter.relayer);
    bridge_config_.signatories = keys;
    bridge_config_.quorum = dest_config.quorum;
    bridge_config_.source_finality = b.source_finality.value_or(scenario_.source_chain.finality_depth);
    bridge_config_.dest_finality = b.dest_finality.value_or(scenario_.dest_chain.finality_depth);
    bridge_config_.sign_timeout_ticks = b.sign_timeout_ticks;
    bridge_config_.submit_timeout_ticks = b.submit_timeout_ticks;
    bridge_config_.max_retries = b.max_retries;
    bridge_config_.liveness_timeout_ticks = b.liveness_timeout_ticks;
    bridge_config_.reorg_response = b.reorg_response;
    bridge_config_.lookahead = b.lookahead;
    bridge_config_.seed = seed_;
    bridge_config_.censor = b.censor;
    bridge_config_.replay_completed = b.replay;

    bridge_source_view_ = source_;
    bridge_dest_view_ = dest_;
    bridge_ = std::make_unique<bridge::Bridge>(bridge_config_, bridge_source_view_, bridge_dest_view_);
    if (options_.crash_at)
        bridge_->crash_after(*options_.crash_at);

    for (const auto& item : scenario_.workload)
        pending_.push_back(Pending{item, item.count, std::nullopt});
}

void Simulation::run()
{
    while (tick_ < scenario_.max_ticks)
        step();
}

void Simulation::step()
{
    ++tick_;
    apply_workload();
    mine();
    deliver();
    monitor_config();
    step_bridge();
}

// ---------------------------------------------------------------------------
// workload

std::optional<std::uint64_t> Simulation::confirmations_of_request(std::uint64_t idx) const
{
    if (idx >= requests_.size())
        return std::nullopt;
    return source_->confirmations(requests_[idx]);
}

bool Simulation::triggered(const Trigger& t) const
{
    if (t.tick)
        return tick_ >= *t.tick;
    if (t.delivered)
        return delivered_ids().contains(*t.delivered);
    if (t.source_confirmations) {
        auto c = confirmations_of_request(t.source_confirmations->request);
        return c && *c >= t.source_confirmations->depth;
    }
    return false;
}

void Simulation::apply_workload()
{
    for (auto& p : pending_) {
        if (p.remaining == 0)
            continue;
        if (!p.next_tick) {
            if (!triggered(p.item.when))
                continue;
            p.next_tick = tick_;
        }
        while (p.remaining > 0 && *p.next_tick <= tick_) {
            apply(p.item.action);
            --p.remaining;
            *p.next_tick += p.item.every;
        }
    }
}

void Simulation::apply(const WorkloadAction& a)
{
    std::visit([this](const auto& x) { apply(x); }, a);
}

void Simulation::apply(const RequestTransfer& a)
{
    const auto at = address_of(source_adapter_label);
    auto fee = source_->contract_as<adapter::Adapter>(at)->state().transaction_fee;
    auto payload = adapter::encode_request_transfer(address_of(a.recipient), encode_call(a.call), a.gas);
    requests_.push_back(source_->submit_transaction(
        source_->make_transaction(address_of(a.from), at, std::move(payload), a.value.value_or(fee))));
}

void Simulation::apply(const BridgeOut& a)
{
    auto fee = source_->contract_as<adapter::Adapter>(address_of(source_adapter_label))->state().transaction_fee;
    auto call = crypto::encode_function_call(contracts::MintableToken::bridge_out_sig,
                                             {crypto::word_from_address(address_of(a.to)),
                                              crypto::word_from_u128(a.amount)});
    requests_.push_back(source_->submit_transaction(
        source_->make_transaction(address_of(a.from), address_of(source_token_label), std::move(call.bytes), fee)));
}

void Simulation::apply(const InjectReorg& a)
{
    auto& c = chain_of(a.chain);
    std::uint64_t depth = 0;
    if (a.depth) {
        depth = *a.depth;
    } else {
        auto idx = *a.orphan_request;
        if (idx >= requests_.size())
            return;
        auto loc = c.get_transaction(requests_[idx]);
        if (!loc)
            return;
        depth = c.head_number() - loc->block_number + 1 + a.extra;
    }
    depth = std::min(depth, c.head_number());
    if (depth == 0)
        return;
    std::set<Hash256> drop;
    for (auto idx : a.drop)
        if (idx < requests_.size())
            drop.insert(requests_[idx]);
    c.inject_reorg(depth, drop, tick_);
}

chain::ChainViewPtr Simulation::corrupt(Side side, const Corruption& c)
{
    auto base = chain_ptr(side);
    const auto src_adapter = address_of(source_adapter_label);
    return std::visit(
        [&](const auto& v) -> chain::ChainViewPtr {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RestoreView>) {
                return base;
            } else if constexpr (std::is_same_v<T, SubstituteHash>) {
                std::uint64_t number = base->head_number();
                if (v.request < requests_.size())
                    if (auto loc = base->get_transaction(requests_[v.request]))
                        number = loc->block_number;
                return chain::faulty_view(base, chain::SubstituteBlockHash{number, label_hash("twc:fake-block", number)});
            } else if constexpr (std::is_same_v<T, FabricateTransfer>) {
                auto id = source_->contract_as<adapter::Adapter>(src_adapter)->state().outbound_nonce;
                auto call = encode_call(v.call);
                auto recipient = address_of(v.recipient);
                chain::Transaction tx;
                tx.sender = address_of("attacker");
                tx.recipient = src_adapter;
                tx.payload = adapter::encode_request_transfer(recipient, call, v.gas);
                tx.hash = label_hash("twc:fabricated", tick_);
                chain::EventLog e;
                e.emitter = src_adapter;
                e.name = std::string(adapter::ev_transfer_requested);
                e.attributes = {{"transferId", u64_bytes(id)},
                                {"recipientContract", Bytes(recipient.bytes.begin(), recipient.bytes.end())},
                                {"encodedCall", call},
                                {"gas", u64_bytes(v.gas)}};
                e.tx_hash = tx.hash;
                e.block_number = base->head_number() + 1;
                return chain::faulty_view(base, chain::FabricateTransaction{tx, {e}, e.block_number});
            } else if constexpr (std::is_same_v<T, HideRequests>) {
                if (side == Side::source)
                    return chain::faulty_view(base, chain::HideEvents{src_adapter,
                                                                      std::string(adapter::ev_transfer_requested)});
                return chain::faulty_view(
                    base, chain::HideEvents{address_of(dest_adapter_label), std::string(adapter::ev_processed)});
            } else {
                return chain::faulty_view(base, chain::FreezeHead{base->head_number()});
            }
        },
        c);
}

void Simulation::apply(const InstallView& a)
{
    auto view = corrupt(a.chain, a.corruption);
    for (const auto& actor : a.actors) {
        if (actor == "bridge") {
            if (a.chain == Side::source) {
                bridge_source_view_ = view;
                bridge_->set_source_view(view);
            } else {
                bridge_dest_view_ = view;
                bridge_->set_dest_view(view);
            }
            continue;
        }
        for (std::size_t i = 0; i < signatories_.size(); ++i)
            if (actor == "signatories" || actor == "signatory:" + scenario_.signatories[i].id)
                signatories_[i].set_view(view);
    }
}

void Simulation::apply(const AdminSet& a)
{
    auto change = std::visit(
        [](const auto& v) -> adapter::AdminChange {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SetRelayerSpec>) {
                return adapter::SetRelayer{address_of(v.relayer)};
            } else if constexpr (std::is_same_v<T, SetSignatoriesSpec>) {
                adapter::SetSignatories s;
                for (const auto& k : v.keys)
                    s.signatories.push_back(signing_key_of(k));
                s.quorum = v.quorum.value_or(adapter::two_thirds_quorum(s.signatories.size()));
                return s;
            } else if constexpr (std::is_same_v<T, SetFeeSpec>) {
                return adapter::SetTransactionFee{v.fee};
            } else if constexpr (std::is_same_v<T, SetAuthorizedSpec>) {
                adapter::SetAuthorizedSenders s;
                s.accept_only_authorized = v.accept_only;
                for (const auto& sender : v.senders)
                    s.senders.insert(address_of(sender));
                return s;
            } else {
                return adapter::SetRemoteAdapter{address_of(v.remote)};
            }
        },
        a.change);
    if (a.declared)
        declared_.insert({a.chain, std::string(adapter::field_name(change))});
    auto& c = chain_of(a.chain);
    auto at = address_of(a.chain == Side::source ? source_adapter_label : dest_adapter_label);
    c.submit_transaction(c.make_transaction(address_of(a.from), at, adapter::encode_admin_set(change)));
}

void Simulation::apply(const Pause&)
{
    bridge_->pause(tick_, "operator pause");
}

void Simulation::apply(const Resume&)
{
    bridge_->resume(tick_);
}

void Simulation::apply(const Forge& a)
{
    bridge::Forgery f{address_of(a.recipient), encode_call(a.call), a.gas};
    with_bridge([&] { bridge_->forge(f, tick_); });
}

void Simulation::apply(const Flood& a)
{
    bridge_->flood(a.count);
}

void Simulation::apply(const ForgedProcessTransfer& a)
{
    const auto at = address_of(dest_adapter_label);
    crypto::TransferMessage m;
    m.source_tx_hash = label_hash("twc:forged-direct", forged_direct_++);
    m.source_adapter = address_of(source_adapter_label);
    m.recipient = address_of(a.recipient);
    m.encoded_call = encode_call(a.call);
    m.gas = a.gas;
    m.transfer_id = a.transfer_id.value_or(dest_->contract_as<adapter::Adapter>(at)->state().expected_inbound_nonce);
    m.source_network_id = scenario_.source_chain.network_id;
    auto digest = crypto::compute_transfer_hash(m, scenario_.dest_chain.hash_alg);
    adapter::SignatureBundle bundle;
    for (const auto& label : a.signers) {
        auto keys = keypair_of(label);
        auto sig = crypto::sign(keys, digest);
        bundle.push_back({keys.public_key, Bytes(sig.begin(), sig.end())});
    }
    dest_->submit_transaction(
        dest_->make_transaction(address_of(a.from), at, adapter::encode_process_transfer(m, bundle)));
}

void Simulation::apply(const HaltChain& a)
{
    halted_.insert(a.chain);
}

void Simulation::apply(const ResumeChain& a)
{
    halted_.erase(a.chain);
}

// ---------------------------------------------------------------------------
// scheduler phases

void Simulation::mine()
{
    for (auto side : {Side::source, Side::dest}) {
        auto& c = chain_of(side);
        if (!halted_.contains(side) && tick_ % c.config().block_time_ticks == 0)
            c.mine_block(tick_);
    }
}

void Simulation::deliver()
{
    while (!in_flight_.empty() && in_flight_.front().deliver_at <= tick_) {
        auto msg = std::move(in_flight_.front());
        in_flight_.pop_front();
        signatory::FrameDecoder decoder;
        decoder.feed(msg.frame);
        std::optional<std::string> payload;
        try {
            payload = decoder.next();
        } catch (const DecodeError&) {
        }
        if (!payload)
            continue;

        try {
            auto j = Json::parse(*payload);
            if (msg.to_signatory) {
                auto req = signatory::request_from_json(j);
                auto resp = signatories_[msg.signatory].on_request(bridge_config_.id, req, tick_);
                if (resp)
                    in_flight_.push_back(
                        {tick_ + 1, false, msg.signatory, signatory::encode_frame(signatory::to_json(*resp).dump())});
            } else {
                auto resp = signatory::response_from_json(j);
                with_bridge([&] { bridge_->on_sign_response(msg.signatory, resp, tick_); });
            }
        } catch (const Json::exception&) {
        } catch (const DecodeError&) {
        }
    }
}

void Simulation::monitor_config()
{
    if (!scenario_.monitor.enabled)
        return;
    for (auto side : {Side::source, Side::dest}) {
        auto& c = chain_of(side);
        auto at = address_of(side == Side::source ? source_adapter_label : dest_adapter_label);
        auto& from = config_scanned_[side];
        auto head = c.head_number();
        if (from > head)
            continue;
        auto events = c.get_events(at, adapter::ev_config_changed, from, head);
        from = head + 1;
        for (const auto& e : events) {
            auto field = adapter::parse_config_changed(e).field;
            if (auto it = declared_.find({side, field}); it != declared_.end()) {
                declared_.erase(it);
                continue;
            }
            std::string what = std::string(to_string(side)) + " adapter " + field + " changed in block " +
                               std::to_string(e.block_number);
            config_alarms_.push_back({tick_, "configChange", what});
            if (scenario_.monitor.auto_pause)
                bridge_->pause(tick_, "unexpected change: " + what);
        }
    }
}

void Simulation::step_bridge()
{
    std::vector<bridge::Action> actions;
    with_bridge([&] { actions = bridge_->step(tick_); });
    dispatch(std::move(actions));
}

void Simulation::dispatch(std::vector<bridge::Action> actions)
{
    const auto at = address_of(dest_adapter_label);
    for (auto& a : actions) {
        if (auto* r = std::get_if<bridge::SignRequestAction>(&a)) {
            if (r->signatory < signatories_.size())
                in_flight_.push_back(
                    {tick_ + 1, true, r->signatory, signatory::encode_frame(signatory::to_json(r->request).dump())});
            continue;
        }
        auto& s = std::get<bridge::SubmitAction>(a);
        auto h = dest_->submit_transaction(dest_->make_transaction(bridge_config_.relayer, at, std::move(s.payload)));
        bridge_->on_submitted(s.submission, h);
    }
}

template <class F>
void Simulation::with_bridge(F&& f)
{
    try {
        f();
    } catch (const bridge::BridgeCrash&) {
        recover_bridge();
    }
}

void Simulation::recover_bridge()
{
    auto journal = bridge_->journal();
    bridge_ = std::make_unique<bridge::Bridge>(
        bridge::Bridge::recover(bridge_config_, bridge_source_view_, bridge_dest_view_, journal));
    ++crashes_;
}

// ---------------------------------------------------------------------------
// measurements

std::vector<Delivery> Simulation::deliveries() const
{
    std::vector<Delivery> out;
    for (const auto& e : dest_->get_events(address_of(dest_adapter_label), adapter::ev_processed, 0,
                                           dest_->head_number())) {
        auto p = adapter::parse_processed(e);
        auto block = dest_->get_block(e.block_number);
        out.push_back({p.transfer_id, p.source_tx_hash, e.tx_hash, e.block_number, block ? block->tick : 0, p.call_ok});
    }
    return out;
}

std::set<std::uint64_t> Simulation::delivered_ids() const
{
    std::set<std::uint64_t> ids;
    for (const auto& d : deliveries())
        ids.insert(d.transfer_id);
    return ids;
}

std::vector<CausalityViolation> Simulation::violations() const
{
    return causality_oracle(*source_, address_of(source_adapter_label), *dest_, address_of(dest_adapter_label));
}

std::vector<InvariantBreach> Simulation::invariant_breaches() const
{
    std::vector<InvariantBreach> out;
    if (!scenario_.tokens)
        return out;
    const auto* src = source_->contract_as<contracts::MintableToken>(address_of(source_token_label));
    const auto* dst = dest_->contract_as<contracts::MintableToken>(address_of(dest_token_label));
    if (dst->minted() > src->burned())
        out.push_back({"tokenConservation", "destination minted " + u128_str(dst->minted()) +
                                                " but the source burned only " + u128_str(src->burned())});
    return out;
}

std::vector<bridge::Alarm> Simulation::alarms() const
{
    auto out = bridge_->alarms();
    out.insert(out.end(), config_alarms_.begin(), config_alarms_.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.tick < b.tick; });
    return out;
}

Impact Simulation::classification() const
{
    if (!violations().empty() || !invariant_breaches().empty())
        return Impact::high;
    for (const auto& s : bridge_->stalls())
        if (!s.side && bridge::is_censorship(s.cause))
            return Impact::medium;
    for (const auto& e : bridge_->journal())
        if (e.to == "censored")
            return Impact::medium;
    return Impact::low;
}

Json Simulation::report() const
{
    const auto src_adapter = address_of(source_adapter_label);
    const auto dst_adapter = address_of(dest_adapter_label);

    Json r;
    r["scenario"] = scenario_.name;
    r["description"] = scenario_.description;
    r["risk"] = scenario_.risk;
    r["seed"] = seed_;
    r["ticks"] = tick_;

    auto chain_summary = [](const chain::Chain& c) {
        Json j;
        j["networkId"] = c.config().network_id;
        j["head"] = c.head_number();
        j["reorgs"] = c.reorgs().size();
        j["orphanedBlocks"] = c.orphaned_blocks().size();
        return j;
    };
    r["chains"]["source"] = chain_summary(*source_);
    r["chains"]["dest"] = chain_summary(*dest_);

    r["requested"] = source_->get_events(src_adapter, adapter::ev_transfer_requested, 0, source_->head_number()).size();

    r["delivered"] = Json::array();
    for (const auto& d : deliveries()) {
        Json j;
        j["transferId"] = d.transfer_id;
        j["sourceTxHash"] = d.source_tx_hash.hex();
        j["destTxHash"] = d.dest_tx_hash.hex();
        j["destBlock"] = d.dest_block;
        j["callStatus"] = d.call_ok;
        r["delivered"].push_back(std::move(j));
    }

    r["alreadyProcessed"] = Json::array();
    for (const auto& e : dest_->get_events(dst_adapter, adapter::ev_already_processed, 0, dest_->head_number())) {
        auto a = adapter::parse_already_processed(e);
        Json j;
        j["sourceTxHash"] = a.source_tx_hash.hex();
        j["originalBlock"] = a.original_block;
        j["destBlock"] = e.block_number;
        r["alreadyProcessed"].push_back(std::move(j));
    }

    r["stalls"] = Json::array();
    for (const auto& s : bridge_->stalls()) {
        Json j;
        j["transferId"] = s.transfer_id;
        j["cause"] = to_string(s.cause);
        j["tick"] = s.tick;
        j["forged"] = s.side;
        r["stalls"].push_back(std::move(j));
    }

    r["violations"] = Json::array();
    for (const auto& v : violations()) {
        Json j;
        j["reason"] = to_string(v.reason);
        j["transferId"] = v.transfer_id;
        j["sourceTxHash"] = v.source_tx_hash.hex();
        j["destTxHash"] = v.dest_tx_hash.hex();
        j["destBlock"] = v.dest_block;
        r["violations"].push_back(std::move(j));
    }

    r["invariantBreaches"] = Json::array();
    for (const auto& b : invariant_breaches())
        r["invariantBreaches"].push_back({{"kind", b.kind}, {"detail", b.detail}});

    r["alarms"] = Json::array();
    for (const auto& a : alarms())
        r["alarms"].push_back({{"tick", a.tick}, {"kind", a.kind}, {"detail", a.detail}});

    auto reverts = [](const chain::Chain& c) {
        std::map<std::string, std::uint64_t> counts;
        for (std::uint64_t n = 0; n <= c.head_number(); ++n)
            for (const auto& rc : c.get_block(n)->receipts)
                if (!rc.ok())
                    ++counts[rc.revert_reason];
        Json j = Json::object();
        for (const auto& [k, v] : counts)
            j[k] = v;
        return j;
    };
    r["reverts"]["source"] = reverts(*source_);
    r["reverts"]["dest"] = reverts(*dest_);

    r["signatories"] = Json::array();
    for (const auto& s : signatories_) {
        const auto& st = s.stats();
        Json j;
        j["id"] = s.identity().id;
        j["behavior"] = signatory::to_string(s.behavior());
        j["received"] = st.received;
        j["dropped"] = st.dropped;
        j["signed"] = st.signed_count;
        j["refused"] = st.refused;
        j["silent"] = st.silent;
        r["signatories"].push_back(std::move(j));
    }

    Json b;
    b["nextTransferId"] = bridge_->next_transfer_id();
    b["submissions"] = bridge_->submissions();
    b["replays"] = bridge_->replays_sent();
    b["floodRequests"] = bridge_->flood_requests_sent();
    b["journalEntries"] = bridge_->journal().size();
    b["crashes"] = crashes_;
    b["paused"] = bridge_->paused();
    r["bridge"] = std::move(b);

    const auto* storage = dest_->contract_as<contracts::StorageContract>(address_of(dest_storage_label));
    r["destStorage"] = {{"value", u128_str(storage->value())}, {"writes", storage->writes()}};

    if (scenario_.tokens) {
        const auto* src = source_->contract_as<contracts::MintableToken>(address_of(source_token_label));
        const auto* dst = dest_->contract_as<contracts::MintableToken>(address_of(dest_token_label));
        Json t;
        t["sourceTotalSupply"] = u128_str(src->total_supply());
        t["sourceBurned"] = u128_str(src->burned());
        t["destTotalSupply"] = u128_str(dst->total_supply());
        t["destMinted"] = u128_str(dst->minted());
        r["tokens"] = std::move(t);
    }

    auto cls = classification();
    r["predicted"] = scenario_.predicted ? Json(to_string(*scenario_.predicted)) : Json(nullptr);
    r["classification"] = to_string(cls);
    r["matchesPrediction"] = scenario_.predicted ? Json(*scenario_.predicted == cls) : Json(nullptr);
    return r;
}

Json run_scenario(const Scenario& scenario, const RunOptions& options)
{
    Simulation sim(scenario, options);
    sim.run();
    return sim.report();
}

} // namespace twc::harness
