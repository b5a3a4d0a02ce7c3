// Canonical text dump and restore of a Chain.

#include "twc/chain/chain.hpp"

#include "twc/common/errors.hpp"

namespace twc::chain {

namespace {

Json tx_to_json(const Transaction& tx)
{
    return Json{{"hash", tx.hash.hex()},       {"sender", tx.sender.hex()},
                {"recipient", tx.recipient.hex()}, {"payload", to_hex(tx.payload)},
                {"value", tx.value},           {"nonce", tx.nonce}};
}

Transaction tx_from_json(const Json& j)
{
    Transaction tx;
    tx.hash = Hash256::from_hex(j.at("hash").get<std::string>());
    tx.sender = Address::from_hex(j.at("sender").get<std::string>());
    tx.recipient = Address::from_hex(j.at("recipient").get<std::string>());
    tx.payload = from_hex(j.at("payload").get<std::string>());
    tx.value = j.at("value").get<std::uint64_t>();
    tx.nonce = j.at("nonce").get<std::uint64_t>();
    return tx;
}

Json event_to_json(const EventLog& e)
{
    Json attrs = Json::array();
    for (const auto& [k, v] : e.attributes)
        attrs.push_back(Json::array({k, to_hex(v)}));
    return Json{{"emitter", e.emitter.hex()},
                {"name", e.name},
                {"attributes", attrs},
                {"txHash", e.tx_hash.hex()},
                {"blockNumber", e.block_number}};
}

EventLog event_from_json(const Json& j)
{
    EventLog e;
    e.emitter = Address::from_hex(j.at("emitter").get<std::string>());
    e.name = j.at("name").get<std::string>();
    for (const auto& a : j.at("attributes"))
        e.attributes.emplace_back(a.at(0).get<std::string>(), from_hex(a.at(1).get<std::string>()));
    e.tx_hash = Hash256::from_hex(j.at("txHash").get<std::string>());
    e.block_number = j.at("blockNumber").get<std::uint64_t>();
    return e;
}

Json block_to_json(const Block& b)
{
    Json txs = Json::array();
    for (std::size_t i = 0; i < b.transactions.size(); ++i) {
        auto t = tx_to_json(b.transactions[i]);
        t["status"] = b.receipts[i].ok() ? "success" : "reverted";
        t["revertReason"] = b.receipts[i].revert_reason;
        txs.push_back(std::move(t));
    }
    Json events = Json::array();
    for (const auto& e : b.events)
        events.push_back(event_to_json(e));
    return Json{{"number", b.number},
                {"hash", b.hash.hex()},
                {"parentHash", b.parent_hash.hex()},
                {"tick", b.tick},
                {"branch", b.branch},
                {"transactions", txs},
                {"events", events}};
}

Block block_from_json(const Json& j)
{
    Block b;
    b.number = j.at("number").get<std::uint64_t>();
    b.hash = Hash256::from_hex(j.at("hash").get<std::string>());
    b.parent_hash = Hash256::from_hex(j.at("parentHash").get<std::string>());
    b.tick = j.at("tick").get<std::uint64_t>();
    b.branch = j.at("branch").get<std::uint32_t>();
    for (const auto& t : j.at("transactions")) {
        b.transactions.push_back(tx_from_json(t));
        auto status = t.at("status").get<std::string>();
        b.receipts.push_back(Receipt{status == "success" ? TxStatus::success : TxStatus::reverted,
                                     t.at("revertReason").get<std::string>()});
    }
    for (const auto& e : j.at("events"))
        b.events.push_back(event_from_json(e));
    return b;
}

WorldState state_from_json(const Json& j, const ContractRegistry& registry)
{
    WorldState s;
    for (const auto& [k, v] : j.at("balances").items())
        s.balances[Address::from_hex(k)] = v.get<std::uint64_t>();
    for (const auto& [k, v] : j.at("nonces").items())
        s.nonces[Address::from_hex(k)] = v.get<std::uint64_t>();
    for (const auto& [k, v] : j.at("contracts").items()) {
        auto kind = v.at("kind").get<std::string>();
        auto it = registry.find(kind);
        if (it == registry.end())
            throw DecodeError("no factory registered for contract kind '" + kind + "'");
        s.contracts[Address::from_hex(k)] = it->second(v.at("state"));
    }
    return s;
}

Json hashes_to_json(const std::vector<Hash256>& hs)
{
    Json out = Json::array();
    for (const auto& h : hs)
        out.push_back(h.hex());
    return out;
}

std::vector<Hash256> hashes_from_json(const Json& j)
{
    std::vector<Hash256> out;
    for (const auto& h : j)
        out.push_back(Hash256::from_hex(h.get<std::string>()));
    return out;
}

} // namespace

std::string Chain::dump() const
{
    Json j;
    j["config"] = Json{{"networkId", config_.network_id},
                       {"blockTimeTicks", config_.block_time_ticks},
                       {"hashAlg", crypto::to_string(config_.hash_alg)},
                       {"finalityDepth", config_.finality_depth}};
    j["branch"] = branch_;
    j["genesisState"] = genesis_state_.to_json();
    j["state"] = state_.to_json();
    j["blocks"] = Json::array();
    for (const auto& b : blocks_)
        j["blocks"].push_back(block_to_json(*b));
    j["pending"] = Json::array();
    for (const auto& tx : pending_)
        j["pending"].push_back(tx_to_json(tx));
    j["discarded"] = Json::array();
    for (const auto& tx : discarded_)
        j["discarded"].push_back(tx_to_json(tx));
    j["orphaned"] = Json::array();
    for (const auto& o : orphaned_)
        j["orphaned"].push_back(Json{{"reorg", o.reorg_index}, {"block", block_to_json(*o.block)}});
    j["reorgs"] = Json::array();
    for (const auto& r : reorgs_)
        j["reorgs"].push_back(Json{{"forkPoint", r.fork_point},
                                   {"depth", r.depth},
                                   {"oldHead", r.old_head.hex()},
                                   {"newHead", r.new_head.hex()},
                                   {"orphanedTxs", hashes_to_json(r.orphaned_txs)},
                                   {"replayedTxs", hashes_to_json(r.replayed_txs)},
                                   {"droppedTxs", hashes_to_json(r.dropped_txs)},
                                   {"excludedTxs", hashes_to_json(r.excluded_txs)}});
    return j.dump(1) + "\n";
}

Chain Chain::restore(std::string_view text, const ContractRegistry& registry)
{
    try {
        auto j = Json::parse(text);
        const auto& c = j.at("config");
        ChainConfig cfg;
        cfg.network_id = c.at("networkId").get<std::string>();
        cfg.block_time_ticks = c.at("blockTimeTicks").get<std::uint64_t>();
        auto alg = crypto::parse_hash_alg(c.at("hashAlg").get<std::string>());
        if (!alg)
            throw DecodeError("unknown hash algorithm in snapshot");
        cfg.hash_alg = *alg;
        cfg.finality_depth = c.at("finalityDepth").get<std::uint64_t>();

        Chain chain(cfg);
        chain.blocks_.clear();
        chain.block_by_hash_.clear();
        chain.branch_ = j.at("branch").get<std::uint32_t>();
        chain.genesis_state_ = state_from_json(j.at("genesisState"), registry);

        for (const auto& jb : j.at("blocks")) {
            auto b = block_from_json(jb);
            auto recorded = b.hash;
            chain.seal(b);
            if (b.hash != recorded || b.number != chain.blocks_.size())
                throw DecodeError("block " + std::to_string(b.number) + " fails hash check");
            if (b.number > 0 && b.parent_hash != chain.blocks_.back()->hash)
                throw DecodeError("block " + std::to_string(b.number) + " breaks the hash chain");
            for (const auto& tx : b.transactions)
                if (compute_tx_hash(cfg.hash_alg, tx) != tx.hash)
                    throw DecodeError("transaction hash mismatch in block " +
                                      std::to_string(b.number));
            chain.index_block(b);
            chain.blocks_.push_back(std::make_shared<const Block>(std::move(b)));
        }
        if (chain.blocks_.empty())
            throw DecodeError("snapshot has no genesis block");

        chain.state_ = chain.replay_to(chain.head_number());
        if (chain.state_.to_json() != j.at("state"))
            throw DecodeError("replayed state disagrees with the recorded state");

        for (const auto& t : j.at("pending")) {
            auto tx = tx_from_json(t);
            chain.pending_hashes_.insert(tx.hash);
            chain.pending_.push_back(std::move(tx));
        }
        for (const auto& t : j.at("discarded"))
            chain.discarded_.push_back(tx_from_json(t));
        for (const auto& o : j.at("orphaned"))
            chain.orphaned_.push_back({o.at("reorg").get<std::uint32_t>(),
                                       std::make_shared<const Block>(block_from_json(o.at("block")))});
        for (const auto& r : j.at("reorgs")) {
            ReorgRecord rec;
            rec.fork_point = r.at("forkPoint").get<std::uint64_t>();
            rec.depth = r.at("depth").get<std::uint64_t>();
            rec.old_head = Hash256::from_hex(r.at("oldHead").get<std::string>());
            rec.new_head = Hash256::from_hex(r.at("newHead").get<std::string>());
            rec.orphaned_txs = hashes_from_json(r.at("orphanedTxs"));
            rec.replayed_txs = hashes_from_json(r.at("replayedTxs"));
            rec.dropped_txs = hashes_from_json(r.at("droppedTxs"));
            rec.excluded_txs = hashes_from_json(r.at("excludedTxs"));
            chain.reorgs_.push_back(std::move(rec));
        }
        return chain;
    } catch (const Json::exception& e) {
        throw DecodeError(std::string("malformed chain snapshot: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DecodeError(std::string("malformed chain snapshot: ") + e.what());
    }
}

} // namespace twc::chain
