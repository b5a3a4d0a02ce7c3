#include "twc/chain/types.hpp"

#include "twc/common/errors.hpp"

namespace twc::chain {

void ChainConfig::validate() const
{
    if (network_id.empty())
        throw ConfigError("chain network id must be non-empty");
    if (block_time_ticks < 1)
        throw ConfigError("blockTimeTicks must be >= 1 for chain " + network_id);
}

Hash256 compute_tx_hash(HashAlg alg, const Transaction& tx)
{
    ByteWriter w;
    w.fixed(tx.sender).fixed(tx.recipient).var(tx.payload).u64(tx.value).u64(tx.nonce);
    return crypto::hash(alg, w.bytes());
}

const Bytes* EventLog::attribute(std::string_view key) const
{
    for (const auto& [k, v] : attributes)
        if (k == key)
            return &v;
    return nullptr;
}

Hash256 event_digest(HashAlg alg, const EventLog& e)
{
    ByteWriter w;
    w.fixed(e.emitter).str(e.name).u32(static_cast<std::uint32_t>(e.attributes.size()));
    for (const auto& [k, v] : e.attributes)
        w.str(k).var(v);
    w.fixed(e.tx_hash).u64(e.block_number);
    return crypto::hash(alg, w.bytes());
}

Hash256 compute_block_hash(HashAlg alg, std::string_view network_id, const Block& b)
{
    ByteWriter w;
    w.str(network_id).u64(b.number).fixed(b.parent_hash).u64(b.tick).u32(b.branch);
    w.u32(static_cast<std::uint32_t>(b.transactions.size()));
    for (std::size_t i = 0; i < b.transactions.size(); ++i) {
        w.fixed(b.transactions[i].hash);
        w.u8(i < b.receipts.size() ? static_cast<std::uint8_t>(b.receipts[i].status) : 0);
    }
    w.u32(static_cast<std::uint32_t>(b.events.size()));
    for (const auto& e : b.events)
        w.fixed(event_digest(alg, e));
    return crypto::hash(alg, w.bytes());
}

} // namespace twc::chain
