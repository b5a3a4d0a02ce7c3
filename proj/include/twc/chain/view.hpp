#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "twc/chain/types.hpp"

namespace twc::chain {

using BlockPtr = std::shared_ptr<const Block>;

/// Read-only access to a chain as some actor sees it. Answers always describe
/// the canonical branch of whatever chain the view is connected to.
class ChainView {
public:
    virtual ~ChainView() = default;

    virtual const ChainConfig& config() const = 0;
    virtual std::uint64_t head_number() const = 0;
    virtual BlockPtr get_block(std::uint64_t number) const = 0;
    virtual BlockPtr get_block_by_hash(const Hash256& hash) const = 0;
    virtual std::optional<TxLocation> get_transaction(const Hash256& tx_hash) const = 0;
    /// Canonical events from `emitter` named `name` with block number in
    /// [from, to] (to is clipped to the head), ordered by block then index.
    /// Throws InvalidRange when from > to.
    virtual std::vector<EventLog> get_events(const Address& emitter, std::string_view name,
                                             std::uint64_t from, std::uint64_t to) const = 0;

    /// head - inclusion block; 0 for the head block, nullopt if not canonical.
    std::optional<std::uint64_t> confirmations(const Hash256& tx_hash) const;
    BlockPtr head() const { return get_block(head_number()); }
};

using ChainViewPtr = std::shared_ptr<const ChainView>;

} // namespace twc::chain
