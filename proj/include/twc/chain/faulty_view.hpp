#pragma once

#include <variant>

#include "twc/chain/view.hpp"

namespace twc::chain {

/// The view reports `fake` as the hash of block `number`.
struct SubstituteBlockHash {
    std::uint64_t number = 0;
    Hash256 fake;
};

/// The view pretends `tx` (with its `events`) was sealed in block
/// `block_number`. Invisible until that block exists underneath.
struct FabricateTransaction {
    Transaction tx;
    std::vector<EventLog> events;
    std::uint64_t block_number = 0;
};

/// The view never returns events with this emitter and name.
struct HideEvents {
    Address emitter;
    std::string name;
};

/// The view is stuck at block `number` (a stale node).
struct FreezeHead {
    std::uint64_t number = 0;
};

using ViewCorruption =
    std::variant<std::monostate, SubstituteBlockHash, FabricateTransaction, HideEvents, FreezeHead>;

/// Read-only view over `base` that applies a deterministic lie. The
/// underlying chain is never touched.
ChainViewPtr faulty_view(ChainViewPtr base, ViewCorruption corruption);

} // namespace twc::chain
