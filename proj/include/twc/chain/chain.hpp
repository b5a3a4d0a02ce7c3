#pragma once

#include <deque>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "twc/chain/contract.hpp"
#include "twc/chain/view.hpp"

namespace twc::chain {

/// Balances, account nonces and contract states. Copies are deep.
struct WorldState {
    std::map<Address, std::uint64_t> balances;
    std::map<Address, std::uint64_t> nonces;
    std::map<Address, std::unique_ptr<Contract>> contracts;

    WorldState() = default;
    WorldState(const WorldState& other);
    WorldState& operator=(const WorldState& other);
    WorldState(WorldState&&) = default;
    WorldState& operator=(WorldState&&) = default;

    std::uint64_t balance(const Address& a) const;
    std::uint64_t nonce(const Address& a) const;
    Json to_json() const;
};

struct OrphanedBlock {
    std::uint32_t reorg_index = 0;
    BlockPtr block;
};

struct ReorgRecord {
    std::uint64_t fork_point = 0; ///< last block shared by both branches
    std::uint64_t depth = 0;
    Hash256 old_head;
    Hash256 new_head;
    std::vector<Hash256> orphaned_txs;
    std::vector<Hash256> replayed_txs;
    std::vector<Hash256> dropped_txs;  ///< requested by the caller
    std::vector<Hash256> excluded_txs; ///< no longer valid after the rewind (nonce gap)
};

/// Deterministic simulated blockchain. Blocks are sealed on demand by the
/// scheduler, reorgs are injected explicitly, and orphaned branches are kept
/// in a side store that only the harness reads.
class Chain final : public ChainView {
public:
    explicit Chain(ChainConfig config);

    /// Genesis-only setup: both throw ConfigError once a block has been mined.
    void deploy(const Address& at, std::unique_ptr<Contract> contract);
    void fund(const Address& account, std::uint64_t amount);

    /// Builds an unsigned transaction carrying the sender's next free nonce
    /// (account nonce plus anything already pending).
    Transaction make_transaction(const Address& sender, const Address& recipient, Bytes payload,
                                 std::uint64_t value = 0) const;
    /// Computes the hash and queues the transaction. Throws DuplicateTransaction
    /// if the hash is already pending or canonical.
    Hash256 submit_transaction(Transaction tx);
    std::uint64_t next_nonce(const Address& sender) const;
    const std::deque<Transaction>& pending() const { return pending_; }

    /// Executes the pending pool in FIFO order. Transactions whose nonce no
    /// longer matches the sender's account nonce are dropped, not included.
    const Block& mine_block(std::uint64_t tick);

    /// Replaces the top `depth` blocks with a branch of depth + 1 blocks. The
    /// surviving orphaned transactions are replayed, in their original order,
    /// in the new tip. Throws InvalidReorg if depth is 0 or exceeds the head.
    ReorgRecord inject_reorg(std::uint64_t depth, const std::set<Hash256>& drop_txs,
                             std::uint64_t tick);

    // ChainView
    const ChainConfig& config() const override { return config_; }
    std::uint64_t head_number() const override { return blocks_.size() - 1; }
    BlockPtr get_block(std::uint64_t number) const override;
    BlockPtr get_block_by_hash(const Hash256& hash) const override;
    std::optional<TxLocation> get_transaction(const Hash256& tx_hash) const override;
    std::vector<EventLog> get_events(const Address& emitter, std::string_view name,
                                     std::uint64_t from, std::uint64_t to) const override;

    const WorldState& state() const { return state_; }
    const Contract* contract(const Address& at) const;
    template <class T>
    const T* contract_as(const Address& at) const
    {
        return dynamic_cast<const T*>(contract(at));
    }
    std::uint64_t balance(const Address& a) const { return state_.balance(a); }

    /// Ground-truth side store of every block ever orphaned. Not part of
    /// the ChainView surface.
    const std::vector<OrphanedBlock>& orphaned_blocks() const { return orphaned_; }
    const std::vector<ReorgRecord>& reorgs() const { return reorgs_; }
    const std::vector<Transaction>& discarded() const { return discarded_; }

    /// Canonical text snapshot (stable key order) of the full chain.
    std::string dump() const;
    /// Rebuilds a chain from dump(); hashes are recomputed and checked.
    /// Throws DecodeError on malformed or inconsistent input.
    static Chain restore(std::string_view text, const ContractRegistry& registry);

private:
    friend class Executor;

    Receipt execute(WorldState& state, const Transaction& tx, std::uint64_t block_number,
                    std::vector<EventLog>& events) const;
    void seal(Block& b);
    void index_block(const Block& b);
    void unindex_block(const Block& b);
    WorldState replay_to(std::uint64_t last_block) const;

    ChainConfig config_;
    std::vector<BlockPtr> blocks_;
    std::unordered_map<Hash256, std::uint64_t> block_by_hash_;
    std::unordered_map<Hash256, std::pair<std::uint64_t, std::uint32_t>> tx_index_;
    std::deque<Transaction> pending_;
    std::set<Hash256> pending_hashes_;
    WorldState genesis_state_;
    WorldState state_;
    std::uint32_t branch_ = 0;
    std::vector<OrphanedBlock> orphaned_;
    std::vector<ReorgRecord> reorgs_;
    std::vector<Transaction> discarded_;
};

} // namespace twc::chain
