#include "twc/chain/chain.hpp"

#include <algorithm>

#include "twc/common/errors.hpp"

namespace twc::chain {

// ---------------------------------------------------------------------------
// WorldState

WorldState::WorldState(const WorldState& other)
    : balances(other.balances), nonces(other.nonces)
{
    for (const auto& [addr, c] : other.contracts)
        contracts.emplace(addr, c->clone());
}

WorldState& WorldState::operator=(const WorldState& other)
{
    if (this != &other) {
        WorldState copy(other);
        *this = std::move(copy);
    }
    return *this;
}

std::uint64_t WorldState::balance(const Address& a) const
{
    auto it = balances.find(a);
    return it == balances.end() ? 0 : it->second;
}

std::uint64_t WorldState::nonce(const Address& a) const
{
    auto it = nonces.find(a);
    return it == nonces.end() ? 0 : it->second;
}

Json WorldState::to_json() const
{
    Json j;
    j["balances"] = Json::object();
    for (const auto& [a, v] : balances)
        j["balances"][a.hex()] = v;
    j["nonces"] = Json::object();
    for (const auto& [a, v] : nonces)
        j["nonces"][a.hex()] = v;
    j["contracts"] = Json::object();
    for (const auto& [a, c] : contracts)
        j["contracts"][a.hex()] = Json{{"kind", c->kind()}, {"state", c->to_json()}};
    return j;
}

// ---------------------------------------------------------------------------
// Executor: one transaction's call tree with nested rollback frames.

class Executor {
public:
    Executor(const Chain& chain, WorldState& state, const Transaction& tx,
             std::uint64_t block_number, std::vector<EventLog>& events)
        : chain_(chain), state_(state), tx_(tx), block_number_(block_number), events_(events)
    {
    }

    DispatchResult invoke(const Address& from, const Address& to, ByteSpan payload,
                          std::uint64_t value)
    {
        frames_.push_back(Frame{state_.balances, {}, events_.size()});

        auto result = [&]() -> DispatchResult {
            if (!move_value(from, to, value))
                return DispatchResult::revert("InsufficientBalance");
            auto it = state_.contracts.find(to);
            if (it == state_.contracts.end())
                return DispatchResult::success();
            if (std::find(call_stack_.begin(), call_stack_.end(), to) != call_stack_.end())
                return DispatchResult::revert("Reentrancy");

            frames_.back().backups.emplace_back(to, it->second->clone());
            call_stack_.push_back(to);
            CallContext ctx(*this, to, from, value);
            DispatchResult r;
            try {
                r = it->second->dispatch(ctx, payload);
            } catch (const std::exception&) {
                r = DispatchResult::revert("BadPayload");
            }
            call_stack_.pop_back();
            return r;
        }();

        Frame frame = std::move(frames_.back());
        frames_.pop_back();
        if (!result.ok) {
            state_.balances = std::move(frame.balances);
            for (auto& [addr, backup] : frame.backups)
                state_.contracts[addr] = std::move(backup);
            events_.resize(frame.event_mark);
        } else if (!frames_.empty()) {
            auto& parent = frames_.back().backups;
            for (auto& [addr, backup] : frame.backups) {
                bool held = std::any_of(parent.begin(), parent.end(),
                                        [&](const auto& p) { return p.first == addr; });
                if (!held)
                    parent.emplace_back(addr, std::move(backup));
            }
        }
        return result;
    }

    bool move_value(const Address& from, const Address& to, std::uint64_t amount)
    {
        if (amount == 0)
            return true;
        auto& src = state_.balances[from];
        if (src < amount)
            return false;
        src -= amount;
        state_.balances[to] += amount;
        return true;
    }

    void emit(const Address& emitter, std::string name, std::vector<Attribute> attributes)
    {
        events_.push_back(EventLog{emitter, std::move(name), std::move(attributes), tx_.hash,
                                   block_number_});
    }

    bool is_contract(const Address& a) const { return state_.contracts.contains(a); }

    std::uint64_t block_number() const { return block_number_; }
    const Hash256& tx_hash() const { return tx_.hash; }
    const ChainConfig& config() const { return chain_.config(); }

private:
    struct Frame {
        std::map<Address, std::uint64_t> balances;
        std::vector<std::pair<Address, std::unique_ptr<Contract>>> backups;
        std::size_t event_mark;
    };

    const Chain& chain_;
    WorldState& state_;
    const Transaction& tx_;
    std::uint64_t block_number_;
    std::vector<EventLog>& events_;
    std::vector<Frame> frames_;
    std::vector<Address> call_stack_;
};

std::uint64_t CallContext::block_number() const
{
    return exec_.block_number();
}

const Hash256& CallContext::tx_hash() const
{
    return exec_.tx_hash();
}

HashAlg CallContext::hash_alg() const
{
    return exec_.config().hash_alg;
}

const std::string& CallContext::network_id() const
{
    return exec_.config().network_id;
}

void CallContext::emit(std::string name, std::vector<Attribute> attributes)
{
    exec_.emit(self_, std::move(name), std::move(attributes));
}

bool CallContext::transfer(const Address& to, std::uint64_t amount)
{
    return exec_.move_value(self_, to, amount);
}

bool CallContext::is_contract(const Address& a) const
{
    return exec_.is_contract(a);
}

DispatchResult CallContext::call(const Address& to, ByteSpan payload, std::uint64_t value)
{
    return exec_.invoke(self_, to, payload, value);
}

// ---------------------------------------------------------------------------
// Chain

Chain::Chain(ChainConfig config) : config_(std::move(config))
{
    config_.validate();
    Block genesis;
    seal(genesis);
    blocks_.push_back(std::make_shared<const Block>(std::move(genesis)));
    block_by_hash_[blocks_.back()->hash] = 0;
}

void Chain::deploy(const Address& at, std::unique_ptr<Contract> contract)
{
    if (head_number() != 0 || !reorgs_.empty())
        throw ConfigError("contracts can only be deployed at genesis");
    genesis_state_.contracts[at] = contract->clone();
    state_.contracts[at] = std::move(contract);
}

void Chain::fund(const Address& account, std::uint64_t amount)
{
    if (head_number() != 0 || !reorgs_.empty())
        throw ConfigError("accounts can only be funded at genesis");
    genesis_state_.balances[account] += amount;
    state_.balances[account] += amount;
}

std::uint64_t Chain::next_nonce(const Address& sender) const
{
    auto n = state_.nonce(sender);
    for (const auto& tx : pending_)
        if (tx.sender == sender)
            n = std::max(n, tx.nonce + 1);
    return n;
}

Transaction Chain::make_transaction(const Address& sender, const Address& recipient, Bytes payload,
                                    std::uint64_t value) const
{
    Transaction tx;
    tx.sender = sender;
    tx.recipient = recipient;
    tx.payload = std::move(payload);
    tx.value = value;
    tx.nonce = next_nonce(sender);
    return tx;
}

Hash256 Chain::submit_transaction(Transaction tx)
{
    tx.hash = compute_tx_hash(config_.hash_alg, tx);
    if (pending_hashes_.contains(tx.hash) || tx_index_.contains(tx.hash))
        throw DuplicateTransaction("transaction " + tx.hash.hex() + " already known on " +
                                   config_.network_id);
    pending_hashes_.insert(tx.hash);
    pending_.push_back(std::move(tx));
    return pending_.back().hash;
}

Receipt Chain::execute(WorldState& state, const Transaction& tx, std::uint64_t block_number,
                       std::vector<EventLog>& events) const
{
    state.nonces[tx.sender] = tx.nonce + 1;
    Executor exec(*this, state, tx, block_number, events);
    auto r = exec.invoke(tx.sender, tx.recipient, tx.payload, tx.value);
    if (r.ok)
        return {};
    return Receipt{TxStatus::reverted, r.reason};
}

void Chain::seal(Block& b)
{
    b.hash = compute_block_hash(config_.hash_alg, config_.network_id, b);
}

void Chain::index_block(const Block& b)
{
    block_by_hash_[b.hash] = b.number;
    for (std::uint32_t i = 0; i < b.transactions.size(); ++i)
        tx_index_[b.transactions[i].hash] = {b.number, i};
}

void Chain::unindex_block(const Block& b)
{
    block_by_hash_.erase(b.hash);
    for (const auto& tx : b.transactions)
        tx_index_.erase(tx.hash);
}

const Block& Chain::mine_block(std::uint64_t tick)
{
    Block b;
    b.number = head_number() + 1;
    b.parent_hash = blocks_.back()->hash;
    b.tick = tick;
    b.branch = branch_;

    for (auto& tx : pending_) {
        if (tx.nonce != state_.nonce(tx.sender)) {
            discarded_.push_back(std::move(tx));
            continue;
        }
        b.receipts.push_back(execute(state_, tx, b.number, b.events));
        b.transactions.push_back(std::move(tx));
    }
    pending_.clear();
    pending_hashes_.clear();

    seal(b);
    index_block(b);
    blocks_.push_back(std::make_shared<const Block>(std::move(b)));
    return *blocks_.back();
}

WorldState Chain::replay_to(std::uint64_t last_block) const
{
    WorldState s = genesis_state_;
    std::vector<EventLog> scratch;
    for (std::uint64_t n = 1; n <= last_block; ++n) {
        for (const auto& tx : blocks_[n]->transactions) {
            execute(s, tx, n, scratch);
            scratch.clear();
        }
    }
    return s;
}

ReorgRecord Chain::inject_reorg(std::uint64_t depth, const std::set<Hash256>& drop_txs,
                                std::uint64_t tick)
{
    if (depth == 0 || depth > head_number())
        throw InvalidReorg("reorg depth " + std::to_string(depth) + " invalid at head " +
                           std::to_string(head_number()));

    ReorgRecord rec;
    rec.depth = depth;
    rec.fork_point = head_number() - depth;
    rec.old_head = blocks_.back()->hash;
    auto reorg_index = static_cast<std::uint32_t>(reorgs_.size());

    std::vector<Transaction> replay;
    for (auto n = rec.fork_point + 1; n <= head_number(); ++n) {
        const auto& b = blocks_[n];
        unindex_block(*b);
        orphaned_.push_back({reorg_index, b});
        for (const auto& tx : b->transactions) {
            rec.orphaned_txs.push_back(tx.hash);
            if (drop_txs.contains(tx.hash))
                rec.dropped_txs.push_back(tx.hash);
            else
                replay.push_back(tx);
        }
    }
    blocks_.resize(rec.fork_point + 1);
    state_ = replay_to(rec.fork_point);
    ++branch_;

    for (std::uint64_t i = 0; i <= depth; ++i) {
        Block b;
        b.number = head_number() + 1;
        b.parent_hash = blocks_.back()->hash;
        b.tick = tick;
        b.branch = branch_;
        if (i == depth) {
            for (auto& tx : replay) {
                if (tx.nonce != state_.nonce(tx.sender)) {
                    rec.excluded_txs.push_back(tx.hash);
                    continue;
                }
                rec.replayed_txs.push_back(tx.hash);
                b.receipts.push_back(execute(state_, tx, b.number, b.events));
                b.transactions.push_back(std::move(tx));
            }
        }
        seal(b);
        index_block(b);
        blocks_.push_back(std::make_shared<const Block>(std::move(b)));
    }

    // Pending transactions now duplicating a replayed one are dropped.
    std::erase_if(pending_, [this](const Transaction& tx) {
        if (!tx_index_.contains(tx.hash))
            return false;
        pending_hashes_.erase(tx.hash);
        return true;
    });

    rec.new_head = blocks_.back()->hash;
    reorgs_.push_back(rec);
    return rec;
}

BlockPtr Chain::get_block(std::uint64_t number) const
{
    return number < blocks_.size() ? blocks_[number] : nullptr;
}

BlockPtr Chain::get_block_by_hash(const Hash256& hash) const
{
    auto it = block_by_hash_.find(hash);
    return it == block_by_hash_.end() ? nullptr : blocks_[it->second];
}

std::optional<TxLocation> Chain::get_transaction(const Hash256& tx_hash) const
{
    auto it = tx_index_.find(tx_hash);
    if (it == tx_index_.end())
        return std::nullopt;
    auto [number, index] = it->second;
    const auto& b = *blocks_[number];
    return TxLocation{b.transactions[index], b.receipts[index], number, index};
}

std::vector<EventLog> Chain::get_events(const Address& emitter, std::string_view name,
                                        std::uint64_t from, std::uint64_t to) const
{
    if (from > to)
        throw InvalidRange("event range [" + std::to_string(from) + ", " + std::to_string(to) +
                           "] is inverted");
    std::vector<EventLog> out;
    for (auto n = from; n <= std::min(to, head_number()); ++n)
        for (const auto& e : blocks_[n]->events)
            if (e.emitter == emitter && e.name == name)
                out.push_back(e);
    return out;
}

const Contract* Chain::contract(const Address& at) const
{
    auto it = state_.contracts.find(at);
    return it == state_.contracts.end() ? nullptr : it->second.get();
}

std::optional<std::uint64_t> ChainView::confirmations(const Hash256& tx_hash) const
{
    auto loc = get_transaction(tx_hash);
    if (!loc)
        return std::nullopt;
    return head_number() - loc->block_number;
}

} // namespace twc::chain
