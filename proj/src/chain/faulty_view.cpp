#include "twc/chain/faulty_view.hpp"

#include <algorithm>

#include "twc/common/errors.hpp"

namespace twc::chain {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

class FaultyView final : public ChainView {
public:
    FaultyView(ChainViewPtr base, ViewCorruption corruption)
        : base_(std::move(base)), corruption_(std::move(corruption))
    {
    }

    const ChainConfig& config() const override { return base_->config(); }

    std::uint64_t head_number() const override
    {
        if (auto* f = std::get_if<FreezeHead>(&corruption_))
            return std::min(base_->head_number(), f->number);
        return base_->head_number();
    }

    BlockPtr get_block(std::uint64_t number) const override
    {
        if (number > head_number())
            return nullptr;
        return patch(base_->get_block(number));
    }

    BlockPtr get_block_by_hash(const Hash256& hash) const override
    {
        if (auto* s = std::get_if<SubstituteBlockHash>(&corruption_)) {
            if (hash == s->fake)
                return get_block(s->number);
            auto b = base_->get_block_by_hash(hash);
            if (b && b->number == s->number)
                return nullptr;
        }
        auto b = base_->get_block_by_hash(hash);
        if (!b || b->number > head_number())
            return nullptr;
        return patch(b);
    }

    std::optional<TxLocation> get_transaction(const Hash256& tx_hash) const override
    {
        if (auto* f = std::get_if<FabricateTransaction>(&corruption_)) {
            if (tx_hash == f->tx.hash) {
                if (f->block_number > head_number())
                    return std::nullopt;
                auto b = get_block(f->block_number);
                return TxLocation{f->tx, Receipt{}, f->block_number,
                                  static_cast<std::uint32_t>(b->transactions.size() - 1)};
            }
        }
        auto loc = base_->get_transaction(tx_hash);
        if (loc && loc->block_number > head_number())
            return std::nullopt;
        return loc;
    }

    std::vector<EventLog> get_events(const Address& emitter, std::string_view name,
                                     std::uint64_t from, std::uint64_t to) const override
    {
        if (from > to)
            throw InvalidRange("event range is inverted");
        if (auto* h = std::get_if<HideEvents>(&corruption_))
            if (h->emitter == emitter && h->name == name)
                return {};
        to = std::min(to, head_number());
        if (from > to)
            return {};
        auto events = base_->get_events(emitter, name, from, to);
        if (auto* f = std::get_if<FabricateTransaction>(&corruption_)) {
            if (f->block_number >= from && f->block_number <= to) {
                auto pos = std::find_if(events.begin(), events.end(), [&](const EventLog& e) {
                    return e.block_number > f->block_number;
                });
                std::vector<EventLog> fake;
                for (auto e : f->events) {
                    if (e.emitter != emitter || e.name != name)
                        continue;
                    e.block_number = f->block_number;
                    e.tx_hash = f->tx.hash;
                    fake.push_back(std::move(e));
                }
                events.insert(pos, fake.begin(), fake.end());
            }
        }
        return events;
    }

private:
    BlockPtr patch(BlockPtr b) const
    {
        if (!b)
            return b;
        return std::visit(
            overloaded{
                [&](const SubstituteBlockHash& s) -> BlockPtr {
                    if (b->number != s.number)
                        return b;
                    auto copy = std::make_shared<Block>(*b);
                    copy->hash = s.fake;
                    return copy;
                },
                [&](const FabricateTransaction& f) -> BlockPtr {
                    if (b->number != f.block_number)
                        return b;
                    auto copy = std::make_shared<Block>(*b);
                    copy->transactions.push_back(f.tx);
                    copy->receipts.push_back(Receipt{});
                    for (auto e : f.events) {
                        e.block_number = b->number;
                        e.tx_hash = f.tx.hash;
                        copy->events.push_back(std::move(e));
                    }
                    return copy;
                },
                [&](const auto&) { return b; },
            },
            corruption_);
    }

    ChainViewPtr base_;
    ViewCorruption corruption_;
};

} // namespace

ChainViewPtr faulty_view(ChainViewPtr base, ViewCorruption corruption)
{
    return std::make_shared<FaultyView>(std::move(base), std::move(corruption));
}

} // namespace twc::chain
