// Simulated chain: block production, dispatch, reorgs, views and snapshots.

#include "catch_amalgamated.hpp"

#include <random>

#include "twc/chain/chain.hpp"
#include "twc/chain/faulty_view.hpp"
#include "twc/common/errors.hpp"

using namespace twc;
using namespace twc::chain;

namespace {

// Counts calls; payload "fail" reverts after mutating, "emit" logs an event,
// "relay:<hex address>" forwards to another contract and reports its status.
class Counter final : public Contract {
public:
    std::uint64_t count = 0;

    std::string_view kind() const override { return "counter"; }
    std::unique_ptr<Contract> clone() const override { return std::make_unique<Counter>(*this); }
    DispatchResult dispatch(CallContext& ctx, ByteSpan payload) override
    {
        std::string p(payload.begin(), payload.end());
        ++count;
        if (p == "fail")
            return DispatchResult::revert("Fail");
        if (p == "emit")
            ctx.emit("Counted", {{"count", Bytes{static_cast<std::uint8_t>(count)}}});
        if (p.starts_with("relay:")) {
            auto target = Address::from_hex(p.substr(6));
            auto r = ctx.call(target, as_bytes("fail"));
            ctx.emit("Relayed", {{"ok", Bytes{static_cast<std::uint8_t>(r.ok)}}});
        }
        return DispatchResult::success();
    }
    Json to_json() const override { return Json{{"count", count}}; }
};

ContractRegistry registry()
{
    return {{"counter", [](const Json& j) {
                 auto c = std::make_unique<Counter>();
                 c->count = j.at("count").get<std::uint64_t>();
                 return c;
             }}};
}

const Address alice = address_of("alice");
const Address bob = address_of("bob");
const Address counter = address_of("counter");
const Address counter2 = address_of("counter2");

Chain make_chain(HashAlg alg = HashAlg::keccak256)
{
    Chain c(ChainConfig{"test-net", 1, alg, 3});
    c.deploy(counter, std::make_unique<Counter>());
    c.deploy(counter2, std::make_unique<Counter>());
    c.fund(alice, 1000);
    c.fund(bob, 1000);
    return c;
}

Hash256 send(Chain& c, const Address& from, std::string_view payload, std::uint64_t value = 0,
             const Address& to = counter)
{
    auto b = as_bytes(payload);
    return c.submit_transaction(c.make_transaction(from, to, Bytes(b.begin(), b.end()), value));
}

std::uint64_t count_of(const Chain& c, const Address& at = counter)
{
    return c.contract_as<Counter>(at)->count;
}

void check_hash_chain(const Chain& c)
{
    for (std::uint64_t n = 1; n <= c.head_number(); ++n) {
        auto b = c.get_block(n);
        REQUIRE(b->number == n);
        CHECK(b->parent_hash == c.get_block(n - 1)->hash);
        CHECK(b->hash == compute_block_hash(c.config().hash_alg, c.config().network_id, *b));
    }
}

} // namespace

TEST_CASE("genesis", "[chain]")
{
    auto c = make_chain();
    auto g = c.get_block(0);
    REQUIRE(g);
    CHECK(g->number == 0);
    CHECK(g->parent_hash.is_zero());
    CHECK(c.head_number() == 0);
    CHECK_FALSE(c.get_block(1));
    CHECK_THROWS_AS(Chain(ChainConfig{"", 1, HashAlg::keccak256, 0}), ConfigError);
    CHECK_THROWS_AS(Chain(ChainConfig{"x", 0, HashAlg::keccak256, 0}), ConfigError);
}

TEST_CASE("submit and mine", "[chain]")
{
    auto c = make_chain();

    SECTION("single tx lands at position 0")
    {
        auto h = send(c, alice, "emit");
        const auto& b = c.mine_block(1);
        REQUIRE(b.transactions.size() == 1);
        CHECK(b.transactions[0].hash == h);
        CHECK(b.events.size() == 1);
        CHECK(c.get_transaction(h)->index == 0);
    }
    SECTION("FIFO order")
    {
        auto a = send(c, alice, "x");
        auto b = send(c, bob, "y");
        const auto& blk = c.mine_block(1);
        REQUIRE(blk.transactions.size() == 2);
        CHECK(blk.transactions[0].hash == a);
        CHECK(blk.transactions[1].hash == b);
    }
    SECTION("empty pool gives empty block")
    {
        c.mine_block(1);
        const auto& b = c.mine_block(2);
        CHECK(b.number == 2);
        CHECK(b.transactions.empty());
    }
    SECTION("duplicate hash is rejected")
    {
        auto tx = c.make_transaction(alice, counter, {1, 2, 3});
        auto h = c.submit_transaction(tx);
        // recomputing the canonical hash of the same fields gives the same digest
        CHECK(compute_tx_hash(HashAlg::keccak256, tx) == h);
        CHECK_THROWS_AS(c.submit_transaction(tx), DuplicateTransaction);
        c.mine_block(1);
        CHECK_THROWS_AS(c.submit_transaction(tx), DuplicateTransaction);
    }
    SECTION("genesis-only setup")
    {
        c.mine_block(1);
        CHECK_THROWS_AS(c.fund(alice, 1), ConfigError);
        CHECK_THROWS_AS(c.deploy(bob, std::make_unique<Counter>()), ConfigError);
    }
}

TEST_CASE("reverted dispatch is included without effects", "[chain]")
{
    auto c = make_chain();
    send(c, alice, "x");
    c.mine_block(1);
    auto before = c.state().to_json();

    auto h = send(c, alice, "fail", 100);
    const auto& b = c.mine_block(2);
    REQUIRE(b.transactions.size() == 1);
    CHECK(b.receipts[0].status == TxStatus::reverted);
    CHECK(b.receipts[0].revert_reason == "Fail");
    CHECK(b.events.empty());
    CHECK(c.get_transaction(h)->receipt.revert_reason == "Fail");

    // only the sender's nonce moves
    auto after = c.state().to_json();
    after["nonces"][alice.hex()] = before["nonces"][alice.hex()];
    CHECK(after == before);
}

TEST_CASE("nested call failure rolls back only the callee", "[chain]")
{
    auto c = make_chain();
    send(c, alice, "relay:" + counter2.hex());
    const auto& b = c.mine_block(1);
    CHECK(b.receipts[0].ok());
    CHECK(count_of(c, counter) == 1);
    CHECK(count_of(c, counter2) == 0);
    REQUIRE(b.events.size() == 1);
    CHECK(b.events[0].name == "Relayed");
    CHECK(*b.events[0].attribute("ok") == Bytes{0});
}

TEST_CASE("value transfer and insufficient balance", "[chain]")
{
    auto c = make_chain();
    send(c, alice, "x", 300);
    c.mine_block(1);
    CHECK(c.balance(alice) == 700);
    CHECK(c.balance(counter) == 300);

    auto h = send(c, alice, "x", 5000);
    c.mine_block(2);
    CHECK(c.get_transaction(h)->receipt.revert_reason == "InsufficientBalance");
    CHECK(c.balance(alice) == 700);
}

TEST_CASE("replay determinism", "[chain][property]")
{
    for (auto alg : {HashAlg::keccak256, HashAlg::blake2b256}) {
        auto a = make_chain(alg);
        auto b = make_chain(alg);
        std::mt19937_64 rng(11);
        const char* payloads[] = {"x", "emit", "fail"};
        for (int blk = 1; blk <= 20; ++blk) {
            auto n = rng() % 4;
            for (std::uint64_t i = 0; i < n; ++i) {
                auto p = payloads[rng() % 3];
                auto from = rng() % 2 ? alice : bob;
                send(a, from, p, rng() % 10);
            }
            for (const auto& tx : a.pending())
                b.submit_transaction(tx);
            CHECK(a.mine_block(blk) == b.mine_block(blk));
        }
        CHECK(a.dump() == b.dump());
    }
}

TEST_CASE("inject_reorg", "[chain][reorg]")
{
    auto c = make_chain();
    for (int i = 1; i <= 5; ++i) {
        send(c, alice, "emit");
        c.mine_block(i);
    }
    REQUIRE(c.head_number() == 5);

    SECTION("depth 1 replays everything into a new block")
    {
        auto old = c.get_block(5);
        auto rec = c.inject_reorg(1, {}, 6);
        CHECK(c.head_number() == 6);
        CHECK(rec.replayed_txs == std::vector<Hash256>{old->transactions[0].hash});
        CHECK_FALSE(c.get_block_by_hash(old->hash));
        CHECK(c.get_block(5)->hash != old->hash);
        auto loc = c.get_transaction(old->transactions[0].hash);
        REQUIRE(loc);
        CHECK(loc->block_number == 6);
        CHECK(count_of(c) == 5);
        check_hash_chain(c);
    }
    SECTION("dropped txs vanish from canonical history")
    {
        auto dropped = c.get_block(4)->transactions[0].hash;
        auto kept = c.get_block(5)->transactions[0].hash;
        auto rec = c.inject_reorg(3, {dropped}, 6);
        CHECK(c.head_number() == 6);
        CHECK_FALSE(c.get_transaction(dropped));
        CHECK_FALSE(c.confirmations(dropped));
        // alice's nonce chain is broken at the dropped tx, so its successor goes too
        CHECK(rec.excluded_txs == std::vector<Hash256>{kept});
        CHECK_FALSE(c.get_transaction(kept));
        CHECK(count_of(c) == 3);
        CHECK(c.get_events(counter, "Counted", 0, 100).size() == 3);
        CHECK(c.orphaned_blocks().size() == 3);
        check_hash_chain(c);
    }
    SECTION("depth beyond head is rejected")
    {
        CHECK_THROWS_AS(c.inject_reorg(6, {}, 6), InvalidReorg);
        CHECK_THROWS_AS(c.inject_reorg(0, {}, 6), InvalidReorg);
    }
    SECTION("replayed tx gets a new block number")
    {
        auto h = c.get_block(3)->transactions[0].hash;
        c.inject_reorg(3, {}, 6);
        CHECK(c.get_transaction(h)->block_number == 6);
        CHECK(c.confirmations(h) == 0u);
    }
}

TEST_CASE("reorgs keep dependent chains as a prefix", "[chain][reorg][property]")
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        auto c = make_chain();
        std::vector<Hash256> alice_chain;
        for (int blk = 1; blk <= 8; ++blk) {
            auto n = rng() % 3;
            for (std::uint64_t i = 0; i < n; ++i)
                alice_chain.push_back(send(c, alice, "x"));
            if (rng() % 2)
                send(c, bob, "x");
            c.mine_block(blk);
        }
        auto head_before = c.head_number();
        auto depth = 1 + rng() % head_before;
        std::set<Hash256> drop;
        for (const auto& h : alice_chain)
            if (rng() % 5 == 0)
                drop.insert(h);
        c.inject_reorg(depth, drop, 100);

        CHECK(c.head_number() == head_before + 1);
        check_hash_chain(c);

        // canonical part of alice's chain must be a prefix
        bool gap = false;
        for (const auto& h : alice_chain) {
            bool present = c.get_transaction(h).has_value();
            if (!present)
                gap = true;
            else
                CHECK_FALSE(gap);
        }

        std::set<Hash256> seen;
        for (std::uint64_t n = 0; n <= c.head_number(); ++n)
            for (const auto& tx : c.get_block(n)->transactions)
                CHECK(seen.insert(tx.hash).second);
    }
}

TEST_CASE("confirmations", "[chain]")
{
    auto c = make_chain();
    Hash256 at5;
    for (int i = 1; i <= 12; ++i) {
        if (i == 5)
            at5 = send(c, alice, "x");
        c.mine_block(i);
    }
    CHECK(c.confirmations(at5) == 7u);
    auto head_tx = send(c, bob, "x");
    c.mine_block(13);
    CHECK(c.confirmations(head_tx) == 0u);
    CHECK_FALSE(c.confirmations(Hash256{}));
}

TEST_CASE("get_events", "[chain]")
{
    auto c = make_chain();
    CHECK(c.get_events(counter, "Counted", 0, 10).empty());
    send(c, alice, "emit");
    send(c, bob, "emit");
    c.mine_block(1);
    send(c, alice, "emit");
    c.mine_block(2);
    auto ev = c.get_events(counter, "Counted", 0, 2);
    REQUIRE(ev.size() == 3);
    CHECK(ev[0].block_number == 1);
    CHECK(ev[2].block_number == 2);
    CHECK(c.get_events(counter, "Counted", 2, 2).size() == 1);
    CHECK_THROWS_AS(c.get_events(counter, "Counted", 2, 1), InvalidRange);
}

TEST_CASE("faulty views", "[chain][view]")
{
    auto c = std::make_shared<Chain>(make_chain());
    for (int i = 1; i <= 4; ++i) {
        send(*c, alice, "emit");
        c->mine_block(i);
    }

    SECTION("no corruption answers like the chain")
    {
        auto v = faulty_view(c, std::monostate{});
        CHECK(v->head_number() == c->head_number());
        for (std::uint64_t n = 0; n <= 4; ++n)
            CHECK(*v->get_block(n) == *c->get_block(n));
        CHECK(v->get_events(counter, "Counted", 0, 4) == c->get_events(counter, "Counted", 0, 4));
    }
    SECTION("substituted hash")
    {
        Hash256 fake;
        fake.bytes[0] = 0xee;
        auto real = c->get_block(2)->hash;
        auto v = faulty_view(c, SubstituteBlockHash{2, fake});
        CHECK(v->get_block(2)->hash == fake);
        CHECK(v->get_block_by_hash(fake)->number == 2);
        CHECK_FALSE(v->get_block_by_hash(real));
        CHECK(c->get_block(2)->hash == real);
    }
    SECTION("fabricated transaction")
    {
        Transaction tx;
        tx.sender = bob;
        tx.recipient = counter;
        tx.hash.bytes[0] = 0xab;
        EventLog e{counter, "Counted", {{"count", {99}}}, {}, 0};
        auto v = faulty_view(c, FabricateTransaction{tx, {e}, 3});
        auto loc = v->get_transaction(tx.hash);
        REQUIRE(loc);
        CHECK(loc->block_number == 3);
        CHECK(v->confirmations(tx.hash) == 1u);
        CHECK(v->get_events(counter, "Counted", 0, 4).size() == 5);
        CHECK(v->get_block(3)->transactions.size() == 2);
        CHECK_FALSE(c->get_transaction(tx.hash));
    }
    SECTION("frozen head and hidden events")
    {
        auto frozen = faulty_view(c, FreezeHead{2});
        CHECK(frozen->head_number() == 2);
        CHECK_FALSE(frozen->get_block(3));
        CHECK(frozen->get_events(counter, "Counted", 0, 10).size() == 2);
        auto hidden = faulty_view(c, HideEvents{counter, "Counted"});
        CHECK(hidden->get_events(counter, "Counted", 0, 10).empty());
    }
}

TEST_CASE("snapshot dump and restore", "[chain][snapshot]")
{
    auto c = make_chain(HashAlg::blake2b256);
    for (int i = 1; i <= 6; ++i) {
        send(c, alice, i % 3 ? "emit" : "fail", 1);
        c.mine_block(i);
    }
    c.inject_reorg(2, {}, 7);
    send(c, bob, "x");

    auto text = c.dump();
    auto restored = Chain::restore(text, registry());
    CHECK(restored.dump() == text);
    CHECK(restored.head_number() == c.head_number());

    // the restored chain keeps working identically
    restored.mine_block(8);
    c.mine_block(8);
    CHECK(restored.dump() == c.dump());

    auto tampered = text;
    auto pos = tampered.find("\"tick\": 3");
    REQUIRE(pos != std::string::npos);
    tampered.replace(pos, 9, "\"tick\": 4");
    CHECK_THROWS_AS(Chain::restore(tampered, registry()), DecodeError);
    CHECK_THROWS_AS(Chain::restore("{", registry()), DecodeError);
}
