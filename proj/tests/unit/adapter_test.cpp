// Adapter contract: egress, ingress checks, administration, and the demo
// user contracts, all exercised through chain dispatch.

#include "catch_amalgamated.hpp"

#include <random>

#include "twc/adapter/adapter.hpp"
#include "twc/chain/chain.hpp"
#include "twc/common/errors.hpp"
#include "twc/contracts/registry.hpp"
#include "twc/contracts/storage.hpp"
#include "twc/contracts/token.hpp"

using namespace twc;
using namespace twc::adapter;
using chain::Chain;
using chain::ChainConfig;
using crypto::HashAlg;

namespace {

const Address owner = address_of("owner");
const Address relayer = address_of("relayer");
const Address user = address_of("user");
const Address stranger = address_of("stranger");
const Address adapter_at = address_of("adapter");
const Address storage_at = address_of("storage");
const Address remote_adapter = address_of("remote-adapter");

std::vector<crypto::Keypair> make_keys(std::size_t n, std::string_view prefix = "sig")
{
    std::vector<crypto::Keypair> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(crypto::keygen(crypto::seed_from_label(std::string(prefix) + std::to_string(i))));
    return out;
}

std::vector<PublicKey> pubs(const std::vector<crypto::Keypair>& keys)
{
    std::vector<PublicKey> out;
    for (const auto& k : keys)
        out.push_back(k.public_key);
    return out;
}

struct Fixture {
    std::vector<crypto::Keypair> keys;
    Chain chain;

    explicit Fixture(std::size_t n = 3, std::uint32_t quorum = 2, std::uint64_t fee = 10,
                     bool only_authorized = false, HashAlg alg = HashAlg::keccak256)
        : keys(make_keys(n)), chain(ChainConfig{"dest-net", 1, alg, 2})
    {
        AdapterConfig cfg;
        cfg.owner = owner;
        cfg.relayer = relayer;
        cfg.signatories = pubs(keys);
        cfg.quorum = quorum;
        cfg.transaction_fee = fee;
        cfg.accept_only_authorized = only_authorized;
        cfg.authorized_senders = {user};
        cfg.remote_adapter = remote_adapter;
        chain.deploy(adapter_at, std::make_unique<Adapter>(init_adapter(cfg)));
        chain.deploy(storage_at, std::make_unique<contracts::StorageContract>());
        for (auto a : {owner, relayer, user, stranger})
            chain.fund(a, 1'000'000);
    }

    const AdapterState& state() const { return chain.contract_as<Adapter>(adapter_at)->state(); }

    /// Submits and mines one transaction; returns the sealed block.
    const chain::Block& run(const Address& from, Bytes payload, std::uint64_t value = 0)
    {
        chain.submit_transaction(chain.make_transaction(from, adapter_at, std::move(payload), value));
        return chain.mine_block(chain.head_number() + 1);
    }

    TransferMessage message(std::uint64_t id, std::uint64_t v = 1) const
    {
        TransferMessage m;
        m.source_tx_hash = crypto::keccak256(as_bytes("src-tx-" + std::to_string(id)));
        m.source_adapter = remote_adapter;
        m.recipient = storage_at;
        m.encoded_call = crypto::encode_function_call("setValue(uint128)", {crypto::word_from_u128(v)}).bytes;
        m.gas = 50'000;
        m.transfer_id = id;
        m.source_network_id = "src-net";
        return m;
    }

    SignatureEntry signed_by(std::size_t i, const TransferMessage& m) const
    {
        auto sig = crypto::sign(keys[i], crypto::compute_transfer_hash(m, chain.config().hash_alg));
        return {keys[i].public_key, Bytes(sig.begin(), sig.end())};
    }

    SignatureBundle bundle(const TransferMessage& m, std::initializer_list<std::size_t> who) const
    {
        SignatureBundle b;
        for (auto i : who)
            b.push_back(signed_by(i, m));
        return b;
    }
};

std::string revert_reason(const chain::Block& b)
{
    REQUIRE(b.receipts.size() == 1);
    return b.receipts[0].revert_reason;
}

std::uint64_t storage_value(const Chain& c)
{
    return static_cast<std::uint64_t>(c.contract_as<contracts::StorageContract>(storage_at)->value());
}

} // namespace

TEST_CASE("init_adapter bounds", "[adapter]")
{
    auto keys = pubs(make_keys(3));
    AdapterConfig cfg{owner, relayer, keys, 2, 10, false, {}, {}};
    auto s = init_adapter(cfg);
    CHECK(s.quorum == 2);
    CHECK(s.transaction_fee == 10);
    CHECK(s.outbound_nonce == 0);
    CHECK(s.expected_inbound_nonce == 0);
    CHECK(s.processed.empty());

    cfg.quorum = 0;
    CHECK_THROWS_AS(init_adapter(cfg), ConfigError);
    cfg.quorum = 4;
    CHECK_THROWS_AS(init_adapter(cfg), ConfigError);
    cfg.quorum = 2;
    cfg.signatories = {keys[0], keys[0], keys[1]};
    CHECK_THROWS_AS(init_adapter(cfg), ConfigError);
}

TEST_CASE("two-thirds quorum", "[adapter]")
{
    // smallest q with 3q >= 2N
    for (std::size_t n = 1; n <= 30; ++n) {
        auto q = two_thirds_quorum(n);
        CHECK(3 * q >= 2 * n);
        CHECK(3 * (q - 1) < 2 * n);
    }
    CHECK(two_thirds_quorum(3) == 2);
    CHECK(two_thirds_quorum(4) == 3);
}

TEST_CASE("request_transfer", "[adapter][egress]")
{
    Fixture f(3, 2, 10, true);
    auto call = crypto::encode_function_call("setValue(uint128)", {crypto::word_from_u128(1)}).bytes;
    auto req = encode_request_transfer(storage_at, call, 21'000);

    SECTION("exact fee from an authorized sender")
    {
        const auto& b = f.run(user, req, 10);
        REQUIRE(b.receipts[0].ok());
        REQUIRE(b.events.size() == 1);
        auto ev = parse_transfer_requested(b.events[0]);
        CHECK(ev.transfer_id == 0);
        CHECK(ev.recipient == storage_at);
        CHECK(ev.encoded_call == call);
        CHECK(ev.gas == 21'000);
        CHECK(f.state().outbound_nonce == 1);
        CHECK(f.state().collected_fees == 10);

        auto m = message_from_event(b.events[0], "dest-net");
        CHECK(m.source_tx_hash == b.transactions[0].hash);
        CHECK(m.source_adapter == adapter_at);
    }
    SECTION("excess value is refunded")
    {
        auto before = f.chain.balance(user);
        f.run(user, req, 25);
        CHECK(f.chain.balance(user) == before - 10);
        CHECK(f.chain.balance(adapter_at) == 10);
        CHECK(f.state().collected_fees == 10);
    }
    SECTION("fee too low")
    {
        auto before = f.state();
        const auto& b = f.run(user, req, 9);
        CHECK(revert_reason(b) == "FeeTooLow");
        CHECK(b.events.empty());
        CHECK(f.state() == before);
    }
    SECTION("unauthorized sender")
    {
        const auto& b = f.run(stranger, req, 10);
        CHECK(revert_reason(b) == "Unauthorized");
        CHECK(f.state().outbound_nonce == 0);
    }
    SECTION("malformed call and excessive gas")
    {
        CHECK(revert_reason(f.run(user, encode_request_transfer(storage_at, Bytes{1, 2}, 0), 10)) ==
              "MalformedCall");
        CHECK(revert_reason(f.run(user, encode_request_transfer(storage_at, call, max_gas + 1), 10)) ==
              "GasTooHigh");
        CHECK(revert_reason(f.run(user, Bytes{1, 2, 3}, 10)) == "BadPayload");
        CHECK(revert_reason(f.run(user, Bytes{9}, 10)) == "UnknownMethod");
    }
    SECTION("ids increase across blocks")
    {
        f.chain.submit_transaction(f.chain.make_transaction(user, adapter_at, req, 10));
        f.chain.submit_transaction(f.chain.make_transaction(user, adapter_at, req, 10));
        f.chain.mine_block(1);
        f.run(user, req, 10);
        auto events = f.chain.get_events(adapter_at, ev_transfer_requested, 0, f.chain.head_number());
        REQUIRE(events.size() == 3);
        for (std::uint64_t i = 0; i < 3; ++i)
            CHECK(parse_transfer_requested(events[i]).transfer_id == i);
    }
}

TEST_CASE("fee semantics over random (fee, value)", "[adapter][property]")
{
    std::mt19937_64 rng(8);
    Fixture f(1, 1, 0);
    auto call = crypto::encode_function_call("noop()", {}).bytes;
    for (int i = 0; i < 300; ++i) {
        std::uint64_t fee = rng() % 1000;
        std::uint64_t value = rng() % 2000;
        f.run(owner, encode_admin_set(SetTransactionFee{fee}));

        auto before = f.state();
        auto user_before = f.chain.balance(user);
        const auto& b = f.run(user, encode_request_transfer(storage_at, call, 0), value);
        if (value < fee) {
            CHECK(revert_reason(b) == "FeeTooLow");
            CHECK(b.events.empty());
            CHECK(f.state() == before);
            CHECK(f.chain.balance(user) == user_before);
        } else {
            REQUIRE(b.receipts[0].ok());
            CHECK(b.events.size() == 1);
            CHECK(f.state().collected_fees == before.collected_fees + fee);
            CHECK(f.chain.balance(user) == user_before - fee);
        }
    }
    auto requests = f.chain.get_events(adapter_at, ev_transfer_requested, 0, f.chain.head_number());
    CHECK(f.state().outbound_nonce == requests.size());
}

TEST_CASE("process_transfer ordered checks", "[adapter][ingress]")
{
    Fixture f;
    auto m = f.message(0, 1);

    SECTION("quorum of valid signatures from the relayer")
    {
        const auto& b = f.run(relayer, encode_process_transfer(m, f.bundle(m, {0, 2})));
        REQUIRE(b.receipts[0].ok());
        REQUIRE(b.events.size() == 1);
        auto p = parse_processed(b.events[0]);
        CHECK(p.source_tx_hash == m.source_tx_hash);
        CHECK(p.transfer_id == 0);
        CHECK(p.call_ok);
        CHECK(storage_value(f.chain) == 1);
        CHECK(f.state().expected_inbound_nonce == 1);
        CHECK(f.state().processed.at(m.source_tx_hash) == b.number);
    }
    SECTION("caller other than the relayer")
    {
        CHECK(revert_reason(f.run(stranger, encode_process_transfer(m, f.bundle(m, {0, 1, 2})))) ==
              "NotRelayer");
        CHECK(storage_value(f.chain) == 0);
    }
    SECTION("resubmission reports the original block")
    {
        auto payload = encode_process_transfer(m, f.bundle(m, {0, 1}));
        auto first = f.run(relayer, payload).number;
        f.chain.mine_block(f.chain.head_number() + 1);
        auto state_before = f.chain.state().to_json();
        auto m2 = m;
        m2.encoded_call = crypto::encode_function_call("setValue(uint128)", {crypto::word_from_u128(7)}).bytes;
        const auto& b = f.run(relayer, encode_process_transfer(m2, {}));
        REQUIRE(b.receipts[0].ok());
        REQUIRE(b.events.size() == 1);
        auto a = parse_already_processed(b.events[0]);
        CHECK(a.source_tx_hash == m.source_tx_hash);
        CHECK(a.original_block == first);
        auto after = f.chain.state().to_json();
        after["nonces"][relayer.hex()] = state_before["nonces"][relayer.hex()];
        CHECK(after == state_before);
    }
    SECTION("out of order")
    {
        auto m5 = f.message(5);
        CHECK(revert_reason(f.run(relayer, encode_process_transfer(m5, f.bundle(m5, {0, 1})))) == "OutOfOrder");
    }
    SECTION("duplicate signer counts once")
    {
        Fixture g(3, 3);
        auto gm = g.message(0);
        auto b = g.bundle(gm, {0, 0, 1});
        CHECK(revert_reason(g.run(relayer, encode_process_transfer(gm, b))) == "InsufficientSignatures");
    }
    SECTION("empty bundle")
    {
        CHECK(revert_reason(f.run(relayer, encode_process_transfer(m, {}))) == "InsufficientSignatures");
    }
    SECTION("unknown key or bad signature reverts")
    {
        auto outsider = make_keys(1, "outsider")[0];
        auto b = f.bundle(m, {0, 1});
        auto sig = crypto::sign(outsider, crypto::compute_transfer_hash(m, HashAlg::keccak256));
        b.push_back({outsider.public_key, Bytes(sig.begin(), sig.end())});
        CHECK(revert_reason(f.run(relayer, encode_process_transfer(m, b))) == "InvalidSignature");

        auto bad = f.bundle(m, {0, 1});
        bad[1].signature[5] ^= 1;
        CHECK(revert_reason(f.run(relayer, encode_process_transfer(m, bad))) == "InvalidSignature");

        auto short_sig = f.bundle(m, {0, 1});
        short_sig[0].signature.pop_back();
        CHECK(revert_reason(f.run(relayer, encode_process_transfer(m, short_sig))) == "InvalidSignature");
    }
    SECTION("signatures over the source hash algorithm do not verify")
    {
        Fixture g(3, 2, 10, false, HashAlg::blake2b256);
        auto gm = g.message(0);
        SignatureBundle b;
        for (std::size_t i : {0, 1}) {
            auto sig = crypto::sign(g.keys[i], crypto::compute_transfer_hash(gm, HashAlg::keccak256));
            b.push_back({g.keys[i].public_key, Bytes(sig.begin(), sig.end())});
        }
        CHECK(revert_reason(g.run(relayer, encode_process_transfer(gm, b))) == "InvalidSignature");
        CHECK(g.run(relayer, encode_process_transfer(gm, g.bundle(gm, {0, 1}))).receipts[0].ok());
    }
    SECTION("failing recipient call is recorded, nonce still advances")
    {
        auto bad = m;
        bad.encoded_call = crypto::encode_function_call("noop()", {}).bytes;
        const auto& b = f.run(relayer, encode_process_transfer(bad, f.bundle(bad, {0, 1})));
        REQUIRE(b.receipts[0].ok());
        CHECK_FALSE(parse_processed(b.events[0]).call_ok);
        CHECK(f.state().expected_inbound_nonce == 1);

        auto plain = f.message(1);
        plain.recipient = stranger;
        const auto& b2 = f.run(relayer, encode_process_transfer(plain, f.bundle(plain, {0, 1})));
        CHECK_FALSE(parse_processed(b2.events[0]).call_ok);
        CHECK(f.state().expected_inbound_nonce == 2);
    }
}

TEST_CASE("reverting paths leave adapter state bit-identical", "[adapter][property]")
{
    Fixture f(3, 2, 10, true);
    auto m = f.message(0);
    f.run(relayer, encode_process_transfer(m, f.bundle(m, {0, 1})));
    auto call = crypto::encode_function_call("noop()", {}).bytes;

    std::vector<std::pair<Address, Bytes>> attempts = {
        {stranger, encode_process_transfer(f.message(1), f.bundle(f.message(1), {0, 1}))},
        {relayer, encode_process_transfer(f.message(3), f.bundle(f.message(3), {0, 1}))},
        {relayer, encode_process_transfer(f.message(1), f.bundle(f.message(1), {2}))},
        {stranger, encode_admin_set(SetRelayer{stranger})},
        {owner, encode_admin_set(SetSignatories{pubs(f.keys), 4})},
        {stranger, encode_request_transfer(storage_at, call, 0)},
        {relayer, Bytes{2, 0, 0}},
    };
    for (const auto& [from, payload] : attempts) {
        auto before = f.chain.contract(adapter_at)->to_json().dump();
        auto value = payload[0] == 1 ? 10u : 0u;
        const auto& b = f.run(from, payload, value);
        CHECK_FALSE(b.receipts[0].ok());
        CHECK(b.events.empty());
        CHECK(f.chain.contract(adapter_at)->to_json().dump() == before);
    }
}

TEST_CASE("quorum boundary is exact", "[adapter][property]")
{
    // every subset of signers, every quorum in bounds, every set size up to 5
    for (std::size_t n = 1; n <= 5; ++n) {
        for (std::uint32_t q = 1; q <= n; ++q) {
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                Fixture f(n, q, 0);
                auto m = f.message(0);
                SignatureBundle b;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask & (1u << i))
                        b.push_back(f.signed_by(i, m));
                const auto& blk = f.run(relayer, encode_process_transfer(m, b));
                bool accepted = blk.receipts[0].ok();
                CHECK(accepted == (static_cast<std::uint32_t>(std::popcount(mask)) >= q));
            }
        }
    }
}

TEST_CASE("multisets of up to four entries count distinct signers", "[adapter][property]")
{
    // entries drawn with repetition from three signatories; quorum 3
    Fixture proto(3, 3, 0);
    auto m = proto.message(0);
    std::vector<SignatureEntry> pool = {proto.signed_by(0, m), proto.signed_by(1, m), proto.signed_by(2, m)};

    int cases = 0;
    for (std::size_t len = 0; len <= 4; ++len) {
        std::vector<std::size_t> idx(len, 0);
        while (true) {
            Fixture f(3, 3, 0);
            SignatureBundle b;
            std::set<std::size_t> distinct;
            for (auto i : idx) {
                b.push_back(pool[i]);
                distinct.insert(i);
            }
            const auto& blk = f.run(relayer, encode_process_transfer(m, b));
            CHECK(blk.receipts[0].ok() == (distinct.size() >= 3));
            if (!blk.receipts[0].ok())
                CHECK(blk.receipts[0].revert_reason == "InsufficientSignatures");
            ++cases;

            std::size_t k = 0;
            while (k < len && ++idx[k] == 3)
                idx[k++] = 0;
            if (k == len)
                break;
        }
    }
    CHECK(cases == 1 + 3 + 9 + 27 + 81);
}

TEST_CASE("admin_set", "[adapter][admin]")
{
    Fixture f;

    SECTION("owner changes the fee")
    {
        const auto& b = f.run(owner, encode_admin_set(SetTransactionFee{20}));
        REQUIRE(b.events.size() == 1);
        auto c = parse_config_changed(b.events[0]);
        CHECK(c.field == "transactionFee");
        CHECK(c.old_value == Bytes{0, 0, 0, 0, 0, 0, 0, 10});
        CHECK(c.new_value == Bytes{0, 0, 0, 0, 0, 0, 0, 20});
        CHECK(f.state().transaction_fee == 20);
    }
    SECTION("non-owner is rejected")
    {
        const auto& b = f.run(stranger, encode_admin_set(SetRelayer{stranger}));
        CHECK(revert_reason(b) == "NotOwner");
        CHECK(b.events.empty());
        CHECK(f.state().relayer == relayer);
    }
    SECTION("owner replaces signatories and relayer")
    {
        auto evil = make_keys(2, "evil");
        f.run(owner, encode_admin_set(SetSignatories{pubs(evil), 1}));
        f.run(owner, encode_admin_set(SetRelayer{stranger}));
        auto changes = f.chain.get_events(adapter_at, ev_config_changed, 0, f.chain.head_number());
        REQUIRE(changes.size() == 2);
        CHECK(parse_config_changed(changes[0]).field == "signatories");
        CHECK(parse_config_changed(changes[1]).field == "relayer");

        auto m = f.message(0, 99);
        auto sig = crypto::sign(evil[0], crypto::compute_transfer_hash(m, HashAlg::keccak256));
        const auto& b = f.run(stranger, encode_process_transfer(m, {{evil[0].public_key, Bytes(sig.begin(), sig.end())}}));
        CHECK(b.receipts[0].ok());
        CHECK(storage_value(f.chain) == 99);
    }
    SECTION("invalid quorum is rejected")
    {
        CHECK(revert_reason(f.run(owner, encode_admin_set(SetSignatories{pubs(f.keys), 0}))) == "ConfigError");
        CHECK(revert_reason(f.run(owner, encode_admin_set(SetSignatories{{}, 1}))) == "ConfigError");
        CHECK(f.state().quorum == 2);
    }
    SECTION("authorized senders and remote adapter")
    {
        f.run(owner, encode_admin_set(SetAuthorizedSenders{true, {stranger}}));
        f.run(owner, encode_admin_set(SetRemoteAdapter{stranger}));
        CHECK(f.state().accept_only_authorized);
        CHECK(f.state().authorized_senders == std::set<Address>{stranger});
        CHECK(f.state().remote_adapter == stranger);
    }
}

TEST_CASE("payload codecs", "[adapter][codec]")
{
    Fixture f;
    auto m = f.message(4);
    auto b = f.bundle(m, {2, 0});
    auto decoded = decode_process_transfer(encode_process_transfer(m, b));
    REQUIRE(decoded);
    CHECK(decoded->message == m);
    CHECK(decoded->bundle == b);

    auto payload = encode_process_transfer(m, b);
    CHECK_FALSE(decode_process_transfer(Bytes(payload.begin(), payload.end() - 1)));
    CHECK_FALSE(decode_process_transfer(encode_admin_set(SetTransactionFee{1})));
    CHECK_FALSE(decode_process_transfer({}));

    chain::EventLog wrong{adapter_at, "Processed", {}, {}, 0};
    CHECK_THROWS_AS(parse_transfer_requested(wrong), DecodeError);
    CHECK_THROWS_AS(parse_processed(wrong), DecodeError);
}

TEST_CASE("mintable token bridges through the adapter", "[contracts]")
{
    Fixture f(3, 2, 10, true);
    const Address token_at = address_of("token");
    const Address remote_token = address_of("remote-token");
    // rebuild with the token authorized and deployed at genesis
    Chain c(ChainConfig{"src-net", 1, HashAlg::keccak256, 2});
    AdapterConfig cfg{owner, relayer, pubs(f.keys), 2, 10, true, {token_at}, remote_adapter};
    c.deploy(adapter_at, std::make_unique<Adapter>(init_adapter(cfg)));
    auto token = std::make_unique<contracts::MintableToken>(adapter_at, remote_token);
    token->issue(user, 1000);
    c.deploy(token_at, std::move(token));
    c.fund(user, 100);

    auto out = crypto::encode_function_call(contracts::MintableToken::bridge_out_sig,
                                            {crypto::word_from_address(stranger), crypto::word_from_u128(300)});
    c.submit_transaction(c.make_transaction(user, token_at, out.bytes, 10));
    const auto& b = c.mine_block(1);
    REQUIRE(b.receipts[0].ok());
    auto t = c.contract_as<contracts::MintableToken>(token_at);
    CHECK(t->balance_of(user) == 700);
    CHECK(t->total_supply() == 700);
    CHECK(t->burned() == 300);
    REQUIRE(b.events.size() == 1);
    auto ev = parse_transfer_requested(b.events[0]);
    CHECK(ev.recipient == remote_token);
    auto expected = crypto::encode_function_call(contracts::MintableToken::mint_sig,
                                                 {crypto::word_from_address(stranger), crypto::word_from_u128(300)});
    CHECK(ev.encoded_call == expected.bytes);

    SECTION("bridging more than the balance reverts without burning")
    {
        auto big = crypto::encode_function_call(contracts::MintableToken::bridge_out_sig,
                                                {crypto::word_from_address(stranger), crypto::word_from_u128(5000)});
        c.submit_transaction(c.make_transaction(user, token_at, big.bytes, 10));
        CHECK(c.mine_block(2).receipts[0].revert_reason == "InsufficientTokens");
    }
    SECTION("missing fee reverts the burn")
    {
        c.submit_transaction(c.make_transaction(user, token_at, out.bytes, 0));
        CHECK(c.mine_block(2).receipts[0].revert_reason == "FeeTooLow");
        CHECK(c.contract_as<contracts::MintableToken>(token_at)->burned() == 300);
    }
    SECTION("mint only from the adapter")
    {
        c.submit_transaction(c.make_transaction(stranger, token_at, expected.bytes));
        CHECK(c.mine_block(2).receipts[0].revert_reason == "NotAdapter");
    }
    SECTION("snapshot restores every contract kind")
    {
        auto text = c.dump();
        CHECK(Chain::restore(text, contracts::default_registry()).dump() == text);
    }
}
