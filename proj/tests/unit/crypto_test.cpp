// Hash primitives, call encoding, transfer hashing and signatures.

#include "catch_amalgamated.hpp"

#include <openssl/evp.h>
#include <sodium.h>

#include <fstream>
#include <random>
#include <set>

#include "twc/common/errors.hpp"
#include "twc/crypto/abi.hpp"
#include "twc/crypto/hash.hpp"
#include "twc/crypto/signature.hpp"
#include "twc/crypto/transfer.hpp"

using namespace twc;
using namespace twc::crypto;

namespace {

struct Vector {
    Bytes input;
    std::string digest;
};

std::vector<Vector> load_vectors(const std::string& path)
{
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<Vector> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        auto arrow = line.find(" -> ");
        REQUIRE(arrow != std::string::npos);
        out.push_back({from_hex(line.substr(0, arrow)), line.substr(arrow + 4)});
    }
    return out;
}

std::string openssl_sha3_256(ByteSpan data)
{
    unsigned char md[32];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha3_256(), nullptr);
    return to_hex({md, len});
}

std::string sodium_blake2b_256(ByteSpan data)
{
    unsigned char md[32];
    crypto_generichash(md, sizeof md, data.data(), data.size(), nullptr, 0);
    return to_hex({md, sizeof md});
}

Bytes random_bytes(std::mt19937_64& rng, std::size_t n)
{
    Bytes b(n);
    for (auto& x : b)
        x = static_cast<std::uint8_t>(rng());
    return b;
}

TransferMessage sample_message()
{
    TransferMessage m;
    m.source_tx_hash = keccak256(as_bytes("tx"));
    m.source_adapter = address_of("source-adapter");
    m.recipient = address_of("storage");
    m.encoded_call = encode_function_call("setValue(uint128)", {word_from_u128(1)}).bytes;
    m.gas = 100000;
    m.transfer_id = 7;
    m.source_network_id = "eth-sim";
    return m;
}

} // namespace

TEST_CASE("published digests of empty string and abc", "[hash]")
{
    CHECK(keccak256(as_bytes("")).hex() ==
          "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
    CHECK(keccak256(as_bytes("abc")).hex() ==
          "4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
    CHECK(blake2b256(as_bytes("")).hex() ==
          "0e5751c026e543b2e8ab2eb06099daa1d1e5df47778f7787faab45cdf12fe3a8");
    CHECK(blake2b256(as_bytes("abc")).hex() ==
          "bddd813c634239723171ef3fee98579b94964e3bb1cb3e427262c8c068d52319");
}

TEST_CASE("in-repo test vector files", "[hash]")
{
    for (const auto& v : load_vectors("data/keccak256_vectors.txt"))
        CHECK(keccak256(v.input).hex() == v.digest);
    for (const auto& v : load_vectors("data/blake2b256_vectors.txt"))
        CHECK(blake2b256(v.input).hex() == v.digest);
}

TEST_CASE("keccak permutation agrees with OpenSSL SHA3-256", "[hash]")
{
    std::mt19937_64 rng(1);
    for (std::size_t n : {0, 1, 135, 136, 137, 271, 272, 273, 1000}) {
        auto data = random_bytes(rng, n);
        CHECK(detail::keccak_sponge_256(data, 0x06).hex() == openssl_sha3_256(data));
    }
}

TEST_CASE("blake2b256 agrees with libsodium generichash", "[hash]")
{
    std::mt19937_64 rng(2);
    for (std::size_t n : {0, 1, 127, 128, 129, 255, 256, 257, 1000}) {
        auto data = random_bytes(rng, n);
        CHECK(blake2b256(data).hex() == sodium_blake2b_256(data));
    }
}

TEST_CASE("encode_function_call", "[abi]")
{
    SECTION("setValue(uint128) with 1")
    {
        // selector frozen from an independent keccak implementation (pycryptodome)
        auto call = encode_function_call("setValue(uint128)", {word_from_u128(1)});
        REQUIRE(call.bytes.size() == 36);
        CHECK(to_hex(call.bytes) ==
              "62eb702a0000000000000000000000000000000000000000000000000000000000000001");
        CHECK(call.arg_count() == 1);
    }
    SECTION("zero arguments")
    {
        auto call = encode_function_call("noop()", {});
        CHECK(call.bytes.size() == 4);
        CHECK(to_hex(call.bytes) == "5dfc2e4a");
    }
    SECTION("deterministic")
    {
        CHECK(encode_function_call("setValue(uint128)", {word_from_u128(1)}).bytes ==
              encode_function_call("setValue(uint128)", {word_from_u128(1)}).bytes);
    }
    SECTION("malformed signatures")
    {
        for (const char* bad : {"", "setValue", "setValue(", "(uint128)", "1set(uint64)",
                                "set value(uint64)", "setValue(uint256)", "setValue(uint128,)",
                                "setValue( uint128)", "f(string)"})
            CHECK_THROWS_AS(encode_function_call(bad, {}), EncodingError);
    }
    SECTION("argument mismatches")
    {
        CHECK_THROWS_AS(encode_function_call("setValue(uint128)", {}), EncodingError);
        CHECK_THROWS_AS(encode_function_call("f(uint64)", {word_from_u128(Uint128{1} << 64)}),
                        EncodingError);
        Word wide;
        wide.bytes[0] = 1;
        CHECK_THROWS_AS(encode_function_call("f(uint128)", {wide}), EncodingError);
        CHECK_NOTHROW(encode_function_call("f(address)", {wide}));
    }
}

TEST_CASE("call decoder recovers name and arguments", "[abi]")
{
    CallDecoder dec;
    dec.add("setValue(uint128)");
    dec.add("mint(address,uint128)");

    auto to = address_of("alice");
    auto call = encode_function_call("mint(address,uint128)",
                                     {word_from_address(to), word_from_u128(1000000)});
    auto decoded = dec.decode(call.bytes);
    REQUIRE(decoded);
    CHECK(decoded->name == "mint");
    CHECK(word_to_address(decoded->args[0]) == to);
    CHECK(word_to_u128(decoded->args[1]) == 1000000);

    auto unknown = encode_function_call("burn(uint128)", {word_from_u128(1)});
    CHECK_FALSE(dec.decode(unknown.bytes));
    Bytes truncated(call.bytes.begin(), call.bytes.end() - 1);
    CHECK_FALSE(dec.decode(truncated));
}

TEST_CASE("encoding is injective on the supported grammar", "[abi][property]")
{
    const std::vector<std::string> signatures = {"setValue(uint128)", "setValue(uint64)",
                                                 "mint(address,uint128)", "noop()",
                                                 "burn(uint128)", "pair(uint64,uint64)"};
    std::mt19937_64 rng(3);
    std::set<Bytes> seen;
    std::set<std::pair<std::string, std::vector<std::string>>> inputs;
    for (int i = 0; i < 2000; ++i) {
        const auto& sig = signatures[rng() % signatures.size()];
        auto parsed = parse_signature(sig);
        std::vector<Word> args;
        std::vector<std::string> arg_text;
        for (auto t : parsed.params) {
            Word w = t == AbiType::address ? word_from_address(address_of(std::to_string(rng() % 8)))
                                           : word_from_u128(rng() % 16);
            args.push_back(w);
            arg_text.push_back(w.hex());
        }
        bool fresh_input = inputs.insert({sig, arg_text}).second;
        bool fresh_output = seen.insert(encode_function_call(sig, args).bytes).second;
        CHECK(fresh_input == fresh_output);
    }
}

TEST_CASE("transfer preimage layout", "[transfer]")
{
    auto m = sample_message();
    auto pre = transfer_preimage(m);
    REQUIRE(pre.size() == 32 * 3 + m.encoded_call.size() + 64 + m.source_network_id.size());
    std::size_t gas_at = 96 + m.encoded_call.size();
    CHECK(to_hex(ByteSpan(pre).subspan(gas_at, 32)) ==
          "00000000000000000000000000000000000000000000000000000000000186a0");
    CHECK(pre[gas_at + 63] == 7);
    CHECK(std::string(pre.end() - 7, pre.end()) == "eth-sim");
}

TEST_CASE("compute_transfer_hash", "[transfer]")
{
    auto m = sample_message();
    CHECK(compute_transfer_hash(m, HashAlg::keccak256) ==
          compute_transfer_hash(m, HashAlg::keccak256));
    CHECK(compute_transfer_hash(m, HashAlg::keccak256) == keccak256(transfer_preimage(m)));
    CHECK(compute_transfer_hash(m, HashAlg::blake2b256) == blake2b256(transfer_preimage(m)));
    CHECK(compute_transfer_hash(m, HashAlg::keccak256) !=
          compute_transfer_hash(m, HashAlg::blake2b256));
}

TEST_CASE("single-byte flips of the encoded call never collide", "[transfer][property]")
{
    auto m = sample_message();
    auto base = compute_transfer_hash(m, HashAlg::keccak256);
    std::mt19937_64 rng(4);
    std::set<std::pair<std::size_t, std::uint8_t>> flips;
    while (flips.size() < 1000)
        flips.insert({rng() % m.encoded_call.size(), static_cast<std::uint8_t>(1 + rng() % 255)});

    std::set<Hash256> digests;
    for (auto [pos, mask] : flips) {
        auto flipped = m;
        flipped.encoded_call[pos] ^= mask;
        auto d = compute_transfer_hash(flipped, HashAlg::keccak256);
        CHECK(d != base);
        digests.insert(d);
    }
    CHECK(digests.size() == flips.size());
}

TEST_CASE("every TransferMessage field feeds the digest", "[transfer][property]")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        auto m = sample_message();
        m.transfer_id = rng();
        m.gas = rng();
        auto base = compute_transfer_hash(m, HashAlg::blake2b256);
        std::vector<TransferMessage> variants(7, m);
        variants[0].source_tx_hash.bytes[rng() % 32] ^= 1;
        variants[1].source_adapter.bytes[rng() % 32] ^= 1;
        variants[2].recipient.bytes[rng() % 32] ^= 1;
        variants[3].encoded_call.push_back(0);
        variants[4].gas ^= 1ULL << (rng() % 64);
        variants[5].transfer_id ^= 1ULL << (rng() % 64);
        variants[6].source_network_id += "x";
        for (const auto& v : variants)
            CHECK(compute_transfer_hash(v, HashAlg::blake2b256) != base);
    }
}

TEST_CASE("transfer message binary round trip", "[transfer]")
{
    auto m = sample_message();
    ByteWriter w;
    write_transfer(w, m);
    ByteReader r(w.bytes());
    CHECK(read_transfer(r) == m);
    CHECK(r.done());

    Bytes cut(w.bytes().begin(), w.bytes().end() - 1);
    ByteReader short_reader(cut);
    CHECK_THROWS_AS(read_transfer(short_reader), DecodeError);
}

TEST_CASE("keygen", "[signature]")
{
    Seed zero{};
    Seed one{};
    one.bytes[0] = 1;
    CHECK(keygen(zero).public_key == keygen(zero).public_key);
    CHECK(keygen(zero).secret_key == keygen(zero).secret_key);
    CHECK(keygen(zero).public_key != keygen(one).public_key);
    CHECK(keygen(zero).public_key.size() == 32);
}

TEST_CASE("sign and verify", "[signature]")
{
    auto a = keygen(seed_from_label("a"));
    auto b = keygen(seed_from_label("b"));
    auto digest = keccak256(as_bytes("payload"));
    auto sig = sign(a, digest);

    CHECK(sig == sign(a, digest));
    CHECK(verify(a.public_key, digest, sig));
    CHECK_FALSE(verify(b.public_key, digest, sig));
    CHECK_FALSE(verify(a.public_key, keccak256(as_bytes("other")), sig));
    CHECK_FALSE(verify(a.public_key, digest, {}));

    SECTION("truncations never verify")
    {
        std::mt19937_64 rng(6);
        for (int i = 0; i < 100; ++i) {
            auto len = rng() % sig.size();
            CHECK_FALSE(verify(a.public_key, digest, ByteSpan(sig).first(len)));
        }
    }
}

TEST_CASE("signatures from one key never verify under another", "[signature][property]")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        auto a = keygen(seed_from_label("a" + std::to_string(rng())));
        auto b = keygen(seed_from_label("b" + std::to_string(rng())));
        Hash256 digest;
        for (auto& x : digest.bytes)
            x = static_cast<std::uint8_t>(rng());
        CHECK_FALSE(verify(b.public_key, digest, sign(a, digest)));
    }
}

TEST_CASE("hex helpers", "[bytes]")
{
    CHECK(to_hex(from_hex("0x00ff10")) == "00ff10");
    CHECK_THROWS(from_hex("abc"));
    CHECK_THROWS(from_hex("zz"));
    CHECK(Address::from_hex(address_of("x").hex()) == address_of("x"));
    CHECK_THROWS(Address::from_hex("00"));
}
