// Scenario parsing, the simulation scheduler, the causality oracle,
// configuration monitoring and the built-in threat matrix.

#include "catch_amalgamated.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "twc/adapter/adapter.hpp"
#include "twc/common/errors.hpp"
#include "twc/contracts/storage.hpp"
#include "twc/contracts/token.hpp"
#include "twc/harness/simulation.hpp"
#include "twc/harness/suite.hpp"

using namespace twc;
using namespace twc::harness;

namespace {

Json with_action(Json doc, Json action)
{
    doc["workload"].push_back(std::move(action));
    return doc;
}

std::string journal_text(const Simulation& sim)
{
    std::ostringstream out;
    bridge::write_journal(out, sim.journal());
    return out.str();
}

Simulation run(const Json& doc, RunOptions options = {})
{
    Simulation sim(parse_scenario(doc), options);
    sim.run();
    return sim;
}

RunOptions seeded(std::uint64_t seed)
{
    RunOptions o;
    o.seed = seed;
    return o;
}

std::size_t count_alarms(const Simulation& sim, std::string_view kind)
{
    std::size_t n = 0;
    for (const auto& a : sim.alarms())
        if (a.kind == kind)
            ++n;
    return n;
}

} // namespace

TEST_CASE("scenario parser rejects malformed documents")
{
    const auto good = happy_path_document(2, 3);
    REQUIRE_NOTHROW(parse_scenario(good));

    auto expect_bad = [&](auto&& mutate) {
        Json doc = good;
        mutate(doc);
        INFO(doc.dump());
        CHECK_THROWS_AS(parse_scenario(doc), ConfigError);
    };
    expect_bad([](Json& d) { d["colour"] = "blue"; });
    expect_bad([](Json& d) { d["chains"]["source"]["finallity"] = 3; });
    expect_bad([](Json& d) { d["maxTicks"] = "many"; });
    expect_bad([](Json& d) { d["maxTicks"] = -4; });
    expect_bad([](Json& d) { d["signatories"][0]["behavior"] = "sneaky"; });
    expect_bad([](Json& d) { d["signatories"][1]["seed"] = d["signatories"][0]["seed"]; });
    expect_bad([](Json& d) { d["adapters"]["dest"]["quorum"] = 9; });
    expect_bad([](Json& d) { d["chains"]["dest"]["hashAlg"] = "md5"; });
    expect_bad([](Json& d) { d["bridge"]["reorgResponse"] = "panic"; });
    expect_bad([](Json& d) { d["bridge"]["signTimeoutTicks"] = 0; });
    expect_bad([](Json& d) { d["workload"][0]["action"] = "teleport"; });
    expect_bad([](Json& d) { d["workload"][0]["gass"] = 5; });
    expect_bad([](Json& d) { d["workload"][0]["call"] = Json{{"setValue", "x"}}; });
    expect_bad([](Json& d) { d["predicted"] = "catastrophic"; });
    expect_bad([](Json& d) { d["workload"][0].erase("at"); });
    expect_bad([](Json& d) {
        d["workload"].push_back({{"at", 5}, {"action", "inject_reorg"}, {"chain", "source"}});
    });
    CHECK_THROWS_AS(load_scenario("scenarios/does-not-exist.json"), ConfigError);
}

TEST_CASE("every scenario file in the repository parses and matches the built-in suite")
{
    std::map<std::string, Json> builtin;
    for (const auto& d : builtin_suite_documents())
        builtin.emplace(d["name"].get<std::string>(), d);

    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator("scenarios")) {
        if (entry.path().extension() != ".json")
            continue;
        ++files;
        INFO(entry.path().string());
        auto s = load_scenario(entry.path().string());
        REQUIRE(builtin.contains(s.name));
        std::ifstream in(entry.path());
        CHECK(Json::parse(in) == builtin.at(s.name));
    }
    CHECK(files == builtin.size());
}

TEST_CASE("equal scenario and seed give byte-identical reports and journals")
{
    for (const auto& doc : builtin_suite_documents()) {
        INFO(doc["name"].get<std::string>());
        auto a = run(doc);
        auto b = run(doc);
        CHECK(a.report().dump() == b.report().dump());
        CHECK(journal_text(a) == journal_text(b));
    }
    auto a = run(happy_path_document(5, 3), seeded(1234));
    auto b = run(happy_path_document(5, 3), seeded(1234));
    CHECK(a.report().dump() == b.report().dump());
    CHECK(a.report()["seed"] == 1234);
}

TEST_CASE("the demo relays setValue(1)")
{
    auto sim = run(demo_document());
    CHECK(sim.report()["destStorage"]["value"] == "1");
    CHECK(sim.deliveries().size() == 1);
    CHECK(sim.violations().empty());
}

TEST_CASE("honest runs never trip the causality oracle")
{
    for (std::uint64_t finality : {1, 2, 4, 6}) {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            auto sim = run(happy_path_document(12, finality), seeded(seed));
            INFO("finality " << finality << " seed " << seed);
            CHECK(sim.violations().empty());
            CHECK(sim.invariant_breaches().empty());
            CHECK(sim.deliveries().size() == 12);
            CHECK(sim.classification() == Impact::low);
        }
    }
}

TEST_CASE("a processTransfer with no source request is reported")
{
    auto doc = happy_path_document(2, 2);
    doc["signatories"][0]["behavior"] = "colluding";
    std::vector<std::string> signers;
    for (const auto& s : doc["signatories"])
        signers.push_back(s["seed"].get<std::string>());
    doc = with_action(doc, {{"at", 40},
                            {"action", "forged_process_transfer"},
                            {"from", "relayer"},
                            {"recipient", "dest.storage"},
                            {"call", {{"setValue", "31337"}}},
                            {"signers", signers}});
    auto sim = run(doc);

    auto v = sim.violations();
    REQUIRE(v.size() == 1);
    CHECK(v[0].reason == ViolationReason::no_source_request);
    CHECK(v[0].transfer_id == 2);
    CHECK(sim.classification() == Impact::high);
    CHECK(static_cast<std::uint64_t>(
              sim.dest().contract_as<contracts::StorageContract>(address_of("dest.storage"))->value()) == 31337);
}

TEST_CASE("forged bundles below quorum are rejected on-chain and leave no violation")
{
    auto doc = happy_path_document(1, 2);
    doc = with_action(doc, {{"at", 30},
                            {"action", "forged_process_transfer"},
                            {"from", "relayer"},
                            {"recipient", "dest.storage"},
                            {"call", {{"setValue", "5"}}},
                            {"signers", {doc["signatories"][0]["seed"]}}});
    auto sim = run(doc);
    CHECK(sim.violations().empty());
    CHECK(sim.report()["reverts"]["dest"].dump().find("InsufficientSignatures") != std::string::npos);
}

TEST_CASE("a delivered request orphaned by a deep reorg is reported as orphaned")
{
    auto sim = run(reorg_after_delivery_document(1));
    auto v = sim.violations();
    REQUIRE(v.size() == 1);
    CHECK(v[0].reason == ViolationReason::source_request_orphaned);
    CHECK(v[0].source_tx_hash == sim.requests().at(0));
}

TEST_CASE("reorgs shallower than the finality depth never cause a violation")
{
    for (std::uint64_t depth = 1; depth <= 6; ++depth) {
        auto sim = run(reorg_sweep_document(depth));
        INFO("depth " << depth);
        CHECK(sim.violations().empty());
        CHECK(sim.source().reorgs().size() == 1);
    }
}

TEST_CASE("declared configuration changes pass silently, undeclared ones raise alarms")
{
    auto base = happy_path_document(2, 2);
    auto declared = with_action(base, {{"at", 5},
                                       {"action", "admin_set"},
                                       {"chain", "source"},
                                       {"from", "owner"},
                                       {"change", {{"transactionFee", 25}}},
                                       {"declared", true}});
    auto quiet = run(declared);
    CHECK(count_alarms(quiet, "configChange") == 0);

    auto swapped = with_action(base, {{"at", 5},
                                      {"action", "admin_set"},
                                      {"chain", "dest"},
                                      {"from", "owner"},
                                      {"change", {{"relayer", "attacker"}}}});
    swapped = with_action(swapped, {{"at", 6},
                                    {"action", "admin_set"},
                                    {"chain", "dest"},
                                    {"from", "owner"},
                                    {"change", {{"signatories", {{"keys", {"mallory-0", "mallory-1"}}, {"quorum", 2}}}}}});
    auto loud = run(swapped);
    CHECK(count_alarms(loud, "configChange") == 2);
    CHECK_FALSE(loud.bridge().paused());

    swapped["monitor"]["autoPause"] = true;
    auto paused = run(swapped);
    CHECK(paused.bridge().paused());
}

TEST_CASE("a halted source raises exactly one liveness alarm per outage")
{
    auto doc = happy_path_document(1, 2);
    doc["bridge"]["livenessTimeoutTicks"] = 5;
    doc = with_action(doc, {{"at", 20}, {"action", "halt_chain"}, {"chain", "source"}});
    doc = with_action(doc, {{"at", 40}, {"action", "resume_chain"}, {"chain", "source"}});
    auto sim = run(doc);
    CHECK(count_alarms(sim, "liveness") == 1);
    auto alarms = sim.alarms();
    auto first = std::find_if(alarms.begin(), alarms.end(), [](const bridge::Alarm& a) { return a.kind == "liveness"; });
    CHECK(first->tick <= 20 + 5 + 1);
}

TEST_CASE("honest delivery latency is bounded by the finality depths")
{
    // Request sealed next tick, F_S confirmations, one tick each for the
    // signing round trip, submission and inclusion.
    constexpr std::uint64_t slack = 8;
    for (std::uint64_t finality : {1, 3, 6}) {
        auto sim = run(happy_path_document(20, finality));
        REQUIRE(sim.deliveries().size() == 20);
        for (const auto& d : sim.deliveries()) {
            auto loc = sim.source().get_transaction(d.source_tx_hash);
            REQUIRE(loc);
            auto requested = sim.source().get_block(loc->block_number)->tick;
            INFO("finality " << finality << " transfer " << d.transfer_id);
            CHECK(d.dest_tick - requested <= finality + slack);
        }
    }
}

TEST_CASE("a bridge crash mid-run is recovered from the journal")
{
    auto clean = run(happy_path_document(6, 2));
    auto entries = clean.journal().size();
    REQUIRE(entries > 10);
    RunOptions crash;
    crash.crash_at = entries / 2;
    auto crashed = run(happy_path_document(6, 2), crash);
    CHECK(crashed.crashes() == 1);
    CHECK(crashed.deliveries().size() == 6);
    CHECK(crashed.violations().empty());
}

TEST_CASE("the built-in threat matrix matches every prediction")
{
    auto rows = run_suite(builtin_suite());
    REQUIRE(rows.size() == builtin_suite_documents().size());
    for (const auto& r : rows) {
        INFO(r.name);
        CHECK(r.matches());
    }
}

TEST_CASE("auto-pause on an unexpected owner change keeps the unbacked mint off the destination")
{
    auto minted = [](const Simulation& sim) {
        return static_cast<std::uint64_t>(
            sim.dest().contract_as<contracts::MintableToken>(address_of("dest.token"))->minted());
    };
    std::map<std::string, Json> docs;
    for (const auto& d : builtin_suite_documents())
        docs.emplace(d["name"].get<std::string>(), d);

    auto open = run(docs.at("adapter owner: source side"));
    CHECK(minted(open) >= 1'000'000);
    CHECK(count_alarms(open, "configChange") == 1);
    CHECK_FALSE(open.bridge().paused());

    auto guarded = run(docs.at("adapter owner: source side, monitored"));
    CHECK(count_alarms(guarded, "configChange") == 1);
    CHECK(guarded.bridge().paused());
    CHECK(minted(guarded) < 1'000'000);
    CHECK(guarded.classification() == Impact::low);
}
