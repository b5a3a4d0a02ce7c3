#include "twc/harness/suite.hpp"

#include "twc/harness/simulation.hpp"

namespace twc::harness {

namespace {

Json signatories(std::size_t n, const std::vector<std::string>& behaviors = {})
{
    Json out = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        Json s;
        s["id"] = "s" + std::to_string(i);
        s["seed"] = "signatory-key-" + std::to_string(i);
        s["behavior"] = i < behaviors.size() ? behaviors[i] : "honest";
        out.push_back(std::move(s));
    }
    return out;
}

Json base(std::string name, std::string description, std::string predicted, std::string risk)
{
    Json j;
    j["name"] = std::move(name);
    j["description"] = std::move(description);
    j["seed"] = 7;
    j["maxTicks"] = 150;
    j["predicted"] = std::move(predicted);
    j["risk"] = std::move(risk);
    j["chains"]["source"] = {{"networkId", "source-net"}, {"blockTimeTicks", 1}, {"hashAlg", "keccak256"}, {"finality", 6}};
    j["chains"]["dest"] = {{"networkId", "dest-net"}, {"blockTimeTicks", 1}, {"hashAlg", "blake2b256"}, {"finality", 6}};
    j["adapters"]["source"] = {{"owner", "owner"}, {"relayer", "relayer"}, {"transactionFee", 10}};
    j["adapters"]["dest"] = {{"owner", "owner"}, {"relayer", "relayer"}, {"transactionFee", 0}};
    j["signatories"] = signatories(4);
    j["bridge"] = {{"signTimeoutTicks", 4},
                   {"submitTimeoutTicks", 4},
                   {"maxRetries", 3},
                   {"livenessTimeoutTicks", 20},
                   {"reorgResponse", "retry"}};
    j["monitor"] = {{"enabled", true}, {"autoPause", false}};
    j["workload"] = Json::array();
    return j;
}

Json requests(std::uint64_t at, std::uint64_t count, std::uint64_t every, std::uint64_t first_value = 1)
{
    return {{"at", at},
            {"action", "request_transfer"},
            {"from", "user"},
            {"recipient", "dest.storage"},
            {"call", {{"setValue", std::to_string(first_value)}}},
            {"count", count},
            {"every", every}};
}

Json mint_call(std::string to, std::string amount)
{
    return {{"mint", {{"to", std::move(to)}, {"amount", std::move(amount)}}}};
}

Json with_tokens(Json j)
{
    j["tokens"] = {{"allocation", "1000000"}};
    j["workload"].push_back({{"at", 2}, {"action", "bridge_out"}, {"from", "user"}, {"to", "user"}, {"amount", "500"}});
    return j;
}

Json happy()
{
    auto j = base("happy path", "honest bridge, signatories and adapters; ten setValue transfers", "low", "n/a");
    j["workload"].push_back(requests(2, 10, 2));
    return j;
}

Json source_infra_bridge_view()
{
    auto j = base("source infra: bridge view", "the bridge's source node lies about a block hash; signatories follow the real chain",
                  "low", "low");
    j["workload"].push_back(requests(2, 5, 3));
    j["workload"].push_back({{"when", {{"sourceConfirmations", {{"request", 2}, {"depth", 1}}}}},
                             {"action", "install_view"},
                             {"actors", {"bridge"}},
                             {"chain", "source"},
                             {"corruption", {{"type", "substituteBlockHash"}, {"request", 2}}}});
    return j;
}

Json source_infra_signatories_too()
{
    auto j = with_tokens(base("source infra: signatory views too",
                              "bridge and every signatory read a source node that fabricates a mint request", "high",
                              "low"));
    j["workload"].push_back(requests(3, 3, 2));
    j["workload"].push_back({{"at", 30},
                             {"action", "install_view"},
                             {"actors", {"bridge", "signatories"}},
                             {"chain", "source"},
                             {"corruption",
                              {{"type", "fabricateTransfer"},
                               {"recipient", "dest.token"},
                               {"call", mint_call("attacker", "1000000")}}}});
    return j;
}

Json dest_infra()
{
    auto j = base("dest infra: frozen node", "the bridge's destination node stops following the chain", "low", "low");
    j["workload"].push_back(requests(2, 5, 2));
    j["workload"].push_back({{"at", 12},
                             {"action", "install_view"},
                             {"actors", {"bridge"}},
                             {"chain", "dest"},
                             {"corruption", {{"type", "freezeHead"}}}});
    return j;
}

Json adapter_owner_source(bool auto_pause)
{
    auto j = with_tokens(base(auto_pause ? "adapter owner: source side, monitored" : "adapter owner: source side",
                              auto_pause ? "stolen owner key authorizes an attacker sender; the config monitor pauses the bridge"
                                         : "stolen owner key authorizes an attacker sender that requests an unbacked mint",
                              auto_pause ? "low" : "high", "medium"));
    j["adapters"]["source"]["acceptOnlyAuthorizedSenders"] = true;
    j["adapters"]["source"]["authorizedSenders"] = {"source.token", "user"};
    j["monitor"]["autoPause"] = auto_pause;
    j["workload"].push_back(requests(3, 2, 2));
    j["workload"].push_back({{"at", 10},
                             {"action", "admin_set"},
                             {"chain", "source"},
                             {"from", "owner"},
                             {"change",
                              {{"authorizedSenders",
                                {{"acceptOnly", true}, {"senders", {"source.token", "user", "attacker"}}}}}}});
    j["workload"].push_back({{"at", 14},
                             {"action", "request_transfer"},
                             {"from", "attacker"},
                             {"recipient", "dest.token"},
                             {"call", mint_call("attacker", "1000000")}});
    return j;
}

Json adapter_owner_dest()
{
    auto j = with_tokens(base("adapter owner: dest side",
                              "stolen owner key swaps signatory keys and relayer, then mints directly", "high", "medium"));
    j["workload"].push_back(requests(3, 2, 2));
    j["workload"].push_back({{"at", 10},
                             {"action", "admin_set"},
                             {"chain", "dest"},
                             {"from", "owner"},
                             {"change", {{"signatories", {{"keys", {"attacker-key"}}, {"quorum", 1}}}}}});
    j["workload"].push_back(
        {{"at", 10}, {"action", "admin_set"}, {"chain", "dest"}, {"from", "owner"}, {"change", {{"relayer", "attacker"}}}});
    j["workload"].push_back({{"at", 14},
                             {"action", "forged_process_transfer"},
                             {"from", "attacker"},
                             {"recipient", "dest.token"},
                             {"call", mint_call("attacker", "1000000")},
                             {"signers", {"attacker-key"}}});
    return j;
}

Json bridge_forge()
{
    auto j = with_tokens(base("bridge: forge", "compromised bridge asks honest signatories to sign a fabricated mint",
                              "low", "medium"));
    j["workload"].push_back(requests(3, 3, 2));
    j["workload"].push_back({{"at", 40},
                             {"action", "forge"},
                             {"recipient", "dest.token"},
                             {"call", mint_call("attacker", "1000000")}});
    return j;
}

Json bridge_replay()
{
    auto j = base("bridge: replay", "compromised bridge resubmits every completed transfer", "low", "medium");
    j["bridge"]["byzantine"] = {{"replay", true}};
    j["workload"].push_back(requests(2, 6, 2));
    return j;
}

Json bridge_censor()
{
    auto j = base("bridge: censor", "compromised bridge skips transfer 2 and relays the rest", "medium", "medium");
    j["bridge"]["byzantine"] = {{"censor", 2}};
    j["workload"].push_back(requests(2, 6, 2));
    return j;
}

Json bridge_flood()
{
    auto j = base("bridge: flood", "compromised bridge floods signatories and exhausts its own rate limit", "low",
                  "medium");
    j["rateLimit"] = {{"budget", 40}, {"windowTicks", 12}};
    j["workload"].push_back(requests(2, 5, 2));
    j["workload"].push_back({{"at", 3}, {"action", "flood"}, {"requests", 200}});
    return j;
}

Json signatories_mode(const std::string& behavior)
{
    auto j = base("signatories: " + behavior, "every signatory is compromised and behaves as " + behavior, "medium",
                  "low");
    j["signatories"] = signatories(4, {behavior, behavior, behavior, behavior});
    j["workload"].push_back(requests(2, 4, 2));
    return j;
}

Json operator_key_reuse()
{
    auto j = base("operator: key reuse", "one operator key runs the bridge and every signatory; it forges a state write",
                  "high", "low/medium");
    j["signatories"] = signatories(4, {"colluding", "colluding", "colluding", "colluding"});
    j["workload"].push_back(requests(2, 3, 2));
    j["workload"].push_back(
        {{"at", 40}, {"action", "forge"}, {"recipient", "dest.storage"}, {"call", {{"setValue", "666"}}}});
    return j;
}

Json bridge_and_signatories()
{
    auto j = with_tokens(base("bridge+signatories compromised", "colluding bridge and signatory quorum forge a mint of 10^6 tokens",
                              "high", "low"));
    j["signatories"] = signatories(4, {"colluding", "colluding", "colluding", "honest"});
    j["workload"].push_back(requests(3, 3, 2));
    j["workload"].push_back({{"at", 40},
                             {"action", "forge"},
                             {"recipient", "dest.token"},
                             {"call", mint_call("attacker", "1000000")}});
    return j;
}

Json reorg_pre_signing()
{
    auto j = base("reorg: before signing", "a 3-block reorg drops a request before it reaches finality", "low", "n/a");
    j["workload"].push_back(requests(2, 3, 4));
    j["workload"].push_back({{"when", {{"sourceConfirmations", {{"request", 1}, {"depth", 2}}}}},
                             {"action", "inject_reorg"},
                             {"chain", "source"},
                             {"orphanRequest", 1}});
    return j;
}

Json reorg_post_delivery()
{
    auto j = base("reorg: after delivery", "a reorg deeper than the finality depth drops a delivered request", "high",
                  "n/a");
    j["workload"].push_back(requests(2, 2, 3));
    j["workload"].push_back({{"when", {{"delivered", 0}}},
                             {"action", "inject_reorg"},
                             {"chain", "source"},
                             {"orphanRequest", 0}});
    return j;
}

} // namespace

std::vector<Json> builtin_suite_documents()
{
    return {happy(),
            source_infra_bridge_view(),
            source_infra_signatories_too(),
            dest_infra(),
            adapter_owner_source(false),
            adapter_owner_source(true),
            adapter_owner_dest(),
            bridge_forge(),
            bridge_replay(),
            bridge_censor(),
            bridge_flood(),
            signatories_mode("refuse"),
            signatories_mode("wrongSignature"),
            operator_key_reuse(),
            bridge_and_signatories(),
            reorg_pre_signing(),
            reorg_post_delivery()};
}

std::vector<Scenario> builtin_suite()
{
    std::vector<Scenario> out;
    for (const auto& j : builtin_suite_documents())
        out.push_back(parse_scenario(j));
    return out;
}

Json happy_path_document(std::uint64_t transfers, std::uint64_t finality)
{
    auto j = base("happy path x" + std::to_string(transfers), "honest configuration under sustained load", "low", "n/a");
    j["chains"]["source"]["finality"] = finality;
    j["chains"]["dest"]["finality"] = finality;
    j["bridge"]["lookahead"] = 32;
    j["maxTicks"] = transfers + 8 * finality + 60;
    j["workload"].push_back(requests(1, transfers, 1, 0));
    return j;
}

Json demo_document()
{
    auto j = base("demo", "one setValue(1) call relayed from source to destination", "low", "n/a");
    j["chains"]["source"]["finality"] = 2;
    j["chains"]["dest"]["finality"] = 2;
    j["signatories"] = signatories(3);
    j["maxTicks"] = 20;
    j["workload"].push_back(requests(1, 1, 1));
    return j;
}

Json reorg_sweep_document(std::uint64_t depth)
{
    auto j = base("reorg sweep d=" + std::to_string(depth), "request dropped by a reorg at depth - 1 confirmations",
                  "low", "n/a");
    j["maxTicks"] = 60;
    j["workload"].push_back(requests(2, 1, 1));
    j["workload"].push_back({{"when", {{"sourceConfirmations", {{"request", 0}, {"depth", depth - 1}}}}},
                             {"action", "inject_reorg"},
                             {"chain", "source"},
                             {"depth", depth},
                             {"drop", Json::array({0})}});
    return j;
}

Json reorg_after_delivery_document(std::uint64_t extra)
{
    auto j = base("reorg after delivery +" + std::to_string(extra), "delivered request orphaned and dropped", "high",
                  "n/a");
    j["maxTicks"] = 60;
    j["workload"].push_back(requests(2, 1, 1));
    j["workload"].push_back({{"when", {{"delivered", 0}}},
                             {"action", "inject_reorg"},
                             {"chain", "source"},
                             {"orphanRequest", 0},
                             {"extra", extra}});
    return j;
}

std::vector<SuiteRow> run_suite(const std::vector<Scenario>& scenarios)
{
    std::vector<SuiteRow> rows;
    for (const auto& s : scenarios) {
        Simulation sim(s);
        sim.run();
        SuiteRow row;
        row.name = s.name;
        row.risk = s.risk;
        row.predicted = s.predicted.value_or(Impact::low);
        row.actual = sim.classification();
        row.delivered = sim.deliveries().size();
        row.violations = sim.violations().size();
        row.stalls = sim.bridge().stalls().size();
        row.alarms = sim.alarms().size();
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace twc::harness
