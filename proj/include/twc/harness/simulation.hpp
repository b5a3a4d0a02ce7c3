#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "twc/bridge/bridge.hpp"
#include "twc/chain/chain.hpp"
#include "twc/harness/oracle.hpp"
#include "twc/harness/scenario.hpp"
#include "twc/signatory/signatory.hpp"

namespace twc::harness {

struct RunOptions {
    std::optional<std::uint64_t> seed;        ///< overrides the scenario seed
    std::optional<std::size_t> crash_at;      ///< kill the bridge once its journal holds this many records
};

struct InvariantBreach {
    std::string kind;
    std::string detail;
};

struct Delivery {
    std::uint64_t transfer_id = 0;
    Hash256 source_tx_hash;
    Hash256 dest_tx_hash;
    std::uint64_t dest_block = 0;
    std::uint64_t dest_tick = 0;
    bool call_ok = false;
};

/// Deterministic scheduler owning both chains, every signatory and the
/// bridge. One tick runs: workload, block production, message delivery,
/// configuration monitoring, then one bridge step.
class Simulation {
public:
    /// Throws ConfigError before anything runs.
    explicit Simulation(Scenario scenario, RunOptions options = {});

    void step();
    void run(); ///< steps until maxTicks
    std::uint64_t tick() const { return tick_; }

    const Scenario& scenario() const { return scenario_; }
    chain::Chain& source() { return *source_; }
    chain::Chain& dest() { return *dest_; }
    const chain::Chain& source() const { return *source_; }
    const chain::Chain& dest() const { return *dest_; }
    const bridge::Bridge& bridge() const { return *bridge_; }
    const std::vector<signatory::Signatory>& signatories() const { return signatories_; }
    const std::vector<Hash256>& requests() const { return requests_; }
    std::size_t crashes() const { return crashes_; }

    /// Ground-truth measurements, recomputed from chain stores on each call.
    std::vector<CausalityViolation> violations() const;
    std::vector<InvariantBreach> invariant_breaches() const;
    std::vector<Delivery> deliveries() const;
    std::vector<bridge::Alarm> alarms() const;
    Impact classification() const;

    /// Stable key order; equal (scenario, seed) give byte-identical output.
    Json report() const;
    const std::vector<bridge::JournalEntry>& journal() const { return bridge_->journal(); }

private:
    struct Pending {
        WorkloadItem item;
        std::uint64_t remaining = 0;
        std::optional<std::uint64_t> next_tick; ///< set once the trigger fired
    };

    struct Message {
        std::uint64_t deliver_at = 0;
        bool to_signatory = true;
        std::size_t signatory = 0;
        Bytes frame;
    };

    void apply_workload();
    bool triggered(const Trigger& t) const;
    void apply(const WorkloadAction& a);
    void apply(const RequestTransfer& a);
    void apply(const BridgeOut& a);
    void apply(const InjectReorg& a);
    void apply(const InstallView& a);
    void apply(const AdminSet& a);
    void apply(const Pause& a);
    void apply(const Resume& a);
    void apply(const Forge& a);
    void apply(const Flood& a);
    void apply(const ForgedProcessTransfer& a);
    void apply(const HaltChain& a);
    void apply(const ResumeChain& a);

    void mine();
    void deliver();
    void monitor_config();
    void step_bridge();
    void dispatch(std::vector<bridge::Action> actions);
    template <class F>
    void with_bridge(F&& f);
    void recover_bridge();

    chain::Chain& chain_of(Side s) { return s == Side::source ? *source_ : *dest_; }
    std::shared_ptr<chain::Chain> chain_ptr(Side s) const { return s == Side::source ? source_ : dest_; }
    std::optional<std::uint64_t> confirmations_of_request(std::uint64_t idx) const;
    std::set<std::uint64_t> delivered_ids() const;
    chain::ChainViewPtr corrupt(Side side, const Corruption& c);

    Scenario scenario_;
    RunOptions options_;
    std::uint64_t seed_;
    std::uint64_t tick_ = 0;

    std::shared_ptr<chain::Chain> source_;
    std::shared_ptr<chain::Chain> dest_;
    std::set<Side> halted_;

    std::vector<signatory::Signatory> signatories_;
    bridge::BridgeConfig bridge_config_;
    std::unique_ptr<bridge::Bridge> bridge_;
    chain::ChainViewPtr bridge_source_view_;
    chain::ChainViewPtr bridge_dest_view_;
    std::size_t crashes_ = 0;

    std::vector<Pending> pending_;
    std::deque<Message> in_flight_;
    std::vector<Hash256> requests_; ///< harness-issued requests, by index
    std::uint64_t forged_direct_ = 0;

    std::map<Side, std::uint64_t> config_scanned_;
    std::multiset<std::pair<Side, std::string>> declared_;
    std::vector<bridge::Alarm> config_alarms_;
};

/// Convenience: builds, runs to completion and returns the report.
Json run_scenario(const Scenario& scenario, const RunOptions& options = {});

} // namespace twc::harness
