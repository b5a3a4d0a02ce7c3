#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "twc/adapter/adapter.hpp"
#include "twc/bridge/journal.hpp"
#include "twc/chain/view.hpp"
#include "twc/signatory/messages.hpp"

namespace twc::bridge {

using crypto::TransferMessage;

enum class ReorgResponse : std::uint8_t { pause, retry, continue_ };

std::string_view to_string(ReorgResponse r);
std::optional<ReorgResponse> parse_reorg_response(std::string_view s);

enum class JobState : std::uint8_t {
    detected,
    awaiting_finality,
    collecting_signatures,
    submitting,
    awaiting_dest_finality,
    done,
    stalled,
};

std::string_view to_string(JobState s);

enum class StallCause : std::uint8_t {
    signature_timeout,   ///< too few signatories answered in time
    signature_rejected,  ///< the destination kept rejecting collected signatures
    signatory_refused,   ///< signatories declined to attest the request
    out_of_order,        ///< the destination expects a different transfer id
    dest_unconfirmed,    ///< submissions never showed up on the destination
    submission_rejected, ///< any other destination revert
};

std::string_view to_string(StallCause c);
/// Causes that leave a transfer censored rather than merely delayed.
bool is_censorship(StallCause c);

struct BridgeConfig {
    std::string id = "bridge";
    Address source_adapter;
    Address dest_adapter;
    Address relayer; ///< account the scheduler submits destination transactions from
    std::vector<PublicKey> signatories; ///< one endpoint per signatory, by index
    std::uint32_t quorum = 1;
    std::uint64_t source_finality = 0;
    std::uint64_t dest_finality = 0;
    std::uint64_t sign_timeout_ticks = 4;
    std::uint64_t submit_timeout_ticks = 4;
    std::uint32_t max_retries = 3;
    std::uint64_t liveness_timeout_ticks = 20;
    ReorgResponse reorg_response = ReorgResponse::retry;
    std::uint64_t lookahead = 16; ///< jobs past the FIFO head allowed to collect signatures early
    std::uint64_t seed = 0;

    // Compromised-bridge behavior.
    std::optional<std::uint64_t> censor; ///< transfer id the bridge silently skips
    bool replay_completed = false;       ///< resubmit every completed transfer once

    /// Throws ConfigError.
    void validate() const;
};

struct SignRequestAction {
    std::size_t signatory = 0;
    signatory::SigningRequest request;
};

/// processTransfer payload to send from the relayer account to the
/// destination adapter. The scheduler reports the resulting tx hash through
/// Bridge::on_submitted.
struct SubmitAction {
    std::uint64_t submission = 0;
    Bytes payload;
};

using Action = std::variant<SignRequestAction, SubmitAction>;

struct ChainStatus {
    std::uint64_t head_number = 0;
    Hash256 head_hash;
    std::uint64_t ticks_since_new_block = 0;
    bool reorg_detected = false;
    bool liveness_alarm = false;
    bool initialized = false;
};

struct Alarm {
    std::uint64_t tick = 0;
    std::string kind; ///< liveness, reorg, pause, resume
    std::string detail;
};

struct Job {
    TransferMessage transfer;
    bool side = false; ///< forged outside the FIFO
    JobState state = JobState::detected;
    std::uint64_t source_block = 0;
    Hash256 data_hash;
    signatory::SigningRequest request;
    std::map<std::size_t, adapter::SignatureEntry> collected;
    std::set<std::size_t> answered;
    std::set<std::size_t> ask_again;
    std::map<std::string, std::uint32_t> refusals;
    std::uint32_t attempts = 0;
    std::uint64_t deadline = 0;
    Bytes payload;
    std::vector<Hash256> submissions;
    bool awaiting_tx_hash = false;
    Hash256 dest_tx;
    std::uint64_t dest_block = 0;
    bool already_processed = false;
    StallCause stall_cause = StallCause::signature_timeout;
    std::uint64_t stalled_at = 0;
};

struct Completion {
    std::uint64_t transfer_id = 0;
    Hash256 source_tx_hash;
    Hash256 dest_tx;
    std::uint64_t dest_block = 0;
    bool already_processed = false;
};

struct Stall {
    std::uint64_t transfer_id = 0;
    StallCause cause = StallCause::signature_timeout;
    std::uint64_t tick = 0;
    bool side = false;
};

/// Thrown by the crash hook; the owner discards the bridge and rebuilds it
/// from the journal written so far.
struct BridgeCrash {
    std::size_t journal_entries = 0;
};

struct Forgery {
    Address recipient;
    Bytes encoded_call;
    std::uint64_t gas = 0;
};

/// The relay daemon. Single logical actor advanced once per tick; talks to
/// the chains only through read views and to everything else through Actions.
class Bridge {
public:
    Bridge(BridgeConfig config, chain::ChainViewPtr source, chain::ChainViewPtr dest);

    /// Restarts from a journal: completed transfers are skipped, everything
    /// else is rediscovered from the source chain.
    static Bridge recover(BridgeConfig config, chain::ChainViewPtr source, chain::ChainViewPtr dest,
                          const std::vector<JournalEntry>& journal);

    std::vector<Action> step(std::uint64_t tick);
    void on_sign_response(std::size_t from, const signatory::SignResponse& response, std::uint64_t tick);
    void on_submitted(std::uint64_t submission, const Hash256& tx_hash);

    void pause(std::uint64_t tick, std::string reason);
    void resume(std::uint64_t tick);
    bool paused() const { return paused_; }

    void set_source_view(chain::ChainViewPtr v) { source_ = std::move(v); }
    void set_dest_view(chain::ChainViewPtr v) { dest_ = std::move(v); }

    // Compromised-bridge actions, queued for the next step.
    void forge(const Forgery& f, std::uint64_t tick);
    void flood(std::uint64_t count);

    /// Throw BridgeCrash as soon as the journal holds `entries` records.
    void crash_after(std::size_t entries) { crash_after_ = entries; }

    const BridgeConfig& config() const { return config_; }
    const std::vector<JournalEntry>& journal() const { return journal_; }
    const std::vector<Alarm>& alarms() const { return alarms_; }
    const ChainStatus& source_status() const { return source_status_; }
    const ChainStatus& dest_status() const { return dest_status_; }
    const std::map<std::uint64_t, Job>& jobs() const { return jobs_; }
    const std::vector<Completion>& completed() const { return completed_; }
    std::vector<Stall> stalls() const;
    std::uint64_t next_transfer_id() const { return next_id_; }
    std::uint64_t submissions() const { return submission_counter_; }
    std::uint64_t replays_sent() const { return replays_sent_; }
    std::uint64_t flood_requests_sent() const { return flood_sent_; }

private:
    struct SubmissionRef {
        enum class Kind : std::uint8_t { fifo, side, replay } kind = Kind::fifo;
        std::uint64_t key = 0;
    };

    void record(std::uint64_t tick, const std::string& transfer, std::string_view from, std::string_view to,
                std::string detail);
    void transition(std::uint64_t tick, Job& job, std::uint64_t key, JobState to, std::string detail);
    std::string job_label(const Job& job, std::uint64_t key) const;

    void monitor(std::uint64_t tick, const chain::ChainView& view, ChainStatus& status, bool is_source);
    void on_source_reorg(std::uint64_t tick);
    void scan_source(std::uint64_t tick);
    void advance(std::uint64_t tick, Job& job, std::uint64_t key);
    void start_round(std::uint64_t tick, Job& job, std::uint64_t key, std::string why, StallCause if_exhausted);
    void submit(std::uint64_t tick, Job& job, std::uint64_t key, std::string why);
    void check_submissions(std::uint64_t tick, Job& job, std::uint64_t key);
    void stall(std::uint64_t tick, Job& job, std::uint64_t key, StallCause cause, std::string detail);
    void drop(std::uint64_t tick, std::uint64_t key, std::string why);
    Job* find_collecting(const signatory::SignResponse& r);

    BridgeConfig config_;
    chain::ChainViewPtr source_;
    chain::ChainViewPtr dest_;
    std::mt19937_64 rng_;

    std::map<std::uint64_t, Job> jobs_;
    std::map<std::uint64_t, Job> side_jobs_;
    std::set<std::uint64_t> finished_; ///< done or censored
    std::vector<Completion> completed_;
    std::vector<Stall> side_stalls_;
    std::uint64_t next_id_ = 0;
    std::uint64_t scanned_to_ = 0;
    bool scanned_any_ = false;

    std::map<std::uint64_t, SubmissionRef> submission_refs_;
    std::uint64_t submission_counter_ = 0;
    std::uint64_t replays_sent_ = 0;
    std::uint64_t flood_sent_ = 0;
    std::uint64_t forge_counter_ = 0;

    ChainStatus source_status_;
    ChainStatus dest_status_;
    bool paused_ = false;
    std::vector<Alarm> alarms_;

    std::vector<JournalEntry> journal_;
    std::optional<std::size_t> crash_after_;
    std::vector<Action> outbox_;
};

} // namespace twc::bridge
