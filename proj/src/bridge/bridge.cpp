#include "twc/bridge/bridge.hpp"

#include <algorithm>
#include <charconv>

#include "twc/common/errors.hpp"
#include "twc/crypto/hash.hpp"

namespace twc::bridge {

namespace {

constexpr std::string_view reorg_names[] = {"pause", "retry", "continue"};
constexpr std::string_view state_names[] = {"detected",   "awaitingFinality",     "collectingSignatures",
                                            "submitting", "awaitingDestFinality", "done",
                                            "stalled"};
constexpr std::string_view cause_names[] = {"SignatureTimeout", "SignatureRejected", "SignatoryRefused",
                                            "OutOfOrder",       "DestUnconfirmed",   "SubmissionRejected"};

std::optional<std::uint64_t> parse_id(std::string_view s)
{
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        return std::nullopt;
    return v;
}

std::string short_hex(const Hash256& h)
{
    return h.hex().substr(0, 16);
}

} // namespace

std::string_view to_string(ReorgResponse r)
{
    return reorg_names[static_cast<std::size_t>(r)];
}

std::optional<ReorgResponse> parse_reorg_response(std::string_view s)
{
    for (std::size_t i = 0; i < std::size(reorg_names); ++i)
        if (reorg_names[i] == s)
            return static_cast<ReorgResponse>(i);
    return std::nullopt;
}

std::string_view to_string(JobState s)
{
    return state_names[static_cast<std::size_t>(s)];
}

std::string_view to_string(StallCause c)
{
    return cause_names[static_cast<std::size_t>(c)];
}

bool is_censorship(StallCause c)
{
    return c == StallCause::signature_timeout || c == StallCause::signature_rejected ||
           c == StallCause::out_of_order;
}

void BridgeConfig::validate() const
{
    if (signatories.empty())
        throw ConfigError("bridge has no signatory endpoints");
    if (quorum < 1 || quorum > signatories.size())
        throw ConfigError("bridge quorum " + std::to_string(quorum) + " outside [1, " +
                          std::to_string(signatories.size()) + "]");
    if (sign_timeout_ticks == 0 || submit_timeout_ticks == 0 || liveness_timeout_ticks == 0)
        throw ConfigError("bridge timeouts must be positive");
    if (lookahead == 0)
        throw ConfigError("bridge lookahead must be positive");
}

Bridge::Bridge(BridgeConfig config, chain::ChainViewPtr source, chain::ChainViewPtr dest)
    : config_(std::move(config)), source_(std::move(source)), dest_(std::move(dest)), rng_(config_.seed)
{
    config_.validate();
    if (!source_ || !dest_)
        throw ConfigError("bridge needs both chain views");
}

Bridge Bridge::recover(BridgeConfig config, chain::ChainViewPtr source, chain::ChainViewPtr dest,
                       const std::vector<JournalEntry>& journal)
{
    Bridge b(std::move(config), std::move(source), std::move(dest));
    for (const auto& e : journal) {
        if (auto id = parse_id(e.transfer)) {
            if (e.to == to_string(JobState::done) || e.to == "censored")
                b.finished_.insert(*id);
        } else if (e.transfer.starts_with("forge-")) {
            if (auto n = parse_id(std::string_view(e.transfer).substr(6)))
                b.forge_counter_ = std::max(b.forge_counter_, *n + 1);
        }
    }
    while (b.finished_.contains(b.next_id_))
        ++b.next_id_;
    b.journal_ = journal;
    return b;
}

// ---------------------------------------------------------------------------
// journal

std::string Bridge::job_label(const Job& job, std::uint64_t key) const
{
    return job.side ? "forge-" + std::to_string(key) : std::to_string(key);
}

void Bridge::record(std::uint64_t tick, const std::string& transfer, std::string_view from, std::string_view to,
                    std::string detail)
{
    journal_.push_back(JournalEntry{tick, transfer, std::string(from), std::string(to), std::move(detail)});
    if (crash_after_ && journal_.size() >= *crash_after_)
        throw BridgeCrash{journal_.size()};
}

void Bridge::transition(std::uint64_t tick, Job& job, std::uint64_t key, JobState to, std::string detail)
{
    auto from = job.state;
    job.state = to;
    record(tick, job_label(job, key), to_string(from), to_string(to), std::move(detail));
}

// ---------------------------------------------------------------------------
// main loop

std::vector<Action> Bridge::step(std::uint64_t tick)
{
    monitor(tick, *source_, source_status_, true);
    monitor(tick, *dest_, dest_status_, false);
    if (paused_)
        return {};

    scan_source(tick);

    auto censor_due = [&] {
        while (config_.censor && next_id_ == *config_.censor && jobs_.contains(next_id_)) {
            jobs_.erase(next_id_);
            finished_.insert(next_id_);
            record(tick, std::to_string(next_id_), "-", "censored", "skipped by compromised bridge");
            ++next_id_;
        }
    };

    std::vector<std::uint64_t> keys;
    for (const auto& [k, _] : jobs_)
        keys.push_back(k);
    for (auto k : keys) {
        censor_due();
        if (auto it = jobs_.find(k); it != jobs_.end())
            advance(tick, it->second, k);
    }
    censor_due();

    keys.clear();
    for (const auto& [k, _] : side_jobs_)
        keys.push_back(k);
    for (auto k : keys)
        advance(tick, side_jobs_.at(k), k);

    std::vector<Action> out;
    out.swap(outbox_);
    return out;
}

void Bridge::monitor(std::uint64_t tick, const chain::ChainView& view, ChainStatus& status, bool is_source)
{
    auto head = view.head_number();
    auto block = view.get_block(head);
    Hash256 hash = block ? block->hash : Hash256{};
    if (!status.initialized) {
        status.initialized = true;
        status.head_number = head;
        status.head_hash = hash;
        return;
    }

    bool reorg = false;
    if (head < status.head_number) {
        reorg = true;
    } else {
        auto seen = view.get_block(status.head_number);
        reorg = !seen || seen->hash != status.head_hash;
    }

    std::string name = is_source ? "source" : "dest";
    if (head != status.head_number || hash != status.head_hash) {
        status.head_number = head;
        status.head_hash = hash;
        status.ticks_since_new_block = 0;
        status.liveness_alarm = false;
    } else if (++status.ticks_since_new_block >= config_.liveness_timeout_ticks && !status.liveness_alarm) {
        status.liveness_alarm = true;
        alarms_.push_back({tick, "liveness",
                           name + " chain produced no block for " + std::to_string(status.ticks_since_new_block) +
                               " ticks"});
    }

    if (!reorg)
        return;
    status.reorg_detected = true;
    alarms_.push_back({tick, "reorg", name + " chain reorganized; response " +
                                          std::string(to_string(config_.reorg_response))});
    switch (config_.reorg_response) {
    case ReorgResponse::pause:
        pause(tick, name + " chain reorganization");
        break;
    case ReorgResponse::retry:
        if (is_source)
            on_source_reorg(tick);
        break;
    case ReorgResponse::continue_:
        break;
    }
}

void Bridge::on_source_reorg(std::uint64_t tick)
{
    std::vector<std::uint64_t> victims;
    for (const auto& [k, job] : jobs_)
        if (job.state == JobState::detected || job.state == JobState::awaiting_finality ||
            job.state == JobState::collecting_signatures)
            victims.push_back(k);
    for (auto k : victims)
        drop(tick, k, "source reorganization; rescanning");
    auto head = source_->head_number();
    auto finalized = head > config_.source_finality ? head - config_.source_finality : 0;
    if (scanned_any_ && scanned_to_ > finalized)
        scanned_to_ = finalized;
}

void Bridge::drop(std::uint64_t tick, std::uint64_t key, std::string why)
{
    auto it = jobs_.find(key);
    if (it == jobs_.end())
        return;
    auto block = it->second.source_block;
    auto state = it->second.state;
    jobs_.erase(it);
    if (scanned_any_ && block > 0 && scanned_to_ >= block)
        scanned_to_ = block - 1;
    record(tick, std::to_string(key), to_string(state), "dropped", std::move(why));
}

void Bridge::scan_source(std::uint64_t tick)
{
    auto head = source_->head_number();
    std::uint64_t from = scanned_any_ ? scanned_to_ + 1 : 0;
    if (from > head)
        return;
    auto events = source_->get_events(config_.source_adapter, adapter::ev_transfer_requested, from, head);
    scanned_to_ = head;
    scanned_any_ = true;

    for (const auto& e : events) {
        TransferMessage m;
        try {
            m = adapter::message_from_event(e, source_->config().network_id);
        } catch (const DecodeError&) {
            continue;
        }
        auto id = m.transfer_id;
        if (id < next_id_ || finished_.contains(id))
            continue;
        if (auto it = jobs_.find(id); it != jobs_.end()) {
            auto& old = it->second;
            if (old.transfer == m) {
                old.source_block = e.block_number;
                continue;
            }
            if (old.state != JobState::detected && old.state != JobState::awaiting_finality &&
                old.state != JobState::collecting_signatures)
                continue;
            record(tick, std::to_string(id), to_string(old.state), "dropped",
                   "superseded by source tx " + short_hex(m.source_tx_hash));
            jobs_.erase(it);
        }

        Job job;
        job.transfer = std::move(m);
        job.source_block = e.block_number;
        auto [it, _] = jobs_.emplace(id, std::move(job));
        record(tick, std::to_string(id), "-", to_string(JobState::detected),
               "source block " + std::to_string(e.block_number) + " tx " + short_hex(e.tx_hash));
        transition(tick, it->second, id, JobState::awaiting_finality,
                   "need " + std::to_string(config_.source_finality) + " confirmations");
    }
}

void Bridge::advance(std::uint64_t tick, Job& job, std::uint64_t key)
{
    switch (job.state) {
    case JobState::detected:
        transition(tick, job, key, JobState::awaiting_finality, "");
        return;

    case JobState::awaiting_finality: {
        auto loc = source_->get_transaction(job.transfer.source_tx_hash);
        if (!loc) {
            drop(tick, key, "source transaction no longer canonical");
            return;
        }
        job.source_block = loc->block_number;
        auto conf = source_->head_number() - loc->block_number;
        if (conf < config_.source_finality || key >= next_id_ + config_.lookahead)
            return;
        start_round(tick, job, key, "source confirmations " + std::to_string(conf), StallCause::signature_timeout);
        return;
    }

    case JobState::collecting_signatures: {
        if (job.collected.size() >= config_.quorum) {
            if (job.side || key == next_id_)
                submit(tick, job, key, std::to_string(job.collected.size()) + " signatures collected");
            return;
        }
        for (auto idx : job.ask_again)
            outbox_.push_back(SignRequestAction{idx, job.request});
        job.ask_again.clear();

        bool everyone = job.answered.size() == config_.signatories.size();
        if (tick < job.deadline && !everyone)
            return;
        auto cause = job.refusals.empty() ? StallCause::signature_timeout : StallCause::signatory_refused;
        std::string why = everyone ? "signatures short of quorum" : "signature timeout";
        for (const auto& [reason, n] : job.refusals)
            why += ", " + std::to_string(n) + "x " + reason;
        start_round(tick, job, key, "retry after " + why, cause);
        return;
    }

    case JobState::submitting:
        check_submissions(tick, job, key);
        return;

    case JobState::awaiting_dest_finality: {
        auto conf = dest_->confirmations(job.dest_tx);
        if (!conf) {
            submit(tick, job, key, "destination transaction no longer canonical");
            return;
        }
        if (*conf < config_.dest_finality)
            return;
        transition(tick, job, key, JobState::done,
                   "destination block " + std::to_string(job.dest_block) +
                       (job.already_processed ? " (already processed)" : ""));
        if (job.side)
            return;
        completed_.push_back(Completion{key, job.transfer.source_tx_hash, job.dest_tx, job.dest_block,
                                        job.already_processed});
        finished_.insert(key);
        if (config_.replay_completed) {
            auto sub = ++submission_counter_;
            submission_refs_[sub] = {SubmissionRef::Kind::replay, key};
            outbox_.push_back(SubmitAction{sub, job.payload});
            ++replays_sent_;
        }
        jobs_.erase(key);
        return;
    }

    case JobState::done:
    case JobState::stalled:
        return;
    }
}

void Bridge::start_round(std::uint64_t tick, Job& job, std::uint64_t key, std::string why, StallCause if_exhausted)
{
    if (job.attempts > config_.max_retries) {
        stall(tick, job, key, if_exhausted, why);
        return;
    }
    ++job.attempts;

    if (!job.side)
        if (auto loc = source_->get_transaction(job.transfer.source_tx_hash))
            job.source_block = loc->block_number;
    auto block = source_->get_block(job.source_block);

    job.data_hash = crypto::compute_transfer_hash(job.transfer, dest_->config().hash_alg);
    job.request = signatory::SigningRequest{job.source_block, block ? block->hash : Hash256{},
                                            job.transfer.source_tx_hash, job.data_hash, job.transfer};
    job.answered.clear();
    job.ask_again.clear();
    job.refusals.clear();
    job.deadline = tick + config_.sign_timeout_ticks;
    for (const auto& [idx, _] : job.collected)
        job.answered.insert(idx);

    transition(tick, job, key, JobState::collecting_signatures,
               why + "; attempt " + std::to_string(job.attempts));
    for (std::size_t i = 0; i < config_.signatories.size(); ++i)
        if (!job.collected.contains(i))
            outbox_.push_back(SignRequestAction{i, job.request});
}

void Bridge::submit(std::uint64_t tick, Job& job, std::uint64_t key, std::string why)
{
    adapter::SignatureBundle bundle;
    for (const auto& [_, entry] : job.collected)
        bundle.push_back(entry);
    job.payload = adapter::encode_process_transfer(job.transfer, bundle);

    auto sub = ++submission_counter_;
    submission_refs_[sub] = {job.side ? SubmissionRef::Kind::side : SubmissionRef::Kind::fifo, key};
    job.awaiting_tx_hash = true;
    job.deadline = tick + config_.submit_timeout_ticks;
    transition(tick, job, key, JobState::submitting, why + "; attempt " + std::to_string(job.attempts));
    outbox_.push_back(SubmitAction{sub, job.payload});
}

void Bridge::check_submissions(std::uint64_t tick, Job& job, std::uint64_t key)
{
    if (job.awaiting_tx_hash)
        return;

    for (auto it = job.submissions.begin(); it != job.submissions.end(); ++it) {
        auto loc = dest_->get_transaction(*it);
        if (!loc)
            continue;
        auto h = *it;

        if (!loc->receipt.ok()) {
            auto reason = loc->receipt.revert_reason;
            job.submissions.erase(it);
            if (reason == "InvalidSignature" || reason == "InsufficientSignatures") {
                job.collected.clear();
                start_round(tick, job, key, "destination rejected signatures: " + reason,
                            StallCause::signature_rejected);
                return;
            }
            auto cause = reason == "OutOfOrder" ? StallCause::out_of_order : StallCause::submission_rejected;
            if (job.attempts > config_.max_retries) {
                stall(tick, job, key, cause, "destination reverted " + reason);
                return;
            }
            ++job.attempts;
            submit(tick, job, key, "resubmit after " + reason);
            return;
        }

        auto block = dest_->get_block(loc->block_number);
        if (!block)
            continue;
        for (const auto& e : block->events) {
            if (e.tx_hash != h || e.emitter != config_.dest_adapter)
                continue;
            if (e.name == adapter::ev_processed) {
                job.already_processed = false;
                job.dest_block = loc->block_number;
            } else if (e.name == adapter::ev_already_processed) {
                job.already_processed = true;
                job.dest_block = adapter::parse_already_processed(e).original_block;
            } else {
                continue;
            }
            job.dest_tx = h;
            transition(tick, job, key, JobState::awaiting_dest_finality,
                       std::string(e.name) + " in destination block " + std::to_string(loc->block_number));
            if (!job.side && key == next_id_)
                ++next_id_;
            return;
        }
    }

    if (tick < job.deadline)
        return;
    if (job.attempts > config_.max_retries) {
        stall(tick, job, key, StallCause::dest_unconfirmed, "no destination confirmation");
        return;
    }
    ++job.attempts;
    submit(tick, job, key, "resubmit: not seen on destination");
}

void Bridge::stall(std::uint64_t tick, Job& job, std::uint64_t key, StallCause cause, std::string detail)
{
    job.stall_cause = cause;
    job.stalled_at = tick;
    transition(tick, job, key, JobState::stalled, std::string(to_string(cause)) + ": " + detail);
}

// ---------------------------------------------------------------------------
// inputs from the scheduler

Job* Bridge::find_collecting(const signatory::SignResponse& r)
{
    auto matches = [&](const Job& j) {
        return j.state == JobState::collecting_signatures && j.request.source_tx_hash == r.source_tx_hash &&
               j.data_hash == r.transfer_data_hash;
    };
    for (auto& [_, j] : jobs_)
        if (matches(j))
            return &j;
    for (auto& [_, j] : side_jobs_)
        if (matches(j))
            return &j;
    return nullptr;
}

void Bridge::on_sign_response(std::size_t from, const signatory::SignResponse& r, std::uint64_t)
{
    if (from >= config_.signatories.size())
        return;
    Job* job = find_collecting(r);
    if (!job)
        return;
    if (r.signed_ok) {
        job->answered.insert(from);
        if (r.signature.size() == crypto::signature_size && r.public_key == config_.signatories[from])
            job->collected[from] = adapter::SignatureEntry{r.public_key, r.signature};
    } else if (r.reason == signatory::RefusalReason::insufficient_finality) {
        job->answered.erase(from);
        job->ask_again.insert(from);
    } else {
        job->answered.insert(from);
        ++job->refusals[std::string(to_string(r.reason))];
    }
}

void Bridge::on_submitted(std::uint64_t submission, const Hash256& tx_hash)
{
    auto it = submission_refs_.find(submission);
    if (it == submission_refs_.end())
        return;
    auto ref = it->second;
    submission_refs_.erase(it);
    auto* jobs = ref.kind == SubmissionRef::Kind::fifo ? &jobs_
                 : ref.kind == SubmissionRef::Kind::side ? &side_jobs_
                                                         : nullptr;
    if (!jobs)
        return;
    if (auto j = jobs->find(ref.key); j != jobs->end()) {
        j->second.submissions.push_back(tx_hash);
        j->second.awaiting_tx_hash = false;
    }
}

void Bridge::pause(std::uint64_t tick, std::string reason)
{
    if (paused_)
        return;
    paused_ = true;
    alarms_.push_back({tick, "pause", std::move(reason)});
}

void Bridge::resume(std::uint64_t tick)
{
    if (!paused_)
        return;
    paused_ = false;
    alarms_.push_back({tick, "resume", "operator resumed the bridge"});
    for (auto* jobs : {&jobs_, &side_jobs_})
        for (auto& [_, j] : *jobs) {
            if (j.state == JobState::collecting_signatures)
                j.deadline = tick + config_.sign_timeout_ticks;
            else if (j.state == JobState::submitting)
                j.deadline = tick + config_.submit_timeout_ticks;
        }
}

void Bridge::forge(const Forgery& f, std::uint64_t tick)
{
    auto key = forge_counter_++;
    Job job;
    job.side = true;
    ByteWriter w;
    w.str("twc:forged").str(config_.id).u64(key).u64(rng_());
    job.transfer.source_tx_hash = crypto::keccak256(w.bytes());
    job.transfer.source_adapter = config_.source_adapter;
    job.transfer.recipient = f.recipient;
    job.transfer.encoded_call = f.encoded_call;
    job.transfer.gas = f.gas;
    job.transfer.transfer_id = next_id_;
    job.transfer.source_network_id = source_->config().network_id;
    job.source_block = source_->head_number();
    auto [it, _] = side_jobs_.emplace(key, std::move(job));
    record(tick, job_label(it->second, key), "-", to_string(JobState::detected),
           "fabricated transfer id " + std::to_string(it->second.transfer.transfer_id));
    start_round(tick, it->second, key, "forged request", StallCause::signatory_refused);
}

void Bridge::flood(std::uint64_t count)
{
    auto head = source_->head_number();
    for (std::uint64_t n = 0; n < count; ++n) {
        signatory::SigningRequest junk;
        junk.source_block_number = head;
        for (auto* h : {&junk.source_block_hash, &junk.source_tx_hash, &junk.transfer_data_hash})
            for (auto& b : h->bytes)
                b = static_cast<std::uint8_t>(rng_());
        junk.transfer.source_tx_hash = junk.source_tx_hash;
        junk.transfer.encoded_call = Bytes(4, 0);
        junk.transfer.transfer_id = n;
        for (std::size_t i = 0; i < config_.signatories.size(); ++i)
            outbox_.push_back(SignRequestAction{i, junk});
        ++flood_sent_;
    }
}

std::vector<Stall> Bridge::stalls() const
{
    std::vector<Stall> out;
    for (const auto* jobs : {&jobs_, &side_jobs_})
        for (const auto& [k, j] : *jobs)
            if (j.state == JobState::stalled)
                out.push_back(Stall{j.side ? j.transfer.transfer_id : k, j.stall_cause, j.stalled_at, j.side});
    return out;
}

} // namespace twc::bridge
