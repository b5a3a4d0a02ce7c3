#include "twc/harness/oracle.hpp"

#include "twc/adapter/adapter.hpp"
#include "twc/common/errors.hpp"

namespace twc::harness {

namespace {

enum class Match : std::uint8_t { none, differs, equal };

/// Looks for the BridgeTransferRequested event of `m.source_tx_hash` in
/// `block` and compares it with the delivered message.
Match match_in_block(const chain::Block& block, const crypto::TransferMessage& m, const Address& source_adapter,
                     std::string_view network_id, crypto::HashAlg dest_alg)
{
    Match best = Match::none;
    for (const auto& e : block.events) {
        if (e.tx_hash != m.source_tx_hash || e.emitter != source_adapter ||
            e.name != adapter::ev_transfer_requested)
            continue;
        try {
            auto original = adapter::message_from_event(e, network_id);
            if (crypto::compute_transfer_hash(original, dest_alg) == crypto::compute_transfer_hash(m, dest_alg))
                return Match::equal;
        } catch (const Error&) {
        }
        best = Match::differs;
    }
    return best;
}

} // namespace

std::string_view to_string(ViolationReason r)
{
    switch (r) {
    case ViolationReason::no_source_request:
        return "noSourceRequest";
    case ViolationReason::source_request_orphaned:
        return "sourceRequestOrphaned";
    case ViolationReason::payload_mismatch:
        return "payloadMismatch";
    }
    return "unknown";
}

std::vector<CausalityViolation> causality_oracle(const chain::Chain& source, const Address& source_adapter,
                                                 const chain::Chain& dest, const Address& dest_adapter)
{
    std::vector<CausalityViolation> out;
    const auto& network = source.config().network_id;
    auto dest_alg = dest.config().hash_alg;

    for (const auto& e : dest.get_events(dest_adapter, adapter::ev_processed, 0, dest.head_number())) {
        CausalityViolation v;
        v.dest_tx_hash = e.tx_hash;
        v.dest_block = e.block_number;

        std::optional<adapter::ProcessTransferCall> call;
        if (auto loc = dest.get_transaction(e.tx_hash))
            call = adapter::decode_process_transfer(loc->tx.payload);
        try {
            auto p = adapter::parse_processed(e);
            v.transfer_id = p.transfer_id;
            v.source_tx_hash = p.source_tx_hash;
        } catch (const DecodeError&) {
        }
        if (!call) {
            v.reason = ViolationReason::no_source_request;
            out.push_back(v);
            continue;
        }
        const auto& m = call->message;
        v.source_tx_hash = m.source_tx_hash;
        v.transfer_id = m.transfer_id;

        Match canonical = Match::none;
        if (auto loc = source.get_transaction(m.source_tx_hash))
            if (auto block = source.get_block(loc->block_number))
                canonical = match_in_block(*block, m, source_adapter, network, dest_alg);
        if (canonical == Match::equal)
            continue;
        if (canonical == Match::differs) {
            v.reason = ViolationReason::payload_mismatch;
            out.push_back(v);
            continue;
        }

        bool orphaned = false;
        for (const auto& o : source.orphaned_blocks())
            if (match_in_block(*o.block, m, source_adapter, network, dest_alg) != Match::none)
                orphaned = true;
        v.reason = orphaned ? ViolationReason::source_request_orphaned : ViolationReason::no_source_request;
        out.push_back(v);
    }
    return out;
}

} // namespace twc::harness
