#pragma once

#include <string>
#include <vector>

#include "twc/chain/chain.hpp"

namespace twc::harness {

enum class ViolationReason : std::uint8_t { no_source_request, source_request_orphaned, payload_mismatch };

std::string_view to_string(ViolationReason r);

struct CausalityViolation {
    Hash256 dest_tx_hash;   ///< transaction that emitted the Processed event
    std::uint64_t dest_block = 0;
    std::uint64_t transfer_id = 0;
    Hash256 source_tx_hash; ///< as claimed by the delivered message
    ViolationReason reason = ViolationReason::no_source_request;

    friend bool operator==(const CausalityViolation&, const CausalityViolation&) = default;
};

/// Audits every Processed event on the destination's canonical chain against
/// the source chain's ground truth: canonical blocks first, then the store of
/// orphaned blocks. Reads chain stores only.
std::vector<CausalityViolation> causality_oracle(const chain::Chain& source, const Address& source_adapter,
                                                 const chain::Chain& dest, const Address& dest_adapter);

} // namespace twc::harness
