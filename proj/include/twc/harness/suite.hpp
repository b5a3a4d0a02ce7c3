#pragma once

#include <string>
#include <vector>

#include "twc/harness/scenario.hpp"

namespace twc::harness {

/// Scenario documents for the threat matrix, in table order.
std::vector<Json> builtin_suite_documents();
std::vector<Scenario> builtin_suite();

/// Honest configuration, `transfers` setValue requests one per tick.
Json happy_path_document(std::uint64_t transfers, std::uint64_t finality);
/// One setValue(1) request end to end, small finality depths.
Json demo_document();
/// One request, finality 6. A reorg of depth `depth` that drops the request
/// fires once the request has depth - 1 confirmations.
Json reorg_sweep_document(std::uint64_t depth);
/// One request. After it is delivered, a reorg `extra` blocks deeper than
/// needed orphans and drops it.
Json reorg_after_delivery_document(std::uint64_t extra);

struct SuiteRow {
    std::string name;
    std::string risk;
    Impact predicted = Impact::low;
    Impact actual = Impact::low;
    std::size_t delivered = 0;
    std::size_t violations = 0;
    std::size_t stalls = 0;
    std::size_t alarms = 0;

    bool matches() const { return predicted == actual; }
};

std::vector<SuiteRow> run_suite(const std::vector<Scenario>& scenarios);

} // namespace twc::harness
