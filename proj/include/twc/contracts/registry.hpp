#pragma once

#include "twc/chain/contract.hpp"

namespace twc::contracts {

/// Factories for every contract kind shipped with the testbed, keyed by
/// Contract::kind(), for Chain::restore.
const chain::ContractRegistry& default_registry();

} // namespace twc::contracts
