#include "twc/contracts/registry.hpp"

#include "twc/adapter/adapter.hpp"
#include "twc/contracts/storage.hpp"
#include "twc/contracts/token.hpp"

namespace twc::contracts {

const chain::ContractRegistry& default_registry()
{
    static const chain::ContractRegistry registry = {
        {"adapter",
         [](const chain::Json& j) -> std::unique_ptr<chain::Contract> {
             return std::make_unique<adapter::Adapter>(adapter::AdapterState::from_json(j));
         }},
        {"storage", StorageContract::from_json},
        {"token", MintableToken::from_json},
    };
    return registry;
}

} // namespace twc::contracts
