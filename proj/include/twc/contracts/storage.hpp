#pragma once

#include "twc/chain/contract.hpp"
#include "twc/crypto/abi.hpp"

namespace twc::contracts {

/// Holds one uint128 written through `setValue(uint128)`.
class StorageContract final : public chain::Contract {
public:
    static constexpr std::string_view set_value_sig = "setValue(uint128)";

    crypto::Uint128 value() const { return value_; }
    std::uint64_t writes() const { return writes_; }

    std::string_view kind() const override { return "storage"; }
    std::unique_ptr<chain::Contract> clone() const override
    {
        return std::make_unique<StorageContract>(*this);
    }
    chain::DispatchResult dispatch(chain::CallContext& ctx, ByteSpan payload) override;
    chain::Json to_json() const override;
    static std::unique_ptr<chain::Contract> from_json(const chain::Json& j);

private:
    crypto::Uint128 value_ = 0;
    std::uint64_t writes_ = 0;
};

} // namespace twc::contracts
