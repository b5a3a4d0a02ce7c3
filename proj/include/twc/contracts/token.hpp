#pragma once

#include <map>

#include "twc/chain/contract.hpp"
#include "twc/crypto/abi.hpp"

namespace twc::contracts {

/// Bridged token. `bridgeOut` burns the caller's tokens and asks the local
/// adapter to mint the same amount on the remote token; `mint` is accepted
/// only from the local adapter.
class MintableToken final : public chain::Contract {
public:
    static constexpr std::string_view mint_sig = "mint(address,uint128)";
    static constexpr std::string_view bridge_out_sig = "bridgeOut(address,uint128)";
    static constexpr std::string_view transfer_sig = "transfer(address,uint128)";
    static constexpr std::uint64_t bridge_gas = 100'000;

    MintableToken(Address adapter, Address remote_token) : adapter_(adapter), remote_token_(remote_token) {}

    /// Genesis allocation; counts toward total supply.
    void issue(const Address& holder, crypto::Uint128 amount);

    crypto::Uint128 balance_of(const Address& holder) const;
    crypto::Uint128 total_supply() const { return total_supply_; }
    crypto::Uint128 issued() const { return issued_; }
    crypto::Uint128 minted() const { return minted_; }
    crypto::Uint128 burned() const { return burned_; }
    const Address& adapter() const { return adapter_; }
    const Address& remote_token() const { return remote_token_; }

    std::string_view kind() const override { return "token"; }
    std::unique_ptr<chain::Contract> clone() const override { return std::make_unique<MintableToken>(*this); }
    chain::DispatchResult dispatch(chain::CallContext& ctx, ByteSpan payload) override;
    chain::Json to_json() const override;
    static std::unique_ptr<chain::Contract> from_json(const chain::Json& j);

private:
    Address adapter_;
    Address remote_token_;
    std::map<Address, crypto::Uint128> balances_;
    crypto::Uint128 total_supply_ = 0;
    crypto::Uint128 issued_ = 0;
    crypto::Uint128 minted_ = 0;
    crypto::Uint128 burned_ = 0;
};

} // namespace twc::contracts
