#include "twc/contracts/token.hpp"

#include "twc/adapter/adapter.hpp"

namespace twc::contracts {

using chain::DispatchResult;
using crypto::Uint128;

namespace {

const crypto::CallDecoder& decoder()
{
    static const crypto::CallDecoder d = [] {
        crypto::CallDecoder d;
        d.add(MintableToken::mint_sig);
        d.add(MintableToken::bridge_out_sig);
        d.add(MintableToken::transfer_sig);
        return d;
    }();
    return d;
}

} // namespace

void MintableToken::issue(const Address& holder, Uint128 amount)
{
    balances_[holder] += amount;
    total_supply_ += amount;
    issued_ += amount;
}

Uint128 MintableToken::balance_of(const Address& holder) const
{
    auto it = balances_.find(holder);
    return it == balances_.end() ? 0 : it->second;
}

DispatchResult MintableToken::dispatch(chain::CallContext& ctx, ByteSpan payload)
{
    auto call = decoder().decode(payload);
    if (!call)
        return DispatchResult::revert("UnknownFunction");
    auto to = crypto::word_to_address(call->args[0]);
    auto amount = crypto::word_to_u128(call->args[1]);

    if (call->name == "mint") {
        if (ctx.sender() != adapter_)
            return DispatchResult::revert("NotAdapter");
        balances_[to] += amount;
        total_supply_ += amount;
        minted_ += amount;
        return DispatchResult::success();
    }

    auto& from = balances_[ctx.sender()];
    if (from < amount)
        return DispatchResult::revert("InsufficientTokens");
    from -= amount;

    if (call->name == "transfer") {
        balances_[to] += amount;
        return DispatchResult::success();
    }

    total_supply_ -= amount;
    burned_ += amount;
    auto mint = crypto::encode_function_call(mint_sig, {crypto::word_from_address(to), crypto::word_from_u128(amount)});
    auto request = adapter::encode_request_transfer(remote_token_, mint.bytes, bridge_gas);
    auto r = ctx.call(adapter_, request, ctx.value());
    if (!r.ok)
        return DispatchResult::revert(r.reason);
    return DispatchResult::success();
}

chain::Json MintableToken::to_json() const
{
    chain::Json j;
    j["adapter"] = adapter_.hex();
    j["remoteToken"] = remote_token_.hex();
    j["balances"] = chain::Json::object();
    for (const auto& [a, v] : balances_)
        if (v != 0)
            j["balances"][a.hex()] = crypto::u128_to_string(v);
    j["totalSupply"] = crypto::u128_to_string(total_supply_);
    j["issued"] = crypto::u128_to_string(issued_);
    j["minted"] = crypto::u128_to_string(minted_);
    j["burned"] = crypto::u128_to_string(burned_);
    return j;
}

std::unique_ptr<chain::Contract> MintableToken::from_json(const chain::Json& j)
{
    auto t = std::make_unique<MintableToken>(Address::from_hex(j.at("adapter").get<std::string>()),
                                             Address::from_hex(j.at("remoteToken").get<std::string>()));
    for (const auto& [a, v] : j.at("balances").items())
        t->balances_[Address::from_hex(a)] = crypto::u128_from_string(v.get<std::string>());
    t->total_supply_ = crypto::u128_from_string(j.at("totalSupply").get<std::string>());
    t->issued_ = crypto::u128_from_string(j.at("issued").get<std::string>());
    t->minted_ = crypto::u128_from_string(j.at("minted").get<std::string>());
    t->burned_ = crypto::u128_from_string(j.at("burned").get<std::string>());
    return t;
}

} // namespace twc::contracts
