#include "twc/contracts/storage.hpp"

namespace twc::contracts {

using chain::DispatchResult;

namespace {

const crypto::CallDecoder& decoder()
{
    static const crypto::CallDecoder d = [] {
        crypto::CallDecoder d;
        d.add(StorageContract::set_value_sig);
        return d;
    }();
    return d;
}

} // namespace

DispatchResult StorageContract::dispatch(chain::CallContext&, ByteSpan payload)
{
    auto call = decoder().decode(payload);
    if (!call)
        return DispatchResult::revert("UnknownFunction");
    value_ = crypto::word_to_u128(call->args[0]);
    ++writes_;
    return DispatchResult::success();
}

chain::Json StorageContract::to_json() const
{
    return chain::Json{{"value", crypto::u128_to_string(value_)}, {"writes", writes_}};
}

std::unique_ptr<chain::Contract> StorageContract::from_json(const chain::Json& j)
{
    auto c = std::make_unique<StorageContract>();
    c->value_ = crypto::u128_from_string(j.at("value").get<std::string>());
    c->writes_ = j.at("writes").get<std::uint64_t>();
    return c;
}

} // namespace twc::contracts
