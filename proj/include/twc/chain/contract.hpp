#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "twc/chain/types.hpp"

namespace twc::chain {

using Json = nlohmann::ordered_json;

struct DispatchResult {
    bool ok = true;
    std::string reason; ///< revert reason when !ok; otherwise empty

    static DispatchResult success() { return {}; }
    static DispatchResult revert(std::string why) { return {false, std::move(why)}; }
};

class Executor;

/// What a contract sees while it executes: the message (sender, value), the
/// block it runs in, and the side effects it may request.
class CallContext {
public:
    CallContext(Executor& exec, Address self, Address sender, std::uint64_t value)
        : exec_(exec), self_(self), sender_(sender), value_(value)
    {
    }

    const Address& self() const { return self_; }
    const Address& sender() const { return sender_; }
    std::uint64_t value() const { return value_; }
    std::uint64_t block_number() const;
    const Hash256& tx_hash() const;
    HashAlg hash_alg() const;
    const std::string& network_id() const;

    void emit(std::string name, std::vector<Attribute> attributes);
    /// Moves native value from this contract to `to`. False if underfunded.
    bool transfer(const Address& to, std::uint64_t amount);
    bool is_contract(const Address& a) const;
    /// Nested call. A failing callee has all its effects rolled back; the
    /// caller decides whether to propagate the failure.
    DispatchResult call(const Address& to, ByteSpan payload, std::uint64_t value = 0);

private:
    Executor& exec_;
    Address self_;
    Address sender_;
    std::uint64_t value_;
};

/// Contract state machine hosted by a chain. dispatch must be a pure
/// function of (state, payload, context) so reorg replay is exact.
class Contract {
public:
    virtual ~Contract() = default;

    virtual std::string_view kind() const = 0;
    virtual std::unique_ptr<Contract> clone() const = 0;
    virtual DispatchResult dispatch(CallContext& ctx, ByteSpan payload) = 0;
    /// Canonical state snapshot with stable key order.
    virtual Json to_json() const = 0;
};

using ContractFactory = std::function<std::unique_ptr<Contract>(const Json&)>;
using ContractRegistry = std::map<std::string, ContractFactory, std::less<>>;

} // namespace twc::chain
