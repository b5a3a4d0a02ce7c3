#pragma once

#include <map>
#include <optional>
#include <string>

#include "twc/chain/view.hpp"
#include "twc/crypto/signature.hpp"
#include "twc/signatory/messages.hpp"

namespace twc::signatory {

enum class Behavior : std::uint8_t { honest, refuse, wrong_signature, colluding };

std::string_view to_string(Behavior b);
std::optional<Behavior> parse_behavior(std::string_view s);

/// What an honest signatory checks a request against.
struct VerificationPolicy {
    Address source_adapter;          ///< only this adapter's events are attested
    crypto::HashAlg dest_hash_alg = crypto::HashAlg::keccak256;
    std::uint64_t min_confirmations = 0;
};

/// One decision for one request. No value means no response at all.
/// Pure: equal inputs give equal outputs.
std::optional<SignResponse> handle_sign_request(const crypto::SignatoryIdentity& identity, Behavior behavior,
                                                const chain::ChainView& view, const VerificationPolicy& policy,
                                                const SigningRequest& req);

/// Per-requester budget of requests per window of `window_ticks` ticks. A
/// budget of 0 admits everything.
class RateLimiter {
public:
    RateLimiter(std::uint64_t budget = 0, std::uint64_t window_ticks = 1)
        : budget_(budget), window_(window_ticks == 0 ? 1 : window_ticks)
    {
    }

    bool admit(const std::string& requester, std::uint64_t tick);

private:
    struct Usage {
        std::uint64_t window = 0;
        std::uint64_t used = 0;
    };

    std::uint64_t budget_;
    std::uint64_t window_;
    std::map<std::string, Usage> usage_;
};

struct SignatoryStats {
    std::uint64_t received = 0;
    std::uint64_t dropped = 0; ///< rate limited
    std::uint64_t signed_count = 0;
    std::uint64_t refused = 0;
    std::uint64_t silent = 0;
};

/// A signatory actor: identity, behavior, its own chain view and a rate
/// limiter in front of handle_sign_request.
class Signatory {
public:
    Signatory(crypto::SignatoryIdentity identity, Behavior behavior, chain::ChainViewPtr view,
              VerificationPolicy policy, RateLimiter limiter = {});

    std::optional<SignResponse> on_request(const std::string& requester, const SigningRequest& req,
                                           std::uint64_t tick);

    void set_view(chain::ChainViewPtr view) { view_ = std::move(view); }
    void set_behavior(Behavior b) { behavior_ = b; }

    const crypto::SignatoryIdentity& identity() const { return identity_; }
    Behavior behavior() const { return behavior_; }
    const SignatoryStats& stats() const { return stats_; }

private:
    crypto::SignatoryIdentity identity_;
    Behavior behavior_;
    chain::ChainViewPtr view_;
    VerificationPolicy policy_;
    RateLimiter limiter_;
    SignatoryStats stats_;
};

} // namespace twc::signatory
