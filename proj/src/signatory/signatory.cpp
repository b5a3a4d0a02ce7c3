#include "twc/signatory/signatory.hpp"

#include "twc/adapter/adapter.hpp"
#include "twc/common/errors.hpp"
#include "twc/crypto/hash.hpp"

namespace twc::signatory {

namespace {

constexpr std::string_view behavior_names[] = {"honest", "refuse", "wrongSignature", "colluding"};

SignResponse base_response(const crypto::SignatoryIdentity& identity, const SigningRequest& req)
{
    SignResponse r;
    r.signatory_id = identity.id;
    r.source_tx_hash = req.source_tx_hash;
    r.transfer_data_hash = req.transfer_data_hash;
    return r;
}

SignResponse refused(const crypto::SignatoryIdentity& identity, const SigningRequest& req, RefusalReason why)
{
    auto r = base_response(identity, req);
    r.reason = why;
    return r;
}

SignResponse signed_response(const crypto::SignatoryIdentity& identity, const SigningRequest& req, Bytes sig)
{
    auto r = base_response(identity, req);
    r.signed_ok = true;
    r.public_key = identity.keys.public_key;
    r.signature = std::move(sig);
    return r;
}

Bytes real_signature(const crypto::SignatoryIdentity& identity, const Hash256& digest)
{
    auto sig = crypto::sign(identity.keys, digest);
    return Bytes(sig.begin(), sig.end());
}

/// 64 bytes that look like a signature but are derived without the signing
/// key, so they never verify.
Bytes garbage_signature(const crypto::SignatoryIdentity& identity, const Hash256& digest)
{
    ByteWriter w;
    w.str("twc:garbage").fixed(identity.keys.public_key).fixed(digest);
    auto a = crypto::keccak256(w.bytes());
    auto b = crypto::keccak256(a.span());
    Bytes out(a.bytes.begin(), a.bytes.end());
    out.insert(out.end(), b.bytes.begin(), b.bytes.end());
    return out;
}

} // namespace

std::string_view to_string(Behavior b)
{
    return behavior_names[static_cast<std::size_t>(b)];
}

std::optional<Behavior> parse_behavior(std::string_view s)
{
    for (std::size_t i = 0; i < std::size(behavior_names); ++i)
        if (behavior_names[i] == s)
            return static_cast<Behavior>(i);
    return std::nullopt;
}

std::optional<SignResponse> handle_sign_request(const crypto::SignatoryIdentity& identity, Behavior behavior,
                                                const chain::ChainView& view, const VerificationPolicy& policy,
                                                const SigningRequest& req)
{
    switch (behavior) {
    case Behavior::refuse:
        return std::nullopt;
    case Behavior::wrong_signature:
        return signed_response(identity, req, garbage_signature(identity, req.transfer_data_hash));
    case Behavior::colluding:
        return signed_response(identity, req, real_signature(identity, req.transfer_data_hash));
    case Behavior::honest:
        break;
    }

    auto block = view.get_block(req.source_block_number);
    if (!block || block->hash != req.source_block_hash)
        return refused(identity, req, RefusalReason::block_hash_mismatch);

    auto conf = view.confirmations(req.source_tx_hash);
    auto loc = view.get_transaction(req.source_tx_hash);
    if (!conf || !loc || loc->block_number != req.source_block_number)
        return refused(identity, req, RefusalReason::tx_not_found);
    if (*conf < policy.min_confirmations)
        return refused(identity, req, RefusalReason::insufficient_finality);

    const chain::EventLog* event = nullptr;
    for (const auto& e : block->events) {
        if (e.tx_hash != req.source_tx_hash || e.emitter != policy.source_adapter ||
            e.name != adapter::ev_transfer_requested)
            continue;
        try {
            if (adapter::parse_transfer_requested(e).transfer_id == req.transfer.transfer_id) {
                event = &e;
                break;
            }
        } catch (const Error&) {
        }
    }
    if (!event)
        return refused(identity, req, RefusalReason::tx_not_found);

    auto rebuilt = adapter::message_from_event(*event, view.config().network_id);
    auto digest = crypto::compute_transfer_hash(rebuilt, policy.dest_hash_alg);
    if (rebuilt != req.transfer || digest != req.transfer_data_hash)
        return refused(identity, req, RefusalReason::data_hash_mismatch);

    return signed_response(identity, req, real_signature(identity, digest));
}

bool RateLimiter::admit(const std::string& requester, std::uint64_t tick)
{
    if (budget_ == 0)
        return true;
    auto& u = usage_[requester];
    auto window = tick / window_;
    if (u.window != window) {
        u.window = window;
        u.used = 0;
    }
    if (u.used >= budget_)
        return false;
    ++u.used;
    return true;
}

Signatory::Signatory(crypto::SignatoryIdentity identity, Behavior behavior, chain::ChainViewPtr view,
                     VerificationPolicy policy, RateLimiter limiter)
    : identity_(std::move(identity)), behavior_(behavior), view_(std::move(view)), policy_(policy),
      limiter_(limiter)
{
}

std::optional<SignResponse> Signatory::on_request(const std::string& requester, const SigningRequest& req,
                                                  std::uint64_t tick)
{
    ++stats_.received;
    if (!limiter_.admit(requester, tick)) {
        ++stats_.dropped;
        return std::nullopt;
    }
    auto r = handle_sign_request(identity_, behavior_, *view_, policy_, req);
    if (!r)
        ++stats_.silent;
    else if (r->signed_ok)
        ++stats_.signed_count;
    else
        ++stats_.refused;
    return r;
}

} // namespace twc::signatory
