#include "twc/signatory/messages.hpp"

#include "twc/common/errors.hpp"

namespace twc::signatory {

namespace {

constexpr std::string_view refusal_names[] = {"BlockHashMismatch", "InsufficientFinality", "TxNotFound",
                                              "DataHashMismatch"};

template <class T>
T fixed_field(const Json& j, const char* key)
{
    return T::from_hex(j.at(key).get<std::string>());
}

template <class F>
auto decoding(const char* what, F&& f)
{
    try {
        return f();
    } catch (const Json::exception& e) {
        throw DecodeError(std::string(what) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DecodeError(std::string(what) + ": " + e.what());
    }
}

} // namespace

std::string_view to_string(RefusalReason r)
{
    return refusal_names[static_cast<std::size_t>(r)];
}

std::optional<RefusalReason> parse_refusal(std::string_view s)
{
    for (std::size_t i = 0; i < std::size(refusal_names); ++i)
        if (refusal_names[i] == s)
            return static_cast<RefusalReason>(i);
    return std::nullopt;
}

Json to_json(const TransferMessage& m)
{
    Json j;
    j["sourceTransactionHash"] = m.source_tx_hash.hex();
    j["sourceAdapterAddress"] = m.source_adapter.hex();
    j["recipientContract"] = m.recipient.hex();
    j["encodedFunctionCall"] = to_hex(m.encoded_call);
    j["gas"] = m.gas;
    j["sourceTransferId"] = m.transfer_id;
    j["sourceNetworkId"] = m.source_network_id;
    return j;
}

TransferMessage transfer_from_json(const Json& j)
{
    return decoding("transfer", [&] {
        TransferMessage m;
        m.source_tx_hash = fixed_field<Hash256>(j, "sourceTransactionHash");
        m.source_adapter = fixed_field<Address>(j, "sourceAdapterAddress");
        m.recipient = fixed_field<Address>(j, "recipientContract");
        m.encoded_call = from_hex(j.at("encodedFunctionCall").get<std::string>());
        m.gas = j.at("gas").get<std::uint64_t>();
        m.transfer_id = j.at("sourceTransferId").get<std::uint64_t>();
        m.source_network_id = j.at("sourceNetworkId").get<std::string>();
        return m;
    });
}

Json to_json(const SigningRequest& r)
{
    Json j;
    j["sourceBlockNumber"] = r.source_block_number;
    j["sourceBlockHash"] = r.source_block_hash.hex();
    j["sourceTransactionHash"] = r.source_tx_hash.hex();
    j["transferDataHash"] = r.transfer_data_hash.hex();
    j["transfer"] = to_json(r.transfer);
    return j;
}

SigningRequest request_from_json(const Json& j)
{
    return decoding("signing request", [&] {
        SigningRequest r;
        r.source_block_number = j.at("sourceBlockNumber").get<std::uint64_t>();
        r.source_block_hash = fixed_field<Hash256>(j, "sourceBlockHash");
        r.source_tx_hash = fixed_field<Hash256>(j, "sourceTransactionHash");
        r.transfer_data_hash = fixed_field<Hash256>(j, "transferDataHash");
        r.transfer = transfer_from_json(j.at("transfer"));
        return r;
    });
}

Json to_json(const SignResponse& r)
{
    Json j;
    j["status"] = r.signed_ok ? "signed" : "refused";
    j["signatoryId"] = r.signatory_id;
    j["sourceTransactionHash"] = r.source_tx_hash.hex();
    j["transferDataHash"] = r.transfer_data_hash.hex();
    if (r.signed_ok) {
        j["publicKey"] = r.public_key.hex();
        j["signature"] = to_hex(r.signature);
    } else {
        j["reason"] = to_string(r.reason);
    }
    return j;
}

SignResponse response_from_json(const Json& j)
{
    return decoding("sign response", [&] {
        SignResponse r;
        auto status = j.at("status").get<std::string>();
        if (status != "signed" && status != "refused")
            throw DecodeError("unknown response status " + status);
        r.signed_ok = status == "signed";
        r.signatory_id = j.at("signatoryId").get<std::string>();
        r.source_tx_hash = fixed_field<Hash256>(j, "sourceTransactionHash");
        r.transfer_data_hash = fixed_field<Hash256>(j, "transferDataHash");
        if (r.signed_ok) {
            r.public_key = fixed_field<PublicKey>(j, "publicKey");
            r.signature = from_hex(j.at("signature").get<std::string>());
        } else {
            auto reason = parse_refusal(j.at("reason").get<std::string>());
            if (!reason)
                throw DecodeError("unknown refusal reason");
            r.reason = *reason;
        }
        return r;
    });
}

Bytes encode_frame(std::string_view payload)
{
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(payload.size())).raw(as_bytes(payload));
    return std::move(w).take();
}

void FrameDecoder::feed(ByteSpan data)
{
    buf_.insert(buf_.end(), data.begin(), data.end());
}

std::optional<std::string> FrameDecoder::next()
{
    if (buf_.size() < 4)
        return std::nullopt;
    ByteReader r(buf_);
    std::size_t len = r.u32();
    if (len > max_frame_)
        throw DecodeError("frame of " + std::to_string(len) + " bytes exceeds limit");
    if (buf_.size() < 4 + len)
        return std::nullopt;
    std::string out(buf_.begin() + 4, buf_.begin() + 4 + static_cast<std::ptrdiff_t>(len));
    buf_.erase(buf_.begin(), buf_.begin() + 4 + static_cast<std::ptrdiff_t>(len));
    return out;
}

} // namespace twc::signatory
