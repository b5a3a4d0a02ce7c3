#include "twc/crypto/transfer.hpp"

#include "twc/common/errors.hpp"

namespace twc::crypto {

void TransferMessage::validate() const
{
    if (encoded_call.size() < 4)
        throw EncodingError("encoded function call shorter than a selector");
}

Bytes transfer_preimage(const TransferMessage& m)
{
    ByteWriter w;
    w.fixed(m.source_tx_hash)
        .fixed(m.source_adapter)
        .fixed(m.recipient)
        .raw(m.encoded_call)
        .word(m.gas)
        .word(m.transfer_id)
        .raw(as_bytes(m.source_network_id));
    return std::move(w).take();
}

Hash256 compute_transfer_hash(const TransferMessage& m, HashAlg alg)
{
    return hash(alg, transfer_preimage(m));
}

void write_transfer(ByteWriter& w, const TransferMessage& m)
{
    w.fixed(m.source_tx_hash)
        .fixed(m.source_adapter)
        .fixed(m.recipient)
        .var(m.encoded_call)
        .u64(m.gas)
        .u64(m.transfer_id)
        .str(m.source_network_id);
}

TransferMessage read_transfer(ByteReader& r)
{
    TransferMessage m;
    m.source_tx_hash = r.fixed<Hash256>();
    m.source_adapter = r.fixed<Address>();
    m.recipient = r.fixed<Address>();
    m.encoded_call = r.var();
    m.gas = r.u64();
    m.transfer_id = r.u64();
    m.source_network_id = r.str();
    return m;
}

} // namespace twc::crypto
