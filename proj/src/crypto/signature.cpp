#include "twc/crypto/signature.hpp"

#include <sodium.h>

#include <stdexcept>

#include "twc/crypto/hash.hpp"

namespace twc::crypto {

namespace {

void ensure_sodium()
{
    static const bool ready = [] {
        if (sodium_init() < 0)
            throw std::runtime_error("libsodium initialization failed");
        return true;
    }();
    (void)ready;
}

} // namespace

Keypair keygen(const Seed& seed)
{
    ensure_sodium();
    Keypair kp;
    crypto_sign_seed_keypair(kp.public_key.data(), kp.secret_key.data(), seed.data());
    return kp;
}

Seed seed_from_label(std::string_view label)
{
    std::string preimage = "twc:seed:";
    preimage.append(label);
    return Seed::from_span(keccak256(as_bytes(preimage)).span());
}

Signature sign(const Keypair& keys, const Hash256& digest)
{
    ensure_sodium();
    Signature sig;
    crypto_sign_detached(sig.data(), nullptr, digest.data(), digest.size(),
                         keys.secret_key.data());
    return sig;
}

bool verify(const PublicKey& pub, const Hash256& digest, ByteSpan signature)
{
    ensure_sodium();
    if (signature.size() != signature_size)
        return false;
    return crypto_sign_verify_detached(signature.data(), digest.data(), digest.size(),
                                       pub.data()) == 0;
}

} // namespace twc::crypto
