#include "autopeer/identity.hpp"

#include "autopeer/errors.hpp"

namespace autopeer {

HashChain HashChain::create(const Bytes32& seed, std::size_t length) {
  if (length < 2) {
    throw InvalidParameter("hash chain length must be at least 2, got " + std::to_string(length));
  }
  std::vector<Bytes32> elements;
  elements.reserve(length);
  elements.push_back(seed);
  while (elements.size() < length) elements.push_back(sha256(elements.back()));
  return HashChain(std::move(elements));
}

Salt HashChain::advance() {
  if (cursor_ == 0) throw ChainExhausted();
  --cursor_;
  return current();
}

bool verify_salt(const Salt& claimed, const Salt& last_known, std::uint32_t m, std::uint32_t m_max) {
  if (m > m_max) {
    throw VerificationRefused("salt verification refused: " + std::to_string(m) + " updates exceeds cap " +
                              std::to_string(m_max));
  }
  Bytes32 value = claimed.bytes;
  for (std::uint32_t i = 0; i < m; ++i) value = sha256(value);
  return value == last_known.bytes;
}

NodeId new_identity(Rng& rng) {
  NodeId id;
  rng.fill(id.bytes);
  return id;
}

Salt new_private_salt(Rng& rng) {
  Salt salt{{}, SaltKind::Private};
  rng.fill(salt.bytes);
  return salt;
}

NodeId IdentityPool::draw(Rng& rng) {
  for (;;) {
    NodeId id = new_identity(rng);
    if (issued_.insert(id).second) return id;
  }
}

}  // namespace autopeer
