#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "autopeer/digest.hpp"
#include "autopeer/rng.hpp"

namespace autopeer {

/// Stand-in for the hash of a node's public key. Ordered lexicographically.
struct NodeId {
  Bytes32 bytes{};

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;

  std::string hex() const { return to_hex(bytes); }
  /// First 8 hex digits, for logs and CSVs.
  std::string short_hex() const { return hex().substr(0, 8); }
};

struct NodeIdHash {
  std::size_t operator()(const NodeId& id) const noexcept {
    std::uint64_t h;
    std::memcpy(&h, id.bytes.data(), sizeof h);
    return static_cast<std::size_t>(h);
  }
};

enum class SaltKind : std::uint8_t { Public, Private };

struct Salt {
  Bytes32 bytes{};
  SaltKind kind = SaltKind::Public;

  friend bool operator==(const Salt&, const Salt&) = default;
};

// One-way chain s_0 .. s_{M-1} with s_{t+1} = H(s_t). Elements are revealed
// from the end: the cursor starts at M-1 and only moves toward 0.
class HashChain {
 public:
  /// Throws InvalidParameter when length < 2.
  static HashChain create(const Bytes32& seed, std::size_t length);

  std::size_t length() const { return elements_.size(); }
  std::size_t cursor() const { return cursor_; }
  bool exhausted() const { return cursor_ == 0; }

  const Bytes32& element(std::size_t index) const { return elements_.at(index); }

  /// The currently published public salt, s_cursor.
  Salt current() const { return Salt{elements_[cursor_], SaltKind::Public}; }

  /// Reveals the preceding element. Throws ChainExhausted at cursor 0.
  Salt advance();

 private:
  HashChain(std::vector<Bytes32> elements) : elements_(std::move(elements)), cursor_(elements_.size() - 1) {}

  std::vector<Bytes32> elements_;
  std::size_t cursor_;
};

/// Default number of chain elements a node provisions.
inline constexpr std::size_t kDefaultChainLength = 64;
/// Default cap on hashes a verifier will compute per request.
inline constexpr std::uint32_t kDefaultMaxVerifiedUpdates = 16;

/// True iff H^m(claimed) == last_known. m = 0 is byte equality.
/// Throws VerificationRefused when m > m_max.
bool verify_salt(const Salt& claimed, const Salt& last_known, std::uint32_t m,
                 std::uint32_t m_max = kDefaultMaxVerifiedUpdates);

/// 32 fresh random bytes. Uniqueness is the caller's concern; see IdentityPool.
NodeId new_identity(Rng& rng);

Salt new_private_salt(Rng& rng);

/// Hands out identities that are unique within one pool (redraws on collision).
class IdentityPool {
 public:
  NodeId draw(Rng& rng);
  std::size_t size() const { return issued_.size(); }

 private:
  std::unordered_set<NodeId, NodeIdHash> issued_;
};

}  // namespace autopeer
