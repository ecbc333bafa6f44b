#include <algorithm>

#include "autopeer/errors.hpp"
#include "autopeer/protocol.hpp"

namespace autopeer {

namespace {

enum Tag : std::uint8_t { kRequest = 0x01, kResponse = 0x02, kDrop = 0x03 };

void put_bytes(std::vector<std::uint8_t>& out, const Bytes32& b) { out.insert(out.end(), b.begin(), b.end()); }

void put_varint(std::vector<std::uint8_t>& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t byte() {
    if (pos_ >= bytes_.size()) throw ProtocolError("truncated message");
    return bytes_[pos_++];
  }

  Bytes32 bytes32() {
    if (bytes_.size() - pos_ < 32) throw ProtocolError("truncated message");
    Bytes32 out{};
    std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_), 32, out.begin());
    pos_ += 32;
    return out;
  }

  std::uint32_t varint32() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 35; shift += 7) {
      const std::uint8_t b = byte();
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) {
        if (v > 0xffffffffULL) throw ProtocolError("varint out of range");
        return static_cast<std::uint32_t>(v);
      }
    }
    throw ProtocolError("varint too long");
  }

  void expect_end() const {
    if (pos_ != bytes_.size()) throw ProtocolError("trailing bytes after message");
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_message(const Message& msg) {
  std::vector<std::uint8_t> out;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PeeringRequest>) {
          out.push_back(kRequest);
          put_bytes(out, m.from.bytes);
          put_bytes(out, m.to.bytes);
          put_bytes(out, m.requester_public_salt.bytes);
          put_varint(out, m.updates_since_last);
          put_varint(out, m.chain_generation);
        } else if constexpr (std::is_same_v<T, PeeringResponse>) {
          out.push_back(kResponse);
          put_bytes(out, m.from.bytes);
          put_bytes(out, m.to.bytes);
          out.push_back(m.accepted ? 1 : 0);
        } else {
          out.push_back(kDrop);
          put_bytes(out, m.from.bytes);
          put_bytes(out, m.to.bytes);
        }
      },
      msg);
  return out;
}

Message decode_message(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  const std::uint8_t tag = in.byte();
  if (tag != kRequest && tag != kResponse && tag != kDrop) throw ProtocolError("unknown message tag");
  NodeId from{in.bytes32()};
  NodeId to{in.bytes32()};
  Message msg;
  switch (tag) {
    case kRequest: {
      PeeringRequest req{from, to, Salt{in.bytes32(), SaltKind::Public}};
      req.updates_since_last = in.varint32();
      req.chain_generation = in.varint32();
      msg = req;
      break;
    }
    case kResponse: {
      const std::uint8_t flag = in.byte();
      if (flag > 1) throw ProtocolError("invalid accepted flag");
      msg = PeeringResponse{from, to, flag == 1};
      break;
    }
    case kDrop:
      msg = PeeringDrop{from, to};
      break;
    default:
      throw ProtocolError("unknown message tag");
  }
  in.expect_end();
  return msg;
}

}  // namespace autopeer
