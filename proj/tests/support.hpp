#pragma once

#include <cstdint>

#include "autopeer/identity.hpp"

namespace autopeer::test {

inline NodeId id_of(std::uint8_t fill) {
  NodeId id;
  id.bytes.fill(fill);
  return id;
}

inline Salt salt_of(std::uint8_t fill, SaltKind kind = SaltKind::Public) {
  Salt s{{}, kind};
  s.bytes.fill(fill);
  return s;
}

}  // namespace autopeer::test
