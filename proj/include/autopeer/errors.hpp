#pragma once

#include <stdexcept>
#include <string>

namespace autopeer {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A function argument lies outside its documented domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The public-salt hash chain has no earlier element left to reveal.
class ChainExhausted : public Error {
 public:
  ChainExhausted() : Error("hash chain exhausted") {}
};

/// The verifier declines to hash more than its configured cap.
class VerificationRefused : public Error {
 public:
  using Error::Error;
};

/// A score was requested between a node and itself.
class SelfScore : public Error {
 public:
  SelfScore() : Error("score between a node and itself is undefined") {}
};

/// Malformed or inconsistent protocol message.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Simulation or attack configuration failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace autopeer
