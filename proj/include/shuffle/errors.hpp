#pragma once

#include <stdexcept>
#include <string>

namespace shuffle {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value (plaintext, scalar, key size, ...) outside its declared domain.
class RangeError : public Error {
 public:
  using Error::Error;
};

// An operation mixed ciphertexts or keys of different cryptosystem instances.
class InstanceMismatchError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration (key-size relation, blinding-range constraint, ...).
// Raised before any keys are generated.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed, truncated, unexpected or duplicated message material.
class MessageError : public Error {
 public:
  using Error::Error;
};

// A participant was driven outside its legal phase order.
class StateError : public Error {
 public:
  using Error::Error;
};

// The decrypted index-randomness values are not pairwise distinct.
class DuplicateRandomValueError : public Error {
 public:
  using Error::Error;
};

// Two distinct index-randomness values hashed to the same digest.
class HashCollisionError : public Error {
 public:
  using Error::Error;
};

// A player's own randomness is missing from the received list.
class MissingSelfValueError : public Error {
 public:
  using Error::Error;
};

enum class AbortReason {
  duplicate_random_value,
  hash_collision,
  missing_self_value,
  bad_message,
};

// Raised by the protocol runner when a run cannot complete. Carries the
// step label at which the abort happened so callers can report it.
class ProtocolAbort : public Error {
 public:
  ProtocolAbort(std::string step, AbortReason reason, const std::string& what)
      : Error(what), step_(std::move(step)), reason_(reason) {}

  const std::string& step() const { return step_; }
  AbortReason reason() const { return reason_; }

 private:
  std::string step_;
  AbortReason reason_;
};

}  // namespace shuffle
