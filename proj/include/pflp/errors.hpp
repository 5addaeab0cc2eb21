#pragma once

#include <stdexcept>
#include <string>

#include "pflp/ids.hpp"

namespace pflp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected input: bad payload values, out-of-range coordinates, malformed files.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Unknown session, feature, or candidate.
class NotFound : public Error {
 public:
  NotFound(const std::string& what, std::uint32_t id) : Error(what), id_(id) {}
  std::uint32_t id() const { return id_; }

 private:
  std::uint32_t id_;
};

// Undo requested on an empty history.
class NothingToUndo : public Error {
 public:
  NothingToUndo() : Error("nothing to undo") {}
};

// Two candidates that must both be selected are in conflict.
class ConflictingPair : public Error {
 public:
  ConflictingPair(const std::string& what, CandidateId first, CandidateId second)
      : Error(what), first_(first), second_(second) {}

  CandidateId first() const { return first_; }
  CandidateId second() const { return second_; }

 private:
  CandidateId first_;
  CandidateId second_;
};

class FixationConflict : public ConflictingPair {
 public:
  FixationConflict(CandidateId a, CandidateId b)
      : ConflictingPair("fixated candidates " + std::to_string(a.value) + " and " +
                            std::to_string(b.value) + " are in conflict",
                        a, b) {}
};

class PresetConflict : public ConflictingPair {
 public:
  PresetConflict(CandidateId a, CandidateId b)
      : ConflictingPair("preset candidates " + std::to_string(a.value) + " and " +
                            std::to_string(b.value) + " are in conflict",
                        a, b) {}
};

}  // namespace pflp
