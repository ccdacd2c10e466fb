#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace indexcode {

// Base of every error the toolkit raises. Each subclass names one failure
// kind so callers (and the CLI) can map it to a message or exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedField : public Error {
 public:
  explicit UnsupportedField(int q)
      : Error("unsupported field size q=" + std::to_string(q)) {}
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class SelfInclusion : public Error {
 public:
  explicit SelfInclusion(int user)
      : Error("user " + std::to_string(user) + " has itself in its side information set"),
        user_(user) {}
  int user() const noexcept { return user_; }

 private:
  int user_;
};

class UnknownInstance : public Error {
 public:
  explicit UnknownInstance(const std::string& name) : Error("unknown instance '" + name + "'") {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotAcyclic : public Error {
 public:
  using Error::Error;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidBasis : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Raised when an exhaustive procedure hits its work cap. Carries whatever
// partial result the procedure had when it stopped.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string what, std::uint64_t nodes, int best_value = -1,
                 std::vector<int> best_witness = {})
      : Error(std::move(what)),
        nodes_(nodes),
        best_value_(best_value),
        best_witness_(std::move(best_witness)) {}

  std::uint64_t nodes() const noexcept { return nodes_; }
  int best_value() const noexcept { return best_value_; }
  const std::vector<int>& best_witness() const noexcept { return best_witness_; }

 private:
  std::uint64_t nodes_;
  int best_value_;
  std::vector<int> best_witness_;
};

}  // namespace indexcode
