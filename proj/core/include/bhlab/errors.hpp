#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bhlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPrime : public Error {
 public:
  explicit NotPrime(std::uint64_t value)
      : Error("not a prime: " + std::to_string(value)), value_(value) {}
  std::uint64_t value() const noexcept { return value_; }

 private:
  std::uint64_t value_;
};

/// Raised when a tuple cannot be brought into the strictly ordered form.
class OrderingImpossible : public Error {
 public:
  using Error::Error;
};

/// Raised when some prime p kills every residue class (nu_p == p).
class Inadmissible : public Error {
 public:
  explicit Inadmissible(std::uint64_t p)
      : Error("tuple is inadmissible: nu_p = p at p = " + std::to_string(p)),
        prime_(p) {}
  std::uint64_t prime() const noexcept { return prime_; }

 private:
  std::uint64_t prime_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ProfileInvalid : public Error {
 public:
  using Error::Error;
};

class KindMismatch : public Error {
 public:
  using Error::Error;
};

class RangeTooLarge : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace bhlab
