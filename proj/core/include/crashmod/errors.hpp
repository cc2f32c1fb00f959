#pragma once

#include <stdexcept>
#include <string>

#include "crashmod/bigint.hpp"

namespace crashmod {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Modulus outside a routine's domain (zero, one, even where odd required...).
class InvalidModulus : public Error {
 public:
  using Error::Error;
};

// A documented precondition does not hold (wrong residue shape, bad branch,
// malformed factorization and the like).
class Precondition : public Error {
 public:
  using Error::Error;
};

// Numeric argument outside its allowed range.
class ValueRange : public Error {
 public:
  using Error::Error;
};

// Thrown by modular inversion; carries the offending gcd.
class NotInvertible : public Error {
 public:
  NotInvertible(std::string what, Bigint gcd_value)
      : Error(std::move(what)), gcd(std::move(gcd_value)) {}
  Bigint gcd;
};

// Hensel lifting requires f'(x) invertible; the root was not simple.
class NonSimpleRoot : public Error {
 public:
  using Error::Error;
};

// A root set would exceed the enumeration limit; carries the exact count.
class RootOverflow : public Error {
 public:
  RootOverflow(std::string what, Bigint root_count)
      : Error(std::move(what)), count(std::move(root_count)) {}
  Bigint count;
};

// Malformed protocol message or field of the wrong size.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A randomized generator gave up after its retry limit.
class GenerationFailed : public Error {
 public:
  using Error::Error;
};

// More than one decrypted root parsed as a well-formed message.
class AmbiguousMatch : public Error {
 public:
  using Error::Error;
};

// Bad textual input (hex strings, CLI arguments, JSON fields).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace crashmod
