#pragma once

#include <stdexcept>
#include <string>

namespace spanlab {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed shape request (empty arity list, arity mismatch, non-monotone simplex map).
class ShapeSpecError : public Error {
public:
  using Error::Error;
};

/// A requested limit has no universal cone in the base category.
class NoLimitError : public Error {
public:
  using Error::Error;
};

/// An enumeration exceeded the configured ceiling.
class ResourceError : public Error {
public:
  using Error::Error;
};

/// Input data does not match the expected schema.
class SchemaError : public Error {
public:
  using Error::Error;
};

/// Two pieces of data that must agree (shared feet, labels, dimensions) do not.
class MismatchError : public Error {
public:
  using Error::Error;
};

class NotGroupoidError : public Error {
public:
  using Error::Error;
};

} // namespace spanlab
