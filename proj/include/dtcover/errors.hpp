#pragma once

#include <stdexcept>
#include <string>

namespace dtcover {

/// Base of every error thrown by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands live on different dual graphs (or different truncations).
class ContextError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A table lookup hit an in-range class with no stored value.
class MissingDataError : public Error {
public:
    using Error::Error;
};

/// A tree base case has no closed form and no user-supplied value.
class MissingBaseError : public Error {
public:
    using Error::Error;
};

/// The configuration is outside what the engine can evaluate.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Malformed input: bad graph, bad class, bad parabolic data.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Broken internal invariant (e.g. a reduction that fails to terminate).
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace dtcover
