#pragma once

#include <stdexcept>
#include <string>

namespace kpde {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A derivative was requested beyond the smoothness of a kernel.
class SmoothnessError : public Error {
public:
    using Error::Error;
};

/// Unsupported or inconsistent parameters (kernel spec, grid/stencil mismatch, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Repeated nodes make the moment system singular.
class SingularNodesError : public Error {
public:
    using Error::Error;
};

/// Least-squares error-model fit failed.
class FitError : public Error {
public:
    using Error::Error;
};

} // namespace kpde
