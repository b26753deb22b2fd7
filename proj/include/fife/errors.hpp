#pragma once

#include <stdexcept>
#include <string>

namespace fife {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degenerate tangents, singular tubes, orientation mismatches.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// An iteration (Newton, Barzilai-Borwein, linear solve) failed to converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A curve parameter left its admissible interval.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Mesh/interface topology problems: multi-cuts, tangencies, degenerate domains.
class MeshError : public Error {
public:
    using Error::Error;
};

/// Bad experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Global linear system could not be solved to tolerance.
class SolveError : public Error {
public:
    using Error::Error;
};

} // namespace fife
