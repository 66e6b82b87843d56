#pragma once

#include <stdexcept>
#include <string>

namespace resona1d {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a frequency lands on an excluded point of an operator's domain.
/// Root finders treat these as off-domain evaluations and step around them.
class DomainError : public Error {
public:
    using Error::Error;
};

/// k is (numerically) of the form m*pi/ell for a gap of length ell.
class SingularGap : public DomainError {
public:
    using DomainError::DomainError;
};

/// omega + n*Omega vanishes for a retained Fourier mode n.
class ResonantModeCollision : public DomainError {
public:
    using DomainError::DomainError;
};

class EigenFailure : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class DegenerateParabola : public Error {
public:
    using Error::Error;
};

class IntegrationFailure : public Error {
public:
    using Error::Error;
};

class MixedAmplitudes : public Error {
public:
    using Error::Error;
};

class NotDegenerate : public Error {
public:
    using Error::Error;
};

/// The static first-order operator has a zero frequency (Jordan block) and
/// cannot be diagonalised.
class DefectiveStaticOperator : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace resona1d
