#pragma once

#include <stdexcept>
#include <string>

namespace statmech {

//! Base class of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

//! An argument lies outside the domain of the operation.
class DomainError : public Error
{
public:
    using Error::Error;
};

//! Input arrays have inconsistent shapes or violate a convexity/shape contract.
class ShapeError : public Error
{
public:
    using Error::Error;
};

//! A problem is too large for exhaustive treatment.
class SizeError : public Error
{
public:
    using Error::Error;
};

//! A root finder, optimizer, quadrature or integrator failed to converge.
class ConvergenceError : public Error
{
public:
    using Error::Error;
};

//! Probabilities that should sum to one do not.
class NormalizationError : public DomainError
{
public:
    using DomainError::DomainError;
};

} // namespace statmech
