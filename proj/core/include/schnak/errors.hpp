// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_ERRORS_HPP
#define SCHNAK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace schnak
{

// Bad user input: sizes, parameter ranges, non-nested grids.
class InvalidArgument : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// A function produced or received a non-finite value.
class NumericDomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

// Iterative or direct solver could not proceed (singular matrix, indefinite
// preconditioner, failed factorization).
class SolverError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Time integration blew up.
class DivergedError : public std::runtime_error
{
public:
  DivergedError(const std::string &what, long step) : std::runtime_error(what), step_(step) {}
  long step() const noexcept { return step_; }

private:
  long step_;
};

}  // namespace schnak

#endif  // SCHNAK_ERRORS_HPP
