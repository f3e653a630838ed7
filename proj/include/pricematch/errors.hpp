#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The pricematch Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pricematch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text; carries the 1-based line number.
class ParseError : public Error
{
public:
  ParseError(std::size_t line, std::string const &what)
    : Error("line " + std::to_string(line) + ": " + what)
    , line_(line)
  {}

  std::size_t line() const noexcept
  {
    return line_;
  }

private:
  std::size_t line_;
};

/// An edge set, state or matching was combined with a graph it does not belong to.
class OwnerMismatch : public Error
{
public:
  OwnerMismatch()
    : Error("edge set belongs to a different graph")
  {}
};

/// Invalid argument to an operation (unknown vertex, bad partition, ...).
class InvalidArgument : public Error
{
public:
  using Error::Error;
};

/// An exact solver or enumerator was asked to run outside its configured size cap.
class CapExceeded : public Error
{
public:
  CapExceeded(std::string const &what, std::size_t actual, std::size_t cap)
    : Error(what + ": size " + std::to_string(actual) + " exceeds cap " + std::to_string(cap))
  {}
};

/// A structural property guaranteed by the theory did not hold. Always a bug.
class InternalError : public Error
{
public:
  using Error::Error;
};

}  // namespace pricematch
