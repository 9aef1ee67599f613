/*******************************************************************************
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*******************************************************************************/
#pragma once

#include <stdexcept>
#include <string>

namespace moutard {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An operation restricted to a specific dimension was called on another.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Two fields that must share a grid do not.
class GridMismatch : public Error {
public:
  using Error::Error;
};

/// A field that must be strictly positive has a nonpositive sample.
class PositivityError : public Error {
public:
  using Error::Error;
};

/// A coefficient q does not satisfy the conductivity-type compatibility
/// condition to tolerance.
class NotConductivityType : public Error {
public:
  using Error::Error;
};

/// Inputs violate a structural compatibility requirement (e.g. a potential
/// that must be imaginary-valued is not).
class CompatibilityError : public Error {
public:
  using Error::Error;
};

/// A Moutard potential omega vanishes at a grid point and singular mode was
/// not requested.
class SingularOmega : public Error {
public:
  using Error::Error;
};

/// Pointwise division by a field that vanishes at a grid point.
class ZeroDivisor : public Error {
public:
  using Error::Error;
};

/// An input fails a checked precondition (e.g. a field that must be harmonic
/// is not).
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// Residual inputs do not match the signature of the requested equation.
class SignatureError : public Error {
public:
  using Error::Error;
};

/// Expression or file could not be parsed.
class ParseError : public Error {
public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace moutard
