// Copyright 2026 The EPike Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EPIKE_ERRORS_HPP
#define EPIKE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace epike {

// Base of every error raised by the engine. The C API maps each subclass
// onto one status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class MalformedConstraint : public Error {
 public:
  using Error::Error;
};

class MalformedFormula : public Error {
 public:
  using Error::Error;
};

class UnknownAgent : public Error {
 public:
  explicit UnknownAgent(const std::string& name)
      : Error("unknown agent '" + name + "'") {}
};

class UnknownWorld : public Error {
 public:
  explicit UnknownWorld(const std::string& id)
      : Error("unknown world '" + id + "'") {}
};

class UnknownTimePoint : public Error {
 public:
  explicit UnknownTimePoint(const std::string& id)
      : Error("unknown time point '" + id + "'") {}
};

class InapplicableAction : public Error {
 public:
  using Error::Error;
};

class RestrictedFormulaError : public Error {
 public:
  using Error::Error;
};

class InvalidLibrary : public Error {
 public:
  using Error::Error;
};

class InvalidScenario : public Error {
 public:
  using Error::Error;
};

class ObservationContradiction : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

}  // namespace epike

#endif  // EPIKE_ERRORS_HPP
