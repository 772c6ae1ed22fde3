// Copyright 2026 The Balderdash Simulation Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace balderdash {

// Base class for everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data or configuration (maps to exit status 1).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An agent response that does not follow the requested output format.
class FormatError : public Error {
 public:
  using Error::Error;
};

class VoteFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

class JudgeFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

class DefinitionFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Network or protocol failure talking to a remote agent.
class TransportError : public Error {
 public:
  using Error::Error;
};

class AuthenticationError : public TransportError {
 public:
  using TransportError::TransportError;
};

class ScriptExhaustedError : public Error {
 public:
  using Error::Error;
};

// The judge could not produce a verdict after all retries.
class JudgeFailure : public Error {
 public:
  using Error::Error;
};

class StoreError : public Error {
 public:
  using Error::Error;
};

}  // namespace balderdash
