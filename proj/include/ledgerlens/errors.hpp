// Copyright 2026 LedgerLens Authors
//
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

#ifndef LEDGERLENS_ERRORS_HPP
#define LEDGERLENS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ledgerlens {

/// Base class for all library errors so callers can catch everything at once.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionError : Error {
  using Error::Error;
};
struct SingularTransformError : Error {
  using Error::Error;
};
struct DegenerateQuadError : Error {
  using Error::Error;
};
struct NoFeaturesError : Error {
  using Error::Error;
};
struct InsufficientCorrespondencesError : Error {
  using Error::Error;
};
struct DegenerateConfigurationError : Error {
  using Error::Error;
};
struct HeaderNotFoundError : Error {
  using Error::Error;
};
struct SegmentationFailure : Error {
  using Error::Error;
};
struct BackendUnavailableError : Error {
  using Error::Error;
};
struct ProtocolError : Error {
  using Error::Error;
};
struct InvalidCharactersError : Error {
  using Error::Error;
};
struct InvalidIdentifierError : Error {
  using Error::Error;
};
struct SchemaError : Error {
  using Error::Error;
};
struct InsufficientDataError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct JoinError : Error {
  using Error::Error;
};
struct ParameterError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace ledgerlens

#endif  // LEDGERLENS_ERRORS_HPP
