// Copyright 2026 The vibdiag Authors. All rights reserved.
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vibdiag {

enum class Errc {
  UnparseableFilename,
  MalformedLine,
  EmptyFile,
  InvalidConfig,
  SignalTooShort,
  NonFiniteInput,
  TooShort,
  FrameTooShortForTerms,
  SingularNormalEquations,
  NonFiniteResidual,
  WindowMismatch,
  EmptyDataset,
  DivergedLoss,
  SingleClass,
  NoAcceptableCandidate,
  DimMismatch,
  ClassTooSmall,
  SchemaMismatch,
  Io,
};

std::string_view errc_name(Errc code) noexcept;

// All library failures are reported as vibdiag::Error. `line()` is set for
// MalformedLine (1-based) and zero otherwise.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::size_t line = 0);

  Errc code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  Errc code_;
  std::size_t line_;
};

}  // namespace vibdiag
