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

#include "vibdiag/error.hpp"

namespace vibdiag {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::UnparseableFilename: return "UnparseableFilename";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::SignalTooShort: return "SignalTooShort";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::TooShort: return "TooShort";
    case Errc::FrameTooShortForTerms: return "FrameTooShortForTerms";
    case Errc::SingularNormalEquations: return "SingularNormalEquations";
    case Errc::NonFiniteResidual: return "NonFiniteResidual";
    case Errc::WindowMismatch: return "WindowMismatch";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::DivergedLoss: return "DivergedLoss";
    case Errc::SingleClass: return "SingleClass";
    case Errc::NoAcceptableCandidate: return "NoAcceptableCandidate";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::ClassTooSmall: return "ClassTooSmall";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what, std::size_t line)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what),
      code_(code),
      line_(line) {}

}  // namespace vibdiag
