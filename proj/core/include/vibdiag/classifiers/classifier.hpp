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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "vibdiag/classifiers/mlp.hpp"
#include "vibdiag/classifiers/scn.hpp"
#include "vibdiag/classifiers/svm.hpp"
#include "vibdiag/classifiers/tree.hpp"
#include "vibdiag/dataset.hpp"

namespace vibdiag {

enum class ClassifierKind { Tree, Bp, Svm, Scn };

inline constexpr std::array<ClassifierKind, 4> kAllClassifiers = {
    ClassifierKind::Tree, ClassifierKind::Bp, ClassifierKind::Svm, ClassifierKind::Scn};

std::string_view classifier_name(ClassifierKind kind) noexcept;  // "tree", "bp", "svm", "scn"
std::string_view classifier_title(ClassifierKind kind) noexcept;  // table heading
ClassifierKind parse_classifier(std::string_view name);

// Threshold splits are scale-invariant; every other learner gets scaled inputs.
constexpr bool needs_standardization(ClassifierKind kind) noexcept {
  return kind != ClassifierKind::Tree;
}

enum class InputScaling { ZScore, MinMax };

struct ClassifierSettings {
  // bp and svm always use z-scores; scn inputs default to the [0, 1] range
  // its weight scales are calibrated for.
  InputScaling scn_inputs = InputScaling::MinMax;
  TreeConfig tree;
  MlpConfig bp;
  SvmConfig svm;
  ScnConfig scn;
};

using Model = std::variant<TreeModel, MlpModel, SvmModel, ScnModel>;

std::size_t model_dim(const Model& model);
FaultClass predict(const Model& model, std::span<const double> features);

// A trained model plus the standardization fitted on its training data.
struct TrainedClassifier {
  ClassifierKind kind = ClassifierKind::Tree;
  std::optional<Standardizer> scaler;
  Model model;

  std::size_t dim() const { return model_dim(model); }
  FaultClass predict(std::span<const double> features) const;
};

// Fits the scaler (when the kind needs one) and the model on `train` only.
// `seed` replaces the seeds in `settings` for the stochastic learners.
TrainedClassifier train_classifier(ClassifierKind kind, const Dataset& train,
                                   const ClassifierSettings& settings, std::uint64_t seed);

// Versioned JSON; doubles are written with round-trip precision.
std::string serialize_classifier(const TrainedClassifier& clf);
TrainedClassifier deserialize_classifier(std::string_view json_text);

}  // namespace vibdiag
