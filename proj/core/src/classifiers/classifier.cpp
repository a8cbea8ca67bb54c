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

#include "vibdiag/classifiers/classifier.hpp"

#include <string>

#include "json.hpp"
#include "vibdiag/error.hpp"

namespace vibdiag {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

template <typename Mat>
json matrix_to_json(const Mat& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

template <typename Mat>
Mat matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw Error(Errc::SchemaMismatch, "matrix payload size");
  }
  Mat m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json to_json(const TreeModel& m) {
  json nodes = json::array();
  for (const auto& n : m.nodes) {
    nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left},
                     {"right", n.right}, {"label", class_index(n.label)}});
  }
  return {{"schema", "vibdiag.tree/1"}, {"dim", m.dim}, {"nodes", std::move(nodes)}};
}

json to_json(const MlpModel& m) {
  return {{"schema", "vibdiag.mlp/1"},     {"w1", matrix_to_json(m.w1)},
          {"b1", vector_to_json(m.b1)},    {"w2", matrix_to_json(m.w2)},
          {"b2", vector_to_json(m.b2)},    {"loss_trace", m.loss_trace}};
}

json to_json(const SvmModel& m) {
  json machines = json::array();
  for (const auto& b : m.machines) {
    machines.push_back({{"positive", class_index(b.positive)},
                        {"negative", class_index(b.negative)},
                        {"support_vectors", matrix_to_json(b.support_vectors)},
                        {"alpha", b.alpha},
                        {"y", b.y},
                        {"bias", b.bias},
                        {"iterations", b.iterations},
                        {"converged", b.converged}});
  }
  return {{"schema", "vibdiag.svm/1"}, {"dim", m.dim},   {"gamma", m.gamma},
          {"c", m.c},                  {"machines", std::move(machines)}};
}

json to_json(const ScnModel& m) {
  return {{"schema", "vibdiag.scn/1"},         {"w", matrix_to_json(m.w)},
          {"b", vector_to_json(m.b)},          {"beta", matrix_to_json(m.beta)},
          {"residual_trace", m.residual_trace}, {"stop_reason", m.stop_reason}};
}

void expect_schema(const json& j, std::string_view schema) {
  if (j.at("schema").get<std::string>() != schema) {
    throw Error(Errc::SchemaMismatch, "expected " + std::string(schema));
  }
}

Model model_from_json(ClassifierKind kind, const json& j) {
  switch (kind) {
    case ClassifierKind::Tree: {
      expect_schema(j, "vibdiag.tree/1");
      TreeModel m;
      m.dim = j.at("dim").get<std::size_t>();
      for (const auto& n : j.at("nodes")) {
        m.nodes.push_back({n.at("feature").get<int>(), n.at("threshold").get<double>(),
                           n.at("left").get<int>(), n.at("right").get<int>(),
                           class_from_index(n.at("label").get<int>())});
      }
      const auto count = static_cast<int>(m.nodes.size());
      for (const auto& n : m.nodes) {
        if (!n.is_leaf() && (n.feature >= static_cast<int>(m.dim) || n.left <= 0 ||
                             n.right <= 0 || n.left >= count || n.right >= count)) {
          throw Error(Errc::SchemaMismatch, "tree node references out of range");
        }
      }
      return m;
    }
    case ClassifierKind::Bp: {
      expect_schema(j, "vibdiag.mlp/1");
      MlpModel m;
      m.w1 = matrix_from_json<Eigen::MatrixXd>(j.at("w1"));
      m.b1 = vector_from_json(j.at("b1"));
      m.w2 = matrix_from_json<Eigen::MatrixXd>(j.at("w2"));
      m.b2 = vector_from_json(j.at("b2"));
      m.loss_trace = j.at("loss_trace").get<std::vector<double>>();
      if (m.b1.size() != m.w1.rows() || m.w2.cols() != m.w1.rows() ||
          m.w2.rows() != kNumClasses || m.b2.size() != kNumClasses) {
        throw Error(Errc::SchemaMismatch, "mlp weight shapes");
      }
      return m;
    }
    case ClassifierKind::Svm: {
      expect_schema(j, "vibdiag.svm/1");
      SvmModel m;
      m.dim = j.at("dim").get<std::size_t>();
      m.gamma = j.at("gamma").get<double>();
      m.c = j.at("c").get<double>();
      for (const auto& b : j.at("machines")) {
        BinarySvm machine;
        machine.positive = class_from_index(b.at("positive").get<int>());
        machine.negative = class_from_index(b.at("negative").get<int>());
        machine.support_vectors = matrix_from_json<FeatureMatrix>(b.at("support_vectors"));
        machine.alpha = b.at("alpha").get<std::vector<double>>();
        machine.y = b.at("y").get<std::vector<int>>();
        machine.bias = b.at("bias").get<double>();
        machine.iterations = b.at("iterations").get<std::int64_t>();
        machine.converged = b.at("converged").get<bool>();
        m.machines.push_back(std::move(machine));
      }
      return m;
    }
    case ClassifierKind::Scn: {
      expect_schema(j, "vibdiag.scn/1");
      ScnModel m;
      m.w = matrix_from_json<Eigen::MatrixXd>(j.at("w"));
      m.b = vector_from_json(j.at("b"));
      m.beta = matrix_from_json<Eigen::MatrixXd>(j.at("beta"));
      m.residual_trace = j.at("residual_trace").get<std::vector<double>>();
      m.stop_reason = j.at("stop_reason").get<std::string>();
      return m;
    }
  }
  throw Error(Errc::SchemaMismatch, "unknown classifier kind");
}

}  // namespace

std::string_view classifier_name(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::Tree: return "tree";
    case ClassifierKind::Bp: return "bp";
    case ClassifierKind::Svm: return "svm";
    case ClassifierKind::Scn: return "scn";
  }
  return "tree";
}

std::string_view classifier_title(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::Tree: return "Decision Tree";
    case ClassifierKind::Bp: return "BP-Neural network";
    case ClassifierKind::Svm: return "SVM";
    case ClassifierKind::Scn: return "SCN";
  }
  return "";
}

ClassifierKind parse_classifier(std::string_view name) {
  for (auto kind : kAllClassifiers) {
    if (classifier_name(kind) == name) return kind;
  }
  throw Error(Errc::InvalidConfig, "unknown classifier '" + std::string(name) + "'");
}

std::size_t model_dim(const Model& model) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        if constexpr (requires { m.dim(); }) {
          return m.dim();
        } else {
          return m.dim;
        }
      },
      model);
}

FaultClass predict(const Model& model, std::span<const double> features) {
  return std::visit([&](const auto& m) { return m.predict(features); }, model);
}

FaultClass TrainedClassifier::predict(std::span<const double> features) const {
  if (features.size() != dim()) {
    throw Error(Errc::DimMismatch, "expected " + std::to_string(dim()) + " features, got " +
                std::to_string(features.size()));
  }
  if (scaler) return vibdiag::predict(model, scaler->apply(features));
  return vibdiag::predict(model, features);
}

TrainedClassifier train_classifier(ClassifierKind kind, const Dataset& train,
                                   const ClassifierSettings& settings, std::uint64_t seed) {
  train.validate();
  TrainedClassifier out;
  out.kind = kind;
  Dataset scaled;
  const Dataset* input = &train;
  if (needs_standardization(kind)) {
    out.scaler = kind == ClassifierKind::Scn && settings.scn_inputs == InputScaling::MinMax
                     ? Standardizer::fit_min_max(train)
                     : Standardizer::fit(train);
    scaled = out.scaler->apply(train);
    input = &scaled;
  }
  switch (kind) {
    case ClassifierKind::Tree:
      out.model = train_tree(*input, settings.tree);
      break;
    case ClassifierKind::Bp: {
      MlpConfig cfg = settings.bp;
      cfg.seed = seed;
      out.model = train_bp(*input, cfg);
      break;
    }
    case ClassifierKind::Svm:
      out.model = train_svm(*input, settings.svm);
      break;
    case ClassifierKind::Scn: {
      ScnConfig cfg = settings.scn;
      cfg.seed = seed;
      out.model = train_scn(*input, cfg);
      break;
    }
  }
  return out;
}

std::string serialize_classifier(const TrainedClassifier& clf) {
  json j;
  j["schema"] = "vibdiag.classifier";
  j["version"] = kFormatVersion;
  j["kind"] = std::string(classifier_name(clf.kind));
  if (clf.scaler) {
    j["scaler"] = {{"mean", std::vector<double>(clf.scaler->mean.data(),
                                                clf.scaler->mean.data() + clf.scaler->mean.size())},
                   {"scale", std::vector<double>(clf.scaler->scale.data(),
                                                 clf.scaler->scale.data() + clf.scaler->scale.size())}};
  } else {
    j["scaler"] = nullptr;
  }
  j["model"] = std::visit([](const auto& m) { return to_json(m); }, clf.model);
  return j.dump(1);
}

TrainedClassifier deserialize_classifier(std::string_view json_text) {
  try {
    const json j = json::parse(json_text);
    if (j.at("schema").get<std::string>() != "vibdiag.classifier" ||
        j.at("version").get<int>() != kFormatVersion) {
      throw Error(Errc::SchemaMismatch, "not a vibdiag classifier v1 document");
    }
    TrainedClassifier out;
    out.kind = parse_classifier(j.at("kind").get<std::string>());
    if (!j.at("scaler").is_null()) {
      const auto mean = j["scaler"].at("mean").get<std::vector<double>>();
      const auto scale = j["scaler"].at("scale").get<std::vector<double>>();
      if (mean.size() != scale.size()) throw Error(Errc::SchemaMismatch, "scaler sizes");
      Standardizer s;
      s.mean = Eigen::Map<const Eigen::RowVectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
      s.scale = Eigen::Map<const Eigen::RowVectorXd>(scale.data(), static_cast<Eigen::Index>(scale.size()));
      out.scaler = std::move(s);
    }
    out.model = model_from_json(out.kind, j.at("model"));
    if (out.scaler && static_cast<std::size_t>(out.scaler->mean.size()) != out.dim()) {
      throw Error(Errc::SchemaMismatch, "scaler dim differs from model dim");
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaMismatch, e.what());
  }
}

}  // namespace vibdiag
