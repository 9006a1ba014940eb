//
// Copyright 2026 The Causal Span Tagger Authors
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
//

#include "causal/model_io.h"

#include <cmath>

#include "causal/errors.h"
#include "causal/text.h"
#include "json.hpp"

namespace causal {

namespace {

using Json = nlohmann::ordered_json;

Json Header(const char* type) {
  Json j;
  j["format"] = "causal-model";
  j["version"] = kModelFormatVersion;
  j["type"] = type;
  return j;
}

Json ParseContainer(std::string_view content, const char* type) {
  Json j;
  try {
    j = Json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model file is not JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "causal-model") {
    throw FormatError("not a causal-model container");
  }
  if (!j.contains("version") || !j["version"].is_number_integer()) {
    throw FormatError("model container without version");
  }
  int version = j["version"].get<int>();
  if (version != kModelFormatVersion) {
    throw VersionError("model version " + std::to_string(version) +
                       ", expected " + std::to_string(kModelFormatVersion));
  }
  if (j.value("type", "") != type) {
    throw FormatError("model type '" + j.value("type", "") + "', expected '" +
                      type + "'");
  }
  return j;
}

void CheckFinite(const std::vector<double>& values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw FormatError("non-finite weight in model");
  }
}

}  // namespace

std::string SerializeCrfModel(const CrfModel& model) {
  const CrfParams& p = model.params;
  Json j = Header("crf");
  j["hard_constraints"] = model.hard_constraints;
  j["labels"] = model.vocabulary.labels();
  j["features"] = model.features.names();
  j["dense_dim"] = p.dense_dim();
  j["emission_row_offsets"] = p.row_offsets();
  j["emission_labels"] = p.row_labels();
  j["weights"] = p.values();
  return j.dump() + "\n";
}

CrfModel ParseCrfModel(std::string_view content) {
  Json j = ParseContainer(content, "crf");
  CrfModel model;
  try {
    model.hard_constraints = j.at("hard_constraints").get<bool>();
    model.vocabulary =
        LabelVocabulary(j.at("labels").get<std::vector<std::string>>());
    model.features =
        FeatureMap::FromNames(j.at("features").get<std::vector<std::string>>());
    auto offsets = j.at("emission_row_offsets").get<std::vector<std::size_t>>();
    auto labels = j.at("emission_labels").get<std::vector<int>>();
    if (offsets.empty() || offsets.front() != 0 || offsets.back() != labels.size() ||
        offsets.size() != model.features.size() + 1) {
      throw FormatError("inconsistent emission layout");
    }
    std::vector<std::vector<int>> rows(model.features.size());
    for (std::size_t f = 0; f < rows.size(); ++f) {
      if (offsets[f + 1] < offsets[f]) throw FormatError("bad row offsets");
      rows[f].assign(labels.begin() + offsets[f], labels.begin() + offsets[f + 1]);
    }
    model.params = CrfParams::Sparse(
        std::move(rows), static_cast<int>(model.vocabulary.size()),
        j.at("dense_dim").get<int>());
    auto weights = j.at("weights").get<std::vector<double>>();
    if (weights.size() != model.params.size()) {
      throw FormatError("expected " + std::to_string(model.params.size()) +
                        " weights, found " + std::to_string(weights.size()));
    }
    CheckFinite(weights);
    model.params.values() = std::move(weights);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("crf model: ") + e.what());
  } catch (const UnknownLabel& e) {
    throw FormatError(e.what());
  }
  model.Finalize();
  return model;
}

std::string SerializeBinaryModel(const BinaryModel& model) {
  Json j = Header("binary");
  j["features"] = model.features.names();
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["feature_scale"] = model.feature_scale;
  return j.dump() + "\n";
}

BinaryModel ParseBinaryModel(std::string_view content) {
  Json j = ParseContainer(content, "binary");
  BinaryModel model;
  try {
    model.features =
        FeatureMap::FromNames(j.at("features").get<std::vector<std::string>>());
    model.weights = j.at("weights").get<std::vector<double>>();
    model.bias = j.at("bias").get<double>();
    model.feature_scale = j.at("feature_scale").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("binary model: ") + e.what());
  }
  if (model.weights.size() != model.features.size()) {
    throw FormatError("weight count does not match feature count");
  }
  CheckFinite(model.weights);
  return model;
}

void SaveCrfModel(const CrfModel& model, const std::string& path) {
  WriteFile(path, SerializeCrfModel(model));
}

CrfModel LoadCrfModel(const std::string& path) {
  return ParseCrfModel(ReadFile(path));
}

void SaveBinaryModel(const BinaryModel& model, const std::string& path) {
  WriteFile(path, SerializeBinaryModel(model));
}

BinaryModel LoadBinaryModel(const std::string& path) {
  return ParseBinaryModel(ReadFile(path));
}

}  // namespace causal
