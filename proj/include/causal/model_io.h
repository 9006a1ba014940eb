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

#ifndef CAUSAL_MODEL_IO_H_
#define CAUSAL_MODEL_IO_H_

#include <string>
#include <string_view>

#include "causal/classifier.h"
#include "causal/tagger.h"

namespace causal {

// JSON container shared by both model kinds:
//   {"format": "causal-model", "version": 1, "type": "crf" | "binary", ...}
inline constexpr int kModelFormatVersion = 1;

std::string SerializeCrfModel(const CrfModel& model);
// Throws VersionError for another container version and FormatError for a
// different record type or a damaged file.
CrfModel ParseCrfModel(std::string_view content);

std::string SerializeBinaryModel(const BinaryModel& model);
BinaryModel ParseBinaryModel(std::string_view content);

void SaveCrfModel(const CrfModel& model, const std::string& path);
CrfModel LoadCrfModel(const std::string& path);
void SaveBinaryModel(const BinaryModel& model, const std::string& path);
BinaryModel LoadBinaryModel(const std::string& path);

}  // namespace causal

#endif  // CAUSAL_MODEL_IO_H_
