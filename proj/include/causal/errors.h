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

#ifndef CAUSAL_ERRORS_H_
#define CAUSAL_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace causal {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define CAUSAL_DEFINE_ERROR(Name)                                \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

class MalformedAnnotation : public Error {
 public:
  MalformedAnnotation(const std::string& what, std::size_t position)
      : Error("MalformedAnnotation at " + std::to_string(position) + ": " +
              what),
        position_(position) {}

  // Byte offset into the tagged string where the problem was detected.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

CAUSAL_DEFINE_ERROR(SpanAlignmentError);
CAUSAL_DEFINE_ERROR(IndexOutOfRange);
CAUSAL_DEFINE_ERROR(IoError);
CAUSAL_DEFINE_ERROR(FormatError);
CAUSAL_DEFINE_ERROR(ConsistencyError);
CAUSAL_DEFINE_ERROR(OverlapError);
CAUSAL_DEFINE_ERROR(TooManyRelations);
CAUSAL_DEFINE_ERROR(DimensionMismatch);
CAUSAL_DEFINE_ERROR(NoFeasiblePath);
CAUSAL_DEFINE_ERROR(UnknownLabel);
CAUSAL_DEFINE_ERROR(EmptyCorpus);
CAUSAL_DEFINE_ERROR(DivergenceError);
CAUSAL_DEFINE_ERROR(TruncatedFile);
CAUSAL_DEFINE_ERROR(VersionError);
CAUSAL_DEFINE_ERROR(SingleClassCorpus);
CAUSAL_DEFINE_ERROR(LengthMismatch);
CAUSAL_DEFINE_ERROR(NoMultiRelationInstances);
CAUSAL_DEFINE_ERROR(EmptyLexicon);
CAUSAL_DEFINE_ERROR(ConfigError);

#undef CAUSAL_DEFINE_ERROR

}  // namespace causal

#endif  // CAUSAL_ERRORS_H_
