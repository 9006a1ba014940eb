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

#ifndef CAUSAL_ADAM_H_
#define CAUSAL_ADAM_H_

#include <cmath>
#include <cstddef>
#include <vector>

namespace causal {

// Adam with bias-corrected moments over a flat parameter vector.
class Adam {
 public:
  Adam(std::size_t size, double learning_rate, double beta1 = 0.9,
       double beta2 = 0.999, double epsilon = 1e-8)
      : lr_(learning_rate),
        beta1_(beta1),
        beta2_(beta2),
        eps_(epsilon),
        m_(size, 0.0),
        v_(size, 0.0) {}

  void Step(std::vector<double>& params, const std::vector<double>& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, t_);
    const double c2 = 1.0 - std::pow(beta2_, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
      double g = grad[i];
      m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
      v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g * g;
      params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
    }
  }

  long steps() const { return t_; }

 private:
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  long t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

}  // namespace causal

#endif  // CAUSAL_ADAM_H_
