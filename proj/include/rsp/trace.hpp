// Copyright 2026 The rsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Solver state, checkpoint records and ergodic averaging shared by every
// iterative method.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "rsp/perspective.hpp"

namespace rsp {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Primal and dual blocks. `u` and `omega` are flattened over (i, l) with l
// running fastest; for unsplit problems there is one u block per constraint
// and no omega blocks.
struct SaddleState {
  Vector x;
  std::vector<LiftedVar> u;
  Vector w;
  std::vector<OmegaPoint> omega;
  Vector pi;
};

struct Checkpoint {
  long iter = 0;
  double elapsed_s = 0.0;
  double obj = kNaN;
  double feas_gap = kNaN;
  double ogr = kNaN;
  double cert_bound = kNaN;
  Vector x;  // ergodic x in the caller's coordinates
};

struct IterTrace {
  std::string algorithm;
  std::vector<Checkpoint> checkpoints;
  Vector x_avg;         // final ergodic x in the caller's coordinates
  SaddleState last;     // final iterate
  SaddleState average;  // final ergodic state
  long iterations = 0;
  bool time_budget_exceeded = false;
  bool budget_exhausted = false;
  bool stopped_early = false;  // observer requested termination
};

// Fills obj / feas_gap / ogr for a checkpoint whose x is set. Returning true
// stops the run after this checkpoint.
using CheckpointObserver = std::function<bool(Checkpoint& cp)>;

enum class Averaging { Uniform, StepWeighted };

// Uniform: (1/N) sum x^k. StepWeighted: sum t_k x^k / sum t_k.
Vector ergodic_average(const std::vector<Vector>& iterates, ConstVec steps, Averaging mode);

// Running weighted mean.
class ErgodicAccumulator {
 public:
  void add(ConstVec v, double weight);
  Vector mean() const;
  double total_weight() const { return weight_; }
  bool empty() const { return weight_ <= 0.0; }

 private:
  Vector sum_;
  double weight_ = 0.0;
};

// CSV with header iter,elapsed_s,obj,feas_gap,ogr,cert_bound.
std::string trace_to_csv(const IterTrace& trace);

}  // namespace rsp
