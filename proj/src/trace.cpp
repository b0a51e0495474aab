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

#include "rsp/trace.hpp"

#include <cstdio>

#include "rsp/error.hpp"

namespace rsp {

Vector ergodic_average(const std::vector<Vector>& iterates, ConstVec steps, Averaging mode) {
  require(!iterates.empty(), ErrorCode::InvalidArgument, "no iterates to average");
  if (mode == Averaging::StepWeighted)
    require(steps.size() == iterates.size(), ErrorCode::DimensionMismatch,
            "one step per iterate");
  ErgodicAccumulator acc;
  for (std::size_t k = 0; k < iterates.size(); ++k)
    acc.add(iterates[k], mode == Averaging::Uniform ? 1.0 : steps[k]);
  return acc.mean();
}

void ErgodicAccumulator::add(ConstVec v, double weight) {
  if (sum_.empty()) sum_.assign(v.size(), 0.0);
  require(sum_.size() == v.size(), ErrorCode::DimensionMismatch, "accumulator dimension");
  axpy(weight, v, sum_);
  weight_ += weight;
}

Vector ErgodicAccumulator::mean() const {
  if (weight_ <= 0.0) return sum_;
  return scaled(1.0 / weight_, sum_);
}

namespace {

void put(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::string trace_to_csv(const IterTrace& trace) {
  std::string out = "iter,elapsed_s,obj,feas_gap,ogr,cert_bound\n";
  for (const auto& cp : trace.checkpoints) {
    out += std::to_string(cp.iter);
    for (double v : {cp.elapsed_s, cp.obj, cp.feas_gap, cp.ogr, cp.cert_bound}) {
      out += ',';
      put(out, v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace rsp
