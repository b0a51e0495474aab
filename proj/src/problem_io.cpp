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

#include <fstream>
#include <sstream>

#include "rsp/error.hpp"
#include "rsp/io.hpp"

namespace rsp {

using nlohmann::json;

namespace {

Vector vec_from(const json& j, const char* what) {
  require(j.is_array(), ErrorCode::IoError, std::string("expected array for ") + what);
  return j.get<Vector>();
}

}  // namespace

json set_to_json(const SetDescriptor& s) {
  json j;
  j["type"] = std::string(to_string(s.kind()));
  switch (s.kind()) {
    case SetKind::L2Ball:
    case SetKind::L1Ball:
    case SetKind::LinfBall:
      j["dim"] = s.dim();
      j["radius"] = s.radius();
      break;
    case SetKind::Box:
      j["lo"] = s.lo();
      j["hi"] = s.hi();
      break;
    case SetKind::Singleton:
      j["point"] = s.point();
      break;
    case SetKind::Intersection:
    case SetKind::Product: {
      json parts = json::array();
      for (const auto& p : s.parts()) parts.push_back(set_to_json(p));
      j["parts"] = parts;
      break;
    }
  }
  return j;
}

SetDescriptor set_from_json(const json& j) {
  require(j.is_object() && j.contains("type"), ErrorCode::IoError, "set needs a type");
  const std::string t = j.at("type").get<std::string>();
  auto ball_dim = [&] { return j.at("dim").get<std::size_t>(); };
  if (t == "l2") return SetDescriptor::l2_ball(ball_dim(), j.at("radius").get<double>());
  if (t == "l1") return SetDescriptor::l1_ball(ball_dim(), j.at("radius").get<double>());
  if (t == "linf") return SetDescriptor::linf_ball(ball_dim(), j.at("radius").get<double>());
  if (t == "box") return SetDescriptor::box(vec_from(j.at("lo"), "lo"), vec_from(j.at("hi"), "hi"));
  if (t == "singleton") return SetDescriptor::singleton(vec_from(j.at("point"), "point"));
  if (t == "intersection" || t == "product") {
    std::vector<SetDescriptor> parts;
    for (const auto& p : j.at("parts")) parts.push_back(set_from_json(p));
    return t == "product" ? SetDescriptor::product(std::move(parts))
                          : SetDescriptor::intersection(std::move(parts));
  }
  fail(ErrorCode::IoError, "unknown set type '" + t + "'");
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    rows.push_back(Vector(r.begin(), r.end()));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, std::size_t cols_if_empty) {
  require(j.is_array(), ErrorCode::IoError, "matrix must be an array of rows");
  if (j.empty()) return Matrix(0, cols_if_empty);
  std::vector<Vector> rows;
  for (const auto& r : j) rows.push_back(vec_from(r, "matrix row"));
  return Matrix::from_rows(rows);
}

json problem_to_json(const RobustProblem& p) {
  require(p.all_biaffine(), ErrorCode::NotBiaffine,
          "only biaffine problems can be serialized");
  json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "robust";
  j["n"] = p.n();
  j["m"] = p.m();
  j["r"] = p.r();
  j["c"] = p.c;
  j["A"] = matrix_to_json(p.eq_A);
  j["b"] = p.eq_b;
  j["domain"] = set_to_json(p.domain);
  json cons = json::array();
  for (const auto& c : p.constraints) {
    const auto& b = c.biaffine_data();
    json cj;
    cj["type"] = "biaffine";
    cj["Q"] = matrix_to_json(b.Q);
    cj["d"] = b.d;
    cj["q"] = b.q;
    cj["gamma"] = b.gamma;
    cj["zset"] = set_to_json(c.zset());
    cons.push_back(cj);
  }
  j["constraints"] = cons;
  return j;
}

RobustProblem problem_from_json(const json& j) {
  require(j.is_object() && j.value("schema", "") == std::string(kSchemaVersion),
          ErrorCode::IoError, "not an rsp-1 instance");
  require(j.value("kind", "robust") == "robust", ErrorCode::IoError,
          "instance is not a robust problem");
  try {
    RobustProblem p;
    p.c = vec_from(j.at("c"), "c");
    const std::size_t n = p.c.size();
    require(j.at("n").get<std::size_t>() == n, ErrorCode::DimensionMismatch,
            "n differs from length of c");
    p.domain = set_from_json(j.at("domain"));
    p.eq_b = vec_from(j.value("b", json::array()), "b");
    p.eq_A = matrix_from_json(j.value("A", json::array()), n);
    if (p.eq_b.empty()) p.eq_A = Matrix();
    for (const auto& cj : j.at("constraints")) {
      require(cj.value("type", "") == "biaffine", ErrorCode::IoError,
              "only biaffine constraints are stored in files");
      BiaffineConstraint b;
      b.d = vec_from(cj.at("d"), "d");
      b.q = vec_from(cj.at("q"), "q");
      b.Q = matrix_from_json(cj.at("Q"), b.q.size());
      b.gamma = cj.at("gamma").get<double>();
      p.constraints.push_back(Constraint::biaffine(std::move(b), set_from_json(cj.at("zset"))));
    }
    require(j.value("m", p.m()) == p.m() && j.value("r", p.r()) == p.r(),
            ErrorCode::DimensionMismatch, "declared m or r differs from data");
    return p;
  } catch (const json::exception& e) {
    fail(ErrorCode::IoError, std::string("malformed instance: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::IoError, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot write " + path);
  out << text;
  require(static_cast<bool>(out), ErrorCode::IoError, "write failed for " + path);
}

void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(1) + "\n");
}

}  // namespace rsp
