// Copyright 2026 The povm-forge Authors
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

#include "povm/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace povm::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) parse_error(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

double number(const json& j) {
  if (!j.is_number()) parse_error("expected a number");
  return j.get<double>();
}

}  // namespace

json to_json(const CMatrix<double>& m) {
  json re = json::array();
  json im = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json rr = json::array();
    json ri = json::array();
    for (Index k = 0; k < m.cols(); ++k) {
      rr.push_back(m(i, k).real());
      ri.push_back(m(i, k).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

CMatrix<double> matrix_from_json(const json& j, Index dim) {
  const json& re = field(j, "re");
  const json& im = field(j, "im");
  auto shape_ok = [dim](const json& a) {
    if (!a.is_array() || static_cast<Index>(a.size()) != dim) return false;
    for (const auto& row : a) {
      if (!row.is_array() || static_cast<Index>(row.size()) != dim) return false;
    }
    return true;
  };
  if (!shape_ok(re) || !shape_ok(im)) {
    parse_error("effect is not " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  CMatrix<double> m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    for (Index k = 0; k < dim; ++k) {
      m(i, k) = {number(re[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]),
                 number(im[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)])};
    }
  }
  return m;
}

json to_json(const Povm<double>& p) {
  json effects = json::array();
  for (const auto& e : p) effects.push_back(to_json(e));
  return json{{"dim", p.dim()}, {"effects", std::move(effects)}};
}

Povm<double> povm_from_json(const json& j) {
  const json& dim_field = field(j, "dim");
  if (!dim_field.is_number_integer() || dim_field.get<long long>() < 1) {
    parse_error("\"dim\" must be a positive integer");
  }
  const Index dim = dim_field.get<Index>();
  const json& effects = field(j, "effects");
  if (!effects.is_array() || effects.empty()) parse_error("\"effects\" must be a non-empty array");
  std::vector<CMatrix<double>> out;
  for (const auto& e : effects) out.push_back(matrix_from_json(e, dim));
  return Povm<double>(dim, std::move(out));
}

json to_json(const DecompositionCertificate<double>& c) {
  json comps = json::array();
  for (const auto& comp : c.components) {
    json relabel = json::array();
    for (std::size_t k : comp.relabel.indices()) relabel.push_back(k + 1);
    comps.push_back(json{{"weight", comp.weight},
                         {"extremal", to_json(comp.extremal)},
                         {"relabel", std::move(relabel)}});
  }
  return json{{"target", to_json(c.target)}, {"components", std::move(comps)}};
}

DecompositionCertificate<double> certificate_from_json(const json& j) {
  DecompositionCertificate<double> c;
  c.target = povm_from_json(field(j, "target"));
  const json& comps = field(j, "components");
  if (!comps.is_array()) parse_error("\"components\" must be an array");
  for (const auto& comp : comps) {
    Component<double> out;
    out.weight = number(field(comp, "weight"));
    out.extremal = povm_from_json(field(comp, "extremal"));
    const json& relabel = field(comp, "relabel");
    if (!relabel.is_array() || relabel.size() != out.extremal.size()) {
      parse_error("\"relabel\" must list one target per component outcome");
    }
    std::vector<std::size_t> map;
    for (const auto& v : relabel) {
      if (!v.is_number_integer() || v.get<long long>() < 1 ||
          v.get<std::size_t>() > c.target.size()) {
        parse_error("relabel entries must lie in [1, N]");
      }
      map.push_back(v.get<std::size_t>() - 1);
    }
    out.relabel = RelabelMap(std::move(map), c.target.size());
    c.components.push_back(std::move(out));
  }
  return c;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

Povm<double> read_povm(const std::filesystem::path& path) {
  try {
    return povm_from_json(read_json(path));
  } catch (const json::exception& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

DecompositionCertificate<double> read_certificate(const std::filesystem::path& path) {
  try {
    return certificate_from_json(read_json(path));
  } catch (const json::exception& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

std::string format_matrix(const CMatrix<double>& m, const std::string& indent) {
  const bool complex = m.imag().cwiseAbs().maxCoeff() > 0.0;
  std::ostringstream os;
  os << std::setprecision(6);
  for (Index i = 0; i < m.rows(); ++i) {
    os << indent << "[";
    for (Index k = 0; k < m.cols(); ++k) {
      if (k) os << ", ";
      const auto z = m(i, k);
      if (complex) {
        os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
      } else {
        os << z.real();
      }
    }
    os << "]\n";
  }
  return os.str();
}

}  // namespace povm::io
