// Copyright 2026 The opcross Authors.
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

#include "opcross/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "opcross/error.hpp"

namespace opcross {

namespace {

std::string name(std::string_view what) { return std::string(what); }

template <typename Scalar>
Scalar entry_from_json(const Json& e, std::string_view what);

template <>
double entry_from_json<double>(const Json& e, std::string_view what) {
  if (e.is_array()) {
    require(e.size() == 2 && e[0].is_number() && e[1].is_number(), ErrorKind::Validation,
            name(what) + ": complex entries must be [re, im] pairs");
    require(e[1].get<double>() == 0.0, ErrorKind::Validation, name(what) + ": complex entry in a real matrix");
    return require_number(e[0], what);
  }
  return require_number(e, what);
}

template <>
std::complex<double> entry_from_json<std::complex<double>>(const Json& e, std::string_view what) {
  if (e.is_array()) {
    require(e.size() == 2, ErrorKind::Validation, name(what) + ": complex entries must be [re, im] pairs");
    return {require_number(e[0], what), require_number(e[1], what)};
  }
  return {require_number(e, what), 0.0};
}

template <typename Scalar>
Mat<Scalar> decode_matrix(const Json& j, std::string_view what) {
  const Json* rows_json = &j;
  long long rows = 0, cols = 0;
  const bool declared = j.is_object();
  if (declared) {
    rows = require_integer(require_field(j, "rows", what), name(what) + ".rows");
    cols = require_integer(require_field(j, "cols", what), name(what) + ".cols");
    rows_json = &require_field(j, "data", what);
  }
  require(rows_json->is_array() && !rows_json->empty(), ErrorKind::Validation,
          name(what) + ": matrix data must be a non-empty array of rows");
  if (!declared) {
    rows = static_cast<long long>(rows_json->size());
    require((*rows_json)[0].is_array(), ErrorKind::Validation, name(what) + ": matrix rows must be arrays");
    cols = static_cast<long long>((*rows_json)[0].size());
  }
  require(rows >= 1 && cols >= 1 && rows <= kMaxInputDim && cols <= kMaxInputDim, ErrorKind::Validation,
          name(what) + ": matrix dimensions out of range");
  require(static_cast<long long>(rows_json->size()) == rows, ErrorKind::Validation,
          name(what) + ": row count differs from 'rows'");
  Mat<Scalar> m(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    const Json& row = (*rows_json)[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<long long>(row.size()) == cols, ErrorKind::Validation,
            name(what) + ": row " + std::to_string(i) + " does not have " + std::to_string(cols) + " entries");
    for (long long c = 0; c < cols; ++c) m(i, c) = entry_from_json<Scalar>(row[static_cast<std::size_t>(c)], what);
  }
  return m;
}

void dump_into(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out.push_back('{');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out.push_back(',');
        first = false;
        out += Json(it.key()).dump();
        out.push_back(':');
        dump_into(it.value(), out);
      }
      out.push_back('}');
      break;
    }
    case Json::value_t::array: {
      out.push_back('[');
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out.push_back(',');
        dump_into(j[i], out);
      }
      out.push_back(']');
      break;
    }
    case Json::value_t::number_float: out += format_double(j.get<double>()); break;
    default: out += j.dump(); break;
  }
}

}  // namespace

const Json& require_field(const Json& obj, std::string_view key, std::string_view what) {
  require(obj.is_object(), ErrorKind::Validation, name(what) + " must be a JSON object");
  const auto it = obj.find(std::string(key));
  require(it != obj.end(), ErrorKind::Validation, name(what) + ": missing field '" + std::string(key) + "'");
  return *it;
}

double require_number(const Json& j, std::string_view what) {
  require(j.is_number(), ErrorKind::Validation, name(what) + ": expected a number");
  const double v = j.get<double>();
  require(std::isfinite(v), ErrorKind::Validation, name(what) + ": number is not finite");
  return v;
}

long long require_integer(const Json& j, std::string_view what) {
  require(j.is_number_integer(), ErrorKind::Validation, name(what) + ": expected an integer");
  return j.get<long long>();
}

Eigen::MatrixXd matrix_from_json(const Json& j, std::string_view what) { return decode_matrix<double>(j, what); }

Eigen::MatrixXcd complex_matrix_from_json(const Json& j, std::string_view what) {
  return decode_matrix<std::complex<double>>(j, what);
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    data.push_back(std::move(row));
  }
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::move(data);
  return j;
}

Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(i, c).real(), m(i, c).imag()}));
    data.push_back(std::move(row));
  }
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::move(data);
  return j;
}

Subspace<double> subspace_from_json(const Json& j, std::string_view what) {
  const long long ambient = require_integer(require_field(j, "ambient", what), name(what) + ".ambient");
  const long long dim = require_integer(require_field(j, "dim", what), name(what) + ".dim");
  const Eigen::MatrixXd basis = matrix_from_json(require_field(j, "basis", what), name(what) + ".basis");
  require(basis.rows() == ambient && basis.cols() == dim, ErrorKind::Validation,
          name(what) + ": basis shape disagrees with ambient/dim");
  return Subspace<double>::span(basis);
}

Json subspace_to_json(const Subspace<double>& w) {
  Json j;
  j["ambient"] = w.ambient_dim();
  j["dim"] = w.dim();
  j["basis"] = matrix_to_json(w.basis());
  return j;
}

Polarization<double> polarization_from_json(const Json& j, std::string_view what) {
  return Polarization<double>::make(subspace_from_json(require_field(j, "horizontal", what), name(what) + ".horizontal"),
                                    subspace_from_json(require_field(j, "vertical", what), name(what) + ".vertical"));
}

Json polarization_to_json(const Polarization<double>& pol) {
  Json j;
  j["horizontal"] = subspace_to_json(pol.horizontal());
  j["vertical"] = subspace_to_json(pol.vertical());
  return j;
}

Json spectrum_to_json(const Spectrum<double>& s) {
  Json j = Json::array();
  for (const auto& z : s) j.push_back(Json::array({z.real(), z.imag()}));
  return j;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_canonical(const Json& j) {
  std::string out;
  dump_into(j, out);
  return out;
}

}  // namespace opcross
