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

// JSON encodings of matrices, subspaces and polarizations, and the canonical
// writer used for reports (insertion-ordered keys, 17 significant digits).

#ifndef OPCROSS_JSON_IO_HPP
#define OPCROSS_JSON_IO_HPP

#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "json.hpp"
#include "opcross/grassmann.hpp"
#include "opcross/numerics.hpp"

namespace opcross {

using Json = nlohmann::ordered_json;

/// Largest matrix accepted from input files, per dimension.
inline constexpr Eigen::Index kMaxInputDim = 512;

/// {"rows": n, "cols": m, "data": [[row], ...]} or a bare array of rows.
/// Complex entries ([re, im] pairs) are rejected unless im == 0.
Eigen::MatrixXd matrix_from_json(const Json& j, std::string_view what);
Eigen::MatrixXcd complex_matrix_from_json(const Json& j, std::string_view what);

Json matrix_to_json(const Eigen::MatrixXd& m);
Json matrix_to_json(const Eigen::MatrixXcd& m);

/// {"ambient": n, "dim": k, "basis": Matrix}. The basis need only span the
/// subspace; it is orthonormalized on decoding.
Subspace<double> subspace_from_json(const Json& j, std::string_view what);
Json subspace_to_json(const Subspace<double>& w);

/// {"horizontal": Subspace, "vertical": Subspace}.
Polarization<double> polarization_from_json(const Json& j, std::string_view what);
Json polarization_to_json(const Polarization<double>& pol);

/// Eigenvalues as [re, im] pairs.
Json spectrum_to_json(const Spectrum<double>& s);

/// Object/array/number accessors that throw Validation with a named path.
const Json& require_field(const Json& obj, std::string_view key, std::string_view what);
double require_number(const Json& j, std::string_view what);
long long require_integer(const Json& j, std::string_view what);

/// Serializes with keys in insertion order and every floating-point value
/// printed with 17 significant digits, so equal documents give equal bytes.
std::string dump_canonical(const Json& j);

/// "%.17g"; the number format shared by JSON and CSV output.
std::string format_double(double v);

}  // namespace opcross

#endif  // OPCROSS_JSON_IO_HPP
