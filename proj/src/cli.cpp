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

#include "opcross/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "opcross/crossratio.hpp"
#include "opcross/error.hpp"
#include "opcross/flows.hpp"
#include "opcross/grassmann.hpp"
#include "opcross/numerics.hpp"
#include "opcross/random.hpp"
#include "opcross/schwarz.hpp"
#include "opcross/selftest.hpp"

namespace opcross::cli {

namespace {

constexpr double kDefaultTolerance = 1e-6;
constexpr long long kMaxSteps = 1'000'000;
constexpr long long kMaxGrid = 100'000;
constexpr long long kMaxConfigurations = 10'000;
// Trajectories are stored in full; cap (steps + 1) * entries per state.
constexpr double kMaxTrajectoryEntries = 5e7;

struct Context {
  Rng rng;
  double tol;
  std::string csv;
};

const Json* find(const Json& obj, std::string_view key) {
  const auto it = obj.find(std::string(key));
  return it == obj.end() ? nullptr : &*it;
}

long long bounded_integer(const Json& j, std::string_view what, long long lo, long long hi) {
  const long long v = require_integer(j, what);
  require(v >= lo && v <= hi, ErrorKind::Validation,
          std::string(what) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

bool optional_bool(const Json& obj, std::string_view key, bool fallback) {
  const Json* j = find(obj, key);
  if (!j) return fallback;
  require(j->is_boolean(), ErrorKind::Validation, std::string(key) + ": expected a boolean");
  return j->get<bool>();
}

int optional_kmax(const Json& obj) {
  const Json* j = find(obj, "kmax");
  return j ? static_cast<int>(bounded_integer(*j, "kmax", 1, 64)) : -1;
}

std::string optional_string(const Json& obj, std::string_view key, std::string fallback) {
  const Json* j = find(obj, key);
  if (!j) return fallback;
  require(j->is_string(), ErrorKind::Validation, std::string(key) + ": expected a string");
  return j->get<std::string>();
}

Subspace<double> subspace_spec(const Json& j, std::string_view what, Eigen::Index ambient, Context& ctx) {
  if (j.is_object() && j.contains("random")) {
    const Json& r = j["random"];
    const Eigen::Index n = ambient > 0 ? ambient
                                       : static_cast<Eigen::Index>(bounded_integer(
                                             require_field(r, "ambient", what), "ambient", 2, kMaxInputDim));
    const auto k = static_cast<Eigen::Index>(bounded_integer(require_field(r, "dim", what), "dim", 1, n - 1));
    return random_subspace<double>(n, k, ctx.rng);
  }
  return subspace_from_json(j, what);
}

std::vector<Subspace<double>> subspace_list(const Json& obj, std::string_view key, std::size_t count,
                                            Eigen::Index ambient, Context& ctx) {
  const Json& arr = require_field(obj, key, "input");
  require(arr.is_array() && arr.size() == count, ErrorKind::Validation,
          std::string(key) + ": expected an array of " + std::to_string(count) + " subspaces");
  std::vector<Subspace<double>> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(subspace_spec(arr[i], std::string(key) + "[" + std::to_string(i) + "]", ambient, ctx));
  return out;
}

// A coefficient list is an array of matrices; a single matrix is accepted as
// a constant polynomial.
std::vector<Eigen::MatrixXd> coefficient_list(const Json& j, std::string_view what) {
  const bool list = j.is_array() && !j.empty() &&
                    (j[0].is_object() || (j[0].is_array() && !j[0].empty() && j[0][0].is_array()));
  std::vector<Eigen::MatrixXd> out;
  if (!list) {
    out.push_back(matrix_from_json(j, what));
    return out;
  }
  require(j.size() <= 16, ErrorKind::Validation, std::string(what) + ": at most 16 coefficients");
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(matrix_from_json(j[i], std::string(what) + "[" + std::to_string(i) + "]"));
  return out;
}

HamiltonianSystem system_from_json(const Json& j) {
  require(j.is_object(), ErrorKind::Validation, "system must be a JSON object");
  auto a = coefficient_list(require_field(j, "A", "system"), "system.A");
  auto b = coefficient_list(require_field(j, "B", "system"), "system.B");
  const Eigen::Index n = b.front().rows();
  bool symmetric = true;
  for (const auto& c : a)
    symmetric = symmetric && c.rows() == c.cols() && (c - c.transpose()).norm() <= 1e-12 * std::max(1.0, c.norm());
  symmetric = optional_bool(j, "symmetric_A", symmetric);
  return HamiltonianSystem::make(n, std::move(a), std::move(b), symmetric);
}

void csv_row(std::string& csv, double t, std::initializer_list<const Eigen::MatrixXd*> blocks) {
  csv += format_double(t);
  for (const Eigen::MatrixXd* m : blocks)
    for (Eigen::Index i = 0; i < m->rows(); ++i)
      for (Eigen::Index c = 0; c < m->cols(); ++c) csv += "," + format_double((*m)(i, c));
  csv += "\n";
}

std::string matrix_header(std::string_view prefix, Eigen::Index rows, Eigen::Index cols) {
  std::string s;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c)
      s += "," + std::string(prefix) + "_" + std::to_string(i) + "_" + std::to_string(c);
  return s;
}

Json traces_to_json(const std::vector<double>& v) { return Json(v); }

Json cross_ratio_to_json(const CrossRatioResult<double>& r, const std::vector<std::string>& report) {
  Json j;
  j["carrier"] = std::string(to_string(r.carrier));
  j["dim"] = r.matrix.rows();
  for (const auto& key : report) {
    if (key == "matrix") j["matrix"] = matrix_to_json(r.matrix);
    else if (key == "spectrum") j["spectrum"] = spectrum_to_json(r.spectrum);
    else if (key == "traces") j["traces"] = traces_to_json(r.trace_powers);
    else if (key == "det") j["det"] = r.determinant;
    else raise(ErrorKind::Validation, "report: unknown entry '" + key + "'");
  }
  return j;
}

// ---- verbs -----------------------------------------------------------------

Json do_dv(const Json& in, Context&) {
  std::vector<std::string> report = {"matrix", "spectrum", "traces", "det"};
  if (const Json* r = find(in, "report")) {
    require(r->is_array(), ErrorKind::Validation, "report: expected an array of strings");
    report.clear();
    for (const auto& e : *r) {
      require(e.is_string(), ErrorKind::Validation, "report: expected an array of strings");
      report.push_back(e.get<std::string>());
    }
  }
  const int kmax = optional_kmax(in);
  std::string method;
  CrossRatioResult<double> base;
  if (const Json* coords = find(in, "coordinates")) {
    require(coords->is_array() && coords->size() == 4, ErrorKind::Validation, "coordinates: expected 4 matrices");
    std::array<Eigen::MatrixXd, 4> t;
    for (int i = 0; i < 4; ++i) t[i] = matrix_from_json((*coords)[i], "coordinates[" + std::to_string(i) + "]");
    const Eigen::Index k = t[0].cols();
    for (const auto& m : t)
      require(m.rows() == k && m.cols() == k, ErrorKind::DimensionMismatch, "coordinates must be square k x k");
    const bool mixed = optional_string(in, "method", "chart") == "mixed";
    if (mixed) {
      method = "mixed";
      base = dv_mixed(t[0], t[1], t[2], t[3]);
    } else {
      method = "chart";
      const Polarization<double> pol = find(in, "polarization")
                                           ? polarization_from_json(in["polarization"], "polarization")
                                           : Polarization<double>::standard(2 * k, k);
      base = dv_matrix(t[0], t[1], t[2], t[3], pol);
    }
  } else {
    const Json& subs = require_field(in, "subspaces", "input");
    require(subs.is_array() && subs.size() == 4, ErrorKind::Validation, "subspaces: expected 4 subspaces");
    std::vector<Subspace<double>> p;
    for (int i = 0; i < 4; ++i) p.push_back(subspace_from_json(subs[i], "subspaces[" + std::to_string(i) + "]"));
    const std::string mode = optional_string(in, "mode", "composition");
    if (mode == "composition") base = dv_composition(p[0], p[1], p[2], p[3]);
    else if (mode == "unequal") base = dv_unequal(p[0], p[1], p[2], p[3]);
    else raise(ErrorKind::Validation, "mode: expected 'composition' or 'unequal'");
    method = mode;
  }
  if (kmax > 0) base = make_cross_ratio_result(base.matrix, base.carrier, kmax);
  std::string order = "1234";
  if (const Json* o = find(in, "order")) {
    require(o->is_string(), ErrorKind::Validation, "order: expected a string such as \"13;24\"");
    order = o->get<std::string>();
  }
  const ArgumentOrder ord = parse_argument_order(order);
  const CrossRatioResult<double> shown = ord == ArgumentOrder::o12_34 ? base : dv_permuted(base, ord);

  Json out;
  out["method"] = method;
  out["order"] = std::string(to_string(ord));
  const Json body = cross_ratio_to_json(shown, report);
  for (const auto& [k, v] : body.items()) out[k] = v;
  if (optional_bool(in, "permutations", false)) {
    Json perms = Json::array();
    for (ArgumentOrder o : kAllArgumentOrders) {
      Json e;
      e["order"] = std::string(to_string(o));
      try {
        e["spectrum"] = spectrum_to_json(dv_permuted(base, o).spectrum);
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::Singular) throw;
        e["error"] = "Singular";
      }
      perms.push_back(std::move(e));
    }
    out["permutations"] = std::move(perms);
  }
  return out;
}

Json do_angle(const Json& in, Context&) {
  const Eigen::MatrixXd a = matrix_from_json(require_field(in, "A", "input"), "A");
  const Eigen::MatrixXd b = matrix_from_json(require_field(in, "B", "input"), "B");
  const auto r = operator_angle(a, b);
  const Eigen::Index k = a.cols(), n = a.rows() + a.cols();
  const auto pol = Polarization<double>::standard(n, k);
  const auto angles = principal_angles(subspace_from_graph(a, pol), subspace_from_graph(b, pol));
  Json out;
  out["matrix"] = matrix_to_json(r.matrix);
  out["spectrum"] = spectrum_to_json(r.spectrum);
  Json th = Json::array(), c2 = Json::array();
  for (double x : angles) {
    th.push_back(x);
    c2.push_back(std::cos(x) * std::cos(x));
  }
  out["principal_angles"] = std::move(th);
  out["cos2"] = std::move(c2);
  return out;
}

Json do_equiv(const Json& in, Context& ctx) {
  Json out;
  if (find(in, "V")) {
    const Eigen::MatrixXd v = matrix_from_json(in["V"], "V");
    const Eigen::MatrixXd w = matrix_from_json(require_field(in, "W", "input"), "W");
    const auto witness = comparability_witness(v, w, ctx.tol);
    out["comparable"] = witness.has_value();
    if (witness && optional_bool(in, "witness", true)) {
      out["alpha"] = matrix_to_json(witness->alpha);
      out["beta"] = matrix_to_json(witness->beta);
      out["witness_residual"] = (w - witness->alpha * v * witness->beta).norm();
    }
    return out;
  }
  const auto p = subspace_from_json(require_field(in, "P", "input"), "P");
  const auto q = subspace_from_json(require_field(in, "Q", "input"), "Q");
  const auto s = subspace_from_json(require_field(in, "S", "input"), "S");
  const auto t = subspace_from_json(require_field(in, "T", "input"), "T");
  const auto r = pair_equivalence(p, q, s, t, ctx.tol);
  out["equivalent"] = r.equivalent;
  out["angle_distance"] = r.angle_distance;
  out["chart_compared"] = r.chart_compared;
  if (r.chart_compared) out["chart_distance"] = r.chart_distance;
  return out;
}

Json do_cocycle(const Json& in, Context& ctx) {
  struct Config {
    std::vector<Subspace<double>> p, q;
  };
  std::vector<Config> configs;
  if (find(in, "P")) {
    configs.push_back({subspace_list(in, "P", 2, 0, ctx), subspace_list(in, "Q", 3, 0, ctx)});
  } else {
    const Json& r = require_field(in, "random", "input");
    const auto n = static_cast<Eigen::Index>(bounded_integer(require_field(r, "ambient", "random"), "ambient", 2, 64));
    const auto k = static_cast<Eigen::Index>(bounded_integer(require_field(r, "dim", "random"), "dim", 1, n - 1));
    const long long count = find(r, "count") ? bounded_integer(r["count"], "count", 1, kMaxConfigurations) : 1;
    for (long long c = 0; c < count; ++c) {
      Config cfg;
      for (int i = 0; i < 2; ++i) cfg.p.push_back(random_subspace<double>(n, k, ctx.rng));
      for (int i = 0; i < 3; ++i) cfg.q.push_back(random_subspace<double>(n, n - k, ctx.rng));
      configs.push_back(std::move(cfg));
    }
  }
  Json residuals = Json::array();
  double worst = 0;
  Eigen::MatrixXd last;
  for (const auto& c : configs) {
    last = cocycle_product(c.p[0], c.p[1], c.q[0], c.q[1], c.q[2]);
    const double res = (last - Eigen::MatrixXd::Identity(last.rows(), last.cols())).norm();
    worst = std::max(worst, res);
    residuals.push_back(res);
  }
  Json out;
  out["configurations"] = configs.size();
  out["max_residual"] = worst;
  out["residuals"] = std::move(residuals);
  if (configs.size() == 1) out["product"] = matrix_to_json(last);
  return out;
}

CurveJet jet_from_json(const Json& j) {
  CurveJet jet;
  jet.t = find(j, "t") ? require_number(j["t"], "jet.t") : 0.0;
  jet.z = matrix_from_json(require_field(j, "z", "jet"), "jet.z");
  jet.z1 = matrix_from_json(require_field(j, "z1", "jet"), "jet.z1");
  jet.z2 = matrix_from_json(require_field(j, "z2", "jet"), "jet.z2");
  jet.z3 = matrix_from_json(require_field(j, "z3", "jet"), "jet.z3");
  const Eigen::Index n = jet.z.rows();
  for (const auto* m : {&jet.z, &jet.z1, &jet.z2, &jet.z3})
    require(m->rows() == n && m->cols() == n, ErrorKind::DimensionMismatch, "jet: all entries must be n x n");
  return jet;
}

Json do_schwarz(const Json& in, Context&) {
  CurveJet jet;
  Eigen::MatrixXd s;
  std::string source;
  if (find(in, "jet")) {
    jet = jet_from_json(in["jet"]);
    s = schwarz(jet);
    source = "jet";
  } else {
    const Json& arr = require_field(in, "samples", "input");
    require(arr.is_array() && arr.size() >= 7 && arr.size() % 2 == 1 && arr.size() <= 1001, ErrorKind::Validation,
            "samples: expected an odd number (7..1001) of matrices");
    std::vector<Eigen::MatrixXd> samples;
    for (std::size_t i = 0; i < arr.size(); ++i)
      samples.push_back(matrix_from_json(arr[i], "samples[" + std::to_string(i) + "]"));
    const double h = require_number(require_field(in, "h", "input"), "h");
    require(h > 0, ErrorKind::Validation, "h must be positive");
    const long long ord = find(in, "order") ? require_integer(in["order"], "order") : 4;
    require(ord == 2 || ord == 4, ErrorKind::Validation, "order must be 2 or 4");
    const double t = find(in, "t") ? require_number(in["t"], "t") : 0.0;
    jet = jet_from_samples(samples, h, t, ord == 2 ? StencilOrder::Second : StencilOrder::Fourth);
    s = schwarz(jet);
    source = "samples";
  }
  Json out;
  out["source"] = source;
  out["schwarzian"] = matrix_to_json(s);
  out["spectrum"] = spectrum_to_json(eigenvalues(s));
  if (const Json* m = find(in, "mobius")) {
    const MobiusBlocks blocks{matrix_from_json(require_field(*m, "c1", "mobius"), "mobius.c1"),
                              matrix_from_json(require_field(*m, "c2", "mobius"), "mobius.c2"),
                              matrix_from_json(require_field(*m, "c3", "mobius"), "mobius.c3"),
                              matrix_from_json(require_field(*m, "c4", "mobius"), "mobius.c4")};
    const Eigen::MatrixXd sm = schwarz(mobius_curve_jet(blocks, jet));
    Json mj;
    mj["schwarzian"] = matrix_to_json(sm);
    mj["spectrum"] = spectrum_to_json(eigenvalues(sm));
    mj["spectral_drift"] = spectral_distance(eigenvalues(s), eigenvalues(sm));
    out["mobius"] = std::move(mj);
  }
  if (const Json* sys = find(in, "system")) {
    const HamiltonianSystem hs = system_from_json(*sys);
    out["equation_residual"] = schwarz_equation_residual(jet, hs, jet.t).norm();
  }
  return out;
}

struct Interval {
  double t0, t1;
  int steps;
};

void require_trajectory_budget(const Interval& iv, Eigen::Index entries) {
  require((iv.steps + 1.0) * static_cast<double>(entries) <= kMaxTrajectoryEntries, ErrorKind::Validation,
          "steps x state size exceeds the trajectory budget");
}

Interval interval_from_json(const Json& in) {
  Interval iv;
  iv.t0 = find(in, "t0") ? require_number(in["t0"], "t0") : 0.0;
  iv.t1 = require_number(require_field(in, "t1", "input"), "t1");
  require(iv.t1 > iv.t0, ErrorKind::Validation, "t1 must exceed t0");
  iv.steps = static_cast<int>(bounded_integer(require_field(in, "steps", "input"), "steps", 1, kMaxSteps));
  return iv;
}

Json do_riccati(const Json& in, Context& ctx) {
  const HamiltonianSystem sys = system_from_json(require_field(in, "system", "input"));
  const Eigen::MatrixXd w0 = matrix_from_json(require_field(in, "W0", "input"), "W0");
  const Interval iv = interval_from_json(in);
  require_trajectory_budget(iv, w0.size());
  const MatrixTrajectory tr = integrate_riccati(sys, w0, iv.t0, iv.t1, iv.steps);
  double max_norm = 0;
  ctx.csv = "t" + matrix_header("w", w0.rows(), w0.cols()) + "\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    max_norm = std::max(max_norm, tr.values[i].norm());
    csv_row(ctx.csv, tr.times[i], {&tr.values[i]});
  }
  Json out;
  out["steps"] = iv.steps;
  out["t_final"] = tr.times.back();
  out["W_final"] = matrix_to_json(tr.values.back());
  out["max_norm"] = max_norm;
  return out;
}

Json do_hamiltonian(const Json& in, Context& ctx) {
  const HamiltonianSystem sys = system_from_json(require_field(in, "system", "input"));
  const Eigen::Index n = sys.dim();
  PhasePoint x0;
  x0.q = find(in, "q0") ? matrix_from_json(in["q0"], "q0") : Eigen::MatrixXd::Identity(n, n);
  x0.p = matrix_from_json(require_field(in, "p0", "input"), "p0");
  const Interval iv = interval_from_json(in);
  require_trajectory_budget(iv, x0.q.size() + x0.p.size());
  const HamiltonianTrajectory tr = integrate_hamiltonian(sys, x0, iv.t0, iv.t1, iv.steps);
  ctx.csv = "t" + matrix_header("q", n, x0.q.cols()) + matrix_header("p", n, x0.p.cols()) + "\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) csv_row(ctx.csv, tr.times[i], {&tr.states[i].q, &tr.states[i].p});
  const PhasePoint& xf = tr.states.back();
  const auto defect = [](const PhasePoint& x) { return symplectic_pairing(x, x).norm(); };
  Json out;
  out["steps"] = iv.steps;
  out["t_final"] = tr.times.back();
  out["q_final"] = matrix_to_json(xf.q);
  out["p_final"] = matrix_to_json(xf.p);
  out["lagrangian_defect_initial"] = defect(x0);
  out["lagrangian_defect_final"] = defect(xf);
  if (xf.q.rows() == xf.q.cols() && is_invertible(xf.q)) out["W_final"] = matrix_to_json(solve_right(xf.p, xf.q));
  return out;
}

std::vector<double> time_grid(const Json& j) {
  std::vector<double> times;
  if (j.is_object()) {
    const Json& g = require_field(j, "grid", "times");
    const double t0 = require_number(require_field(g, "t0", "times.grid"), "times.grid.t0");
    const double t1 = require_number(require_field(g, "t1", "times.grid"), "times.grid.t1");
    const long long count = bounded_integer(require_field(g, "count", "times.grid"), "times.grid.count", 2, kMaxGrid);
    for (long long i = 0; i < count; ++i) times.push_back(t0 + (t1 - t0) * static_cast<double>(i) / (count - 1));
    return times;
  }
  require(j.is_array() && !j.empty() && j.size() <= static_cast<std::size_t>(kMaxGrid), ErrorKind::Validation,
          "times: expected a non-empty array or a grid object");
  for (std::size_t i = 0; i < j.size(); ++i) times.push_back(require_number(j[i], "times[" + std::to_string(i) + "]"));
  return times;
}

Json do_flow(const Json& in, Context& ctx) {
  const Json& gen = require_field(in, "generator", "input");
  Eigen::MatrixXd m;
  if (gen.is_object() && gen.contains("shift")) {
    const Json& s = gen["shift"];
    const auto n = bounded_integer(require_field(s, "n", "generator.shift"), "generator.shift.n", 2, kMaxInputDim);
    const auto pw = bounded_integer(require_field(s, "power", "generator.shift"), "generator.shift.power", 1, n - 1);
    m = shift_generator(n, pw);
  } else {
    m = matrix_from_json(gen, "generator");
    require_square(m, "generator");
  }
  const Eigen::Index n = m.rows();
  std::vector<Subspace<double>> initials;
  if (const Json* init = find(in, "initials")) {
    require(init->is_array() && init->size() == 4, ErrorKind::Validation, "initials: expected 4 subspaces");
    for (std::size_t i = 0; i < 4; ++i)
      initials.push_back(subspace_spec((*init)[i], "initials[" + std::to_string(i) + "]", n, ctx));
  } else {
    // P1, P3 take the larger half and P2, P4 the complementary dimension.
    const Eigen::Index k = (n + 1) / 2;
    for (int i = 0; i < 4; ++i) initials.push_back(random_subspace<double>(n, i % 2 == 0 ? k : n - k, ctx.rng));
  }
  if (optional_bool(in, "stationary_first", false)) {
    const auto stat = stationary_subspaces(m, initials[0].dim());
    initials[0] = stat.front();
  }
  const std::string vname = optional_string(in, "variant", "all_flowed");
  FlowVariant variant;
  if (vname == "all_flowed") variant = FlowVariant::AllFlowed;
  else if (vname == "first_fixed") variant = FlowVariant::FirstFixed;
  else raise(ErrorKind::Validation, "variant: expected 'all_flowed' or 'first_fixed'");
  const std::vector<double> times =
      time_grid(find(in, "times") ? in["times"] : Json::parse(R"({"grid":{"t0":0,"t1":1,"count":11}})"));
  const FlowScenario sc = FlowScenario::make(m, initials, times);
  const auto samples = spectrum_along_flow(sc, variant, optional_kmax(in));

  Json rows = Json::array();
  const std::size_t k = samples.front().spectrum.size(), km = samples.front().traces.size();
  ctx.csv = "t";
  for (std::size_t i = 0; i < k; ++i) ctx.csv += ",re_" + std::to_string(i + 1) + ",im_" + std::to_string(i + 1);
  for (std::size_t i = 0; i < km; ++i) ctx.csv += ",tr_" + std::to_string(i + 1);
  ctx.csv += ",det\n";
  for (const auto& s : samples) {
    Json r;
    r["t"] = s.t;
    r["spectrum"] = spectrum_to_json(s.spectrum);
    r["traces"] = traces_to_json(s.traces);
    r["det"] = s.determinant;
    rows.push_back(std::move(r));
    ctx.csv += format_double(s.t);
    for (const auto& z : s.spectrum) ctx.csv += "," + format_double(z.real()) + "," + format_double(z.imag());
    for (double v : s.traces) ctx.csv += "," + format_double(v);
    ctx.csv += "," + format_double(s.determinant) + "\n";
  }
  Json out;
  out["ambient"] = n;
  out["variant"] = vname;
  out["first_stationary"] = is_stationary(m, initials[0]);
  out["spectral_drift"] = max_spectral_drift(samples);
  out["trace_drift"] = max_trace_drift(samples);
  out["samples"] = std::move(rows);
  return out;
}

Json do_selftest(Context& ctx, std::uint64_t seed, bool& all_passed) {
  (void)ctx;
  const auto checks = run_selftest(seed);
  Json list = Json::array();
  all_passed = true;
  for (const auto& c : checks) {
    Json e;
    e["name"] = c.name;
    e["value"] = c.value;
    e["threshold"] = c.threshold;
    e["passed"] = c.passed;
    all_passed = all_passed && c.passed;
    list.push_back(std::move(e));
  }
  Json out;
  out["checks"] = std::move(list);
  out["passed"] = all_passed;
  return out;
}

Json error_json(std::string_view kind, std::string_view message) {
  Json e;
  e["kind"] = std::string(kind);
  e["message"] = std::string(message);
  return e;
}

bool read_file(const std::string& path, std::string& out) {
  if (path == "-") {
    out.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    return true;
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  std::ostringstream ss;
  ss << f.rdbuf();
  out = ss.str();
  return static_cast<bool>(f) || f.eof();
}

bool write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return static_cast<bool>(std::cout);
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

}  // namespace

std::optional<Verb> parse_verb(std::string_view s) {
  static constexpr std::pair<std::string_view, Verb> kVerbs[] = {
      {"dv", Verb::dv},           {"angle", Verb::angle},     {"equiv", Verb::equiv},
      {"cocycle", Verb::cocycle}, {"schwarz", Verb::schwarz}, {"riccati", Verb::riccati},
      {"hamiltonian", Verb::hamiltonian}, {"flow", Verb::flow}, {"selftest", Verb::selftest}};
  for (const auto& [name, v] : kVerbs)
    if (name == s) return v;
  return std::nullopt;
}

std::string_view to_string(Verb v) {
  switch (v) {
    case Verb::dv: return "dv";
    case Verb::angle: return "angle";
    case Verb::equiv: return "equiv";
    case Verb::cocycle: return "cocycle";
    case Verb::schwarz: return "schwarz";
    case Verb::riccati: return "riccati";
    case Verb::hamiltonian: return "hamiltonian";
    case Verb::flow: return "flow";
    case Verb::selftest: return "selftest";
  }
  return "unknown";
}

double resolve_tolerance(const Command& cmd) {
  if (cmd.tolerance) return *cmd.tolerance;
  if (const char* env = std::getenv(std::string(kToleranceEnv).c_str())) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && std::isfinite(v) && v > 0) return v;
  }
  return kDefaultTolerance;
}

std::string input_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string emit_report(const Json& report) { return dump_canonical(report) + "\n"; }

Outcome execute(const Command& cmd, std::string_view input) {
  Outcome outcome;
  const double tolerance = resolve_tolerance(cmd);
  Json report;
  report["tool"] = "opcross";
  report["version"] = std::string(kVersion);
  report["verb"] = std::string(to_string(cmd.verb));
  report["seed"] = cmd.seed;
  report["tolerance"] = tolerance;
  report["input_digest"] = input_digest(input);
  Context ctx{make_rng(cmd.seed), tolerance, {}};
  Json result;
  try {
    require(std::isfinite(tolerance) && tolerance > 0, ErrorKind::Validation, "tolerance must be positive");
    if (cmd.verb == Verb::selftest) {
      bool passed = true;
      result = do_selftest(ctx, cmd.seed, passed);
      outcome.exit_code = passed ? kExitOk : kExitNumerical;
    } else {
      const Json in = Json::parse(input.begin(), input.end());
      require(in.is_object(), ErrorKind::Validation, "input must be a JSON object");
      switch (cmd.verb) {
        case Verb::dv: result = do_dv(in, ctx); break;
        case Verb::angle: result = do_angle(in, ctx); break;
        case Verb::equiv: result = do_equiv(in, ctx); break;
        case Verb::cocycle: result = do_cocycle(in, ctx); break;
        case Verb::schwarz: result = do_schwarz(in, ctx); break;
        case Verb::riccati: result = do_riccati(in, ctx); break;
        case Verb::hamiltonian: result = do_hamiltonian(in, ctx); break;
        case Verb::flow: result = do_flow(in, ctx); break;
        case Verb::selftest: break;
      }
    }
    report["status"] = outcome.exit_code == kExitOk ? "ok" : "failed";
    report["result"] = std::move(result);
    outcome.csv = std::move(ctx.csv);
  } catch (const Error& e) {
    outcome.exit_code = is_input_error(e.kind()) ? kExitValidation : kExitNumerical;
    report["status"] = "error";
    report["error"] = error_json(to_string(e.kind()), e.what());
  } catch (const nlohmann::json::exception& e) {
    outcome.exit_code = kExitValidation;
    report["status"] = "error";
    report["error"] = error_json("Validation", e.what());
  } catch (const std::exception& e) {
    outcome.exit_code = kExitValidation;
    report["status"] = "error";
    report["error"] = error_json("Validation", e.what());
  }
  outcome.report = emit_report(report);
  return outcome;
}

int run(const Command& cmd) {
  std::string input;
  if (cmd.verb != Verb::selftest || !cmd.input_path.empty()) {
    if (cmd.input_path.empty() || !read_file(cmd.input_path, input)) {
      Outcome o;
      Json report;
      report["tool"] = "opcross";
      report["version"] = std::string(kVersion);
      report["verb"] = std::string(to_string(cmd.verb));
      report["status"] = "error";
      report["error"] = error_json("Validation", cmd.input_path.empty() ? "no input file given (--in)"
                                                                        : "cannot read input file '" + cmd.input_path + "'");
      write_file(cmd.output_path, emit_report(report));
      std::cerr << "opcross: " << report["error"]["message"].get<std::string>() << "\n";
      return kExitValidation;
    }
  }
  const Outcome o = execute(cmd, input);
  if (!write_file(cmd.output_path, o.report)) {
    std::cerr << "opcross: cannot write report to '" << cmd.output_path << "'\n";
    return kExitValidation;
  }
  if (!cmd.csv_path.empty() && !write_file(cmd.csv_path, o.csv)) {
    std::cerr << "opcross: cannot write CSV to '" << cmd.csv_path << "'\n";
    return kExitValidation;
  }
  if (o.exit_code != kExitOk) std::cerr << "opcross: " << to_string(cmd.verb) << " failed, see report\n";
  return o.exit_code;
}

int main(int argc, char** argv) {
  CLI::App app{"Operator cross-ratios, Schwarzians and Riccati flows on Grassmannians", "opcross"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1, 1);
  Command cmd;
  std::string verb_name;
  const char* verbs[] = {"dv", "angle", "equiv", "cocycle", "schwarz", "riccati", "hamiltonian", "flow", "selftest"};
  const char* blurbs[] = {"operator cross-ratio of four subspaces",
                          "operator angle between two graphs",
                          "pair equivalence or operator comparability",
                          "cocycle product residual",
                          "matrix Schwarzian of a curve jet or samples",
                          "integrate the matrix Riccati equation",
                          "integrate a linear Hamiltonian system",
                          "cross-ratio spectrum along a linear flow",
                          "seeded invariant checks of every module"};
  double tol = 0;
  for (int i = 0; i < 9; ++i) {
    CLI::App* sub = app.add_subcommand(verbs[i], blurbs[i]);
    sub->add_option("--in", cmd.input_path, "input JSON file ('-' for stdin)");
    sub->add_option("--out", cmd.output_path, "report file (default stdout)");
    sub->add_option("--csv", cmd.csv_path, "CSV table file");
    sub->add_option("--seed", cmd.seed, "random seed")->default_val(0);
    sub->add_option("--tol", tol, "decision tolerance (overrides OPCROSS_TOL)")->check(CLI::PositiveNumber);
    sub->callback([&, name = std::string(verbs[i]), sub] {
      verb_name = name;
      if (sub->count("--tol") > 0) cmd.tolerance = tol;
    });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  cmd.verb = *parse_verb(verb_name);
  return run(cmd);
}

}  // namespace opcross::cli
