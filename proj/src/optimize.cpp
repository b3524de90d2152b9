#include "latentvqe/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "latentvqe/errors.hpp"
#include "latentvqe/random.hpp"
#include "latentvqe/schema.hpp"

namespace latentvqe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Evaluator {
public:
  Evaluator(const CostFunction& f, std::span<const Interval> bounds) : f_(f), bounds_(bounds) {}

  void clip(std::vector<double>& x) const {
    if (bounds_.empty()) return;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = bounds_[i].clamp(x[i]);
  }

  double operator()(std::vector<double>& x) {
    clip(x);
    const double v = f_(x);
    ++count;
    if (!std::isfinite(v)) throw NumericalError("cost function returned a non-finite value");
    return v;
  }

  long count = 0;

private:
  const CostFunction& f_;
  std::span<const Interval> bounds_;
};

struct SimplexOutcome {
  std::vector<double> best;
  double value;
  int iterations;
};

SimplexOutcome nelder_mead_pass(Evaluator& eval, std::vector<double> x0, double step, int max_iterations,
                                double tolerance, std::vector<double>& trace, double& best_so_far) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  values[0] = eval(simplex[0]);
  for (std::size_t i = 0; i < n; ++i) {
    auto& v = simplex[i + 1];
    v[i] += step;
    eval.clip(v);
    if (v[i] == simplex[0][i]) v[i] -= step; // pinned at an upper bound
    values[i + 1] = eval(v);
  }

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  int it = 0;
  for (; it < max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t ib = order.front();
    const std::size_t iw = order.back();
    const std::size_t isw = order[n - 1]; // second worst
    best_so_far = std::min(best_so_far, values[ib]);
    trace.push_back(best_so_far);
    if (values[iw] - values[ib] < tolerance) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == iw) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[k][d];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    for (std::size_t d = 0; d < n; ++d) xr[d] = centroid[d] + (centroid[d] - simplex[iw][d]);
    const double fr = eval(xr);
    if (fr < values[ib]) {
      for (std::size_t d = 0; d < n; ++d) xe[d] = centroid[d] + 2.0 * (xr[d] - centroid[d]);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[iw] = xe;
        values[iw] = fe;
      } else {
        simplex[iw] = xr;
        values[iw] = fr;
      }
      continue;
    }
    if (fr < values[isw]) {
      simplex[iw] = xr;
      values[iw] = fr;
      continue;
    }
    if (fr < values[iw]) { // outside contraction
      for (std::size_t d = 0; d < n; ++d) xc[d] = centroid[d] + 0.5 * (xr[d] - centroid[d]);
      const double fc = eval(xc);
      if (fc <= fr) {
        simplex[iw] = xc;
        values[iw] = fc;
        continue;
      }
    } else { // inside contraction
      for (std::size_t d = 0; d < n; ++d) xc[d] = centroid[d] + 0.5 * (simplex[iw][d] - centroid[d]);
      const double fc = eval(xc);
      if (fc < values[iw]) {
        simplex[iw] = xc;
        values[iw] = fc;
        continue;
      }
    }
    for (std::size_t k = 0; k <= n; ++k) { // shrink toward best
      if (k == ib) continue;
      for (std::size_t d = 0; d < n; ++d) simplex[k][d] = simplex[ib][d] + 0.5 * (simplex[k][d] - simplex[ib][d]);
      values[k] = eval(simplex[k]);
    }
  }
  const auto best = std::min_element(values.begin(), values.end()) - values.begin();
  best_so_far = std::min(best_so_far, values[static_cast<std::size_t>(best)]);
  return {simplex[static_cast<std::size_t>(best)], values[static_cast<std::size_t>(best)], it};
}

MinimizeResult adam(const CostFunction& cost, const GradientFunction& gradient, std::span<const double> initial,
                    std::span<const Interval> bounds, const OptimizerConfig& config) {
  Evaluator eval(cost, bounds);
  MinimizeResult out;
  std::vector<double> x(initial.begin(), initial.end());
  eval.clip(x);
  out.params = x;
  out.value = eval(x);
  std::vector<double> m(x.size(), 0.0), v(x.size(), 0.0);
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  for (int it = 1; it <= config.max_iterations; ++it) {
    const std::vector<double> g = gradient(x);
    double gmax = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(g[i])) throw NumericalError("non-finite gradient");
      gmax = std::max(gmax, std::abs(g[i]));
      m[i] = b1 * m[i] + (1 - b1) * g[i];
      v[i] = b2 * v[i] + (1 - b2) * g[i] * g[i];
      const double mh = m[i] / (1 - std::pow(b1, it));
      const double vh = v[i] / (1 - std::pow(b2, it));
      x[i] -= config.learning_rate * mh / (std::sqrt(vh) + eps);
    }
    const double f = eval(x);
    if (f < out.value) {
      out.value = f;
      out.params = x;
    }
    out.trace.push_back(out.value);
    out.iterations = it;
    if (gmax < config.tolerance) break;
  }
  out.evaluations = eval.count;
  return out;
}

} // namespace

std::string to_string(OptimizerMethod m) {
  return m == OptimizerMethod::NELDER_MEAD ? "NELDER_MEAD" : "ADAM_PARAM_SHIFT";
}

OptimizerMethod optimizer_method_from_string(const std::string& name) {
  if (name == "NELDER_MEAD" || name == "nelder-mead") return OptimizerMethod::NELDER_MEAD;
  if (name == "ADAM_PARAM_SHIFT" || name == "adam") return OptimizerMethod::ADAM_PARAM_SHIFT;
  throw std::invalid_argument("unknown optimizer '" + name + "'");
}

void OptimizerConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("optimizer tolerance must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("optimizer max_iterations must be >= 1");
  if (restarts < 0 || simplex_restarts < 0) throw std::invalid_argument("restart counts must be >= 0");
  if (!(initial_step > 0.0)) throw std::invalid_argument("initial simplex step must be > 0");
}

MinimizeResult minimize(const CostFunction& cost, std::span<const double> initial, std::span<const Interval> bounds,
                        const OptimizerConfig& config, const GradientFunction& gradient) {
  config.validate();
  if (initial.empty()) throw std::invalid_argument("minimize: empty parameter vector");
  if (!bounds.empty() && bounds.size() != initial.size()) throw std::invalid_argument("minimize: bounds size mismatch");
  for (const Interval& b : bounds)
    if (!(b.lo <= b.hi)) throw std::invalid_argument("minimize: empty bound interval");

  if (config.method == OptimizerMethod::ADAM_PARAM_SHIFT) {
    if (!gradient) throw std::invalid_argument("Adam requires a gradient function");
    return adam(cost, gradient, initial, bounds, config);
  }

  Evaluator eval(cost, bounds);
  MinimizeResult out;
  double best_so_far = std::numeric_limits<double>::infinity();
  std::vector<double> x(initial.begin(), initial.end());
  int budget = config.max_iterations;
  for (int pass = 0; pass <= config.simplex_restarts && budget > 0; ++pass) {
    const SimplexOutcome r = nelder_mead_pass(eval, x, config.initial_step, budget, config.tolerance, out.trace,
                                              best_so_far);
    budget -= std::max(r.iterations, 1);
    out.iterations += r.iterations;
    if (pass > 0 && !(r.value < out.value - config.tolerance)) {
      if (r.value < out.value) {
        out.value = r.value;
        out.params = r.best;
      }
      break;
    }
    out.value = r.value;
    out.params = r.best;
    x = out.params;
  }
  out.evaluations = eval.count;
  return out;
}

std::vector<double> parameter_shift_gradient(const Circuit& circuit, std::span<const PauliString> observable,
                                             std::span<const double> params, const StateVector& initial_state) {
  constexpr double shift = std::numbers::pi / 2.0;
  std::vector<double> grad(static_cast<std::size_t>(circuit.n_params()), 0.0);
  const auto& gates = circuit.gates();
  for (std::size_t gi = 0; gi < gates.size(); ++gi) {
    const Gate& g = gates[gi];
    for (std::size_t k = 0; k < g.angles.size(); ++k) {
      const Angle& a = g.angles[k];
      if (!a.is_free() || a.scale == 0.0) continue;
      switch (g.kind) {
      case GateKind::U3:
      case GateKind::U1:
      case GateKind::RY:
      case GateKind::RZ: break;
      default: throw std::invalid_argument("no shift rule for gate " + to_string(g.kind));
      }
      const double plus = expectation(simulate(circuit, params, initial_state, AngleShift{gi, k, shift}), observable);
      const double minus = expectation(simulate(circuit, params, initial_state, AngleShift{gi, k, -shift}), observable);
      grad[static_cast<std::size_t>(a.slot)] += a.scale * 0.5 * (plus - minus);
    }
  }
  return grad;
}

std::vector<double> parameter_shift_gradient(const Circuit& circuit, const QubitHamiltonian& hamiltonian,
                                             std::span<const double> params, const StateVector& initial_state) {
  return parameter_shift_gradient(circuit, std::span<const PauliString>(hamiltonian.terms), params, initial_state);
}

StagedResult staged_gate_optimize(const Circuit& circuit, const QubitHamiltonian& hamiltonian,
                                  std::span<const double> init, const StagedConfig& config,
                                  std::span<const Interval> bounds, const std::optional<StateVector>& initial_state) {
  if (init.size() != static_cast<std::size_t>(circuit.n_params()))
    throw std::invalid_argument("staged_gate_optimize: init length mismatch");
  if (!bounds.empty() && bounds.size() != init.size())
    throw std::invalid_argument("staged_gate_optimize: bounds length mismatch");
  const StateVector start = initial_state ? *initial_state : StateVector::zero(circuit.n_qubits());

  struct U3Slots {
    int theta, phi, lam;
  };
  std::vector<U3Slots> u3s;
  for (const Gate& g : circuit.gates()) {
    if (!g.is_parameterized()) continue;
    if (g.kind != GateKind::U3) throw std::invalid_argument("staged optimization expects U3 parameterized gates");
    for (const Angle& a : g.angles)
      if (!a.is_free() || a.scale != 1.0 || a.offset != 0.0)
        throw std::invalid_argument("staged optimization expects plain U3 parameter slots");
    u3s.push_back({g.angles[0].slot, g.angles[1].slot, g.angles[2].slot});
  }

  StagedResult out;
  out.params.assign(init.begin(), init.end());
  if (!bounds.empty())
    for (std::size_t i = 0; i < out.params.size(); ++i) out.params[i] = bounds[i].clamp(out.params[i]);

  auto full_energy = [&](std::span<const double> p) { return energy(hamiltonian, simulate(circuit, p, start)); };
  out.energy = full_energy(out.params);
  ++out.evaluations;

  // Optimize a subset of slots with the rest held at out.params.
  auto optimize_slots = [&](const std::vector<int>& slots) {
    std::vector<double> x0, scratch = out.params;
    std::vector<Interval> sub_bounds;
    double step = config.inner.initial_step;
    for (int s : slots) {
      x0.push_back(out.params[static_cast<std::size_t>(s)]);
      if (!bounds.empty()) {
        const Interval b = bounds[static_cast<std::size_t>(s)];
        sub_bounds.push_back(b);
        if (b.hi > b.lo) step = std::min(step, 0.5 * (b.hi - b.lo));
      }
    }
    if (!bounds.empty() && std::all_of(sub_bounds.begin(), sub_bounds.end(), [](const Interval& b) { return b.hi == b.lo; }))
      return;
    auto cost = [&](std::span<const double> x) {
      for (std::size_t k = 0; k < slots.size(); ++k) scratch[static_cast<std::size_t>(slots[k])] = x[k];
      return full_energy(scratch);
    };
    OptimizerConfig inner = config.inner;
    inner.method = OptimizerMethod::NELDER_MEAD;
    inner.initial_step = step;
    const MinimizeResult r = minimize(cost, x0, sub_bounds, inner);
    out.evaluations += r.evaluations;
    if (r.value < out.energy) {
      out.energy = r.value;
      for (std::size_t k = 0; k < slots.size(); ++k) out.params[static_cast<std::size_t>(slots[k])] = r.params[k];
    }
  };

  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    const double before = out.energy;
    for (const U3Slots& g : u3s) {
      optimize_slots({g.lam});          // U1 restriction
      optimize_slots({g.theta, g.phi}); // lambda frozen
    }
    out.sweeps = sweep + 1;
    if (before - out.energy < config.sweep_tolerance) break;
  }
  return out;
}

StagedResult optimize_anchor(const Circuit& circuit, const QubitHamiltonian& hamiltonian, int restarts,
                             std::uint64_t seed, const StagedConfig& config,
                             const std::optional<StateVector>& initial_state) {
  if (restarts < 1) throw std::invalid_argument("optimize_anchor needs at least one restart");
  Rng rng(seed);
  StagedResult best;
  best.energy = std::numeric_limits<double>::infinity();
  long evaluations = 0;
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> init(static_cast<std::size_t>(circuit.n_params()));
    for (double& v : init) v = rng.uniform(0.0, kTwoPi);
    StagedResult cand = staged_gate_optimize(circuit, hamiltonian, init, config, {}, initial_state);
    evaluations += cand.evaluations;
    if (cand.energy < best.energy) best = std::move(cand);
  }
  best.evaluations = evaluations;
  return best;
}

void StepConstraint::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(gamma)) throw std::invalid_argument("step constraint must be finite");
  if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
}

std::vector<Interval> step_bounds(std::span<const double> prev, std::span<const double> prev2,
                                  const StepConstraint& constraint) {
  constraint.validate();
  if (!prev2.empty() && prev2.size() != prev.size()) throw std::invalid_argument("step_bounds: length mismatch");
  std::vector<Interval> out(prev.size());
  for (std::size_t i = 0; i < prev.size(); ++i) {
    const double delta = prev2.empty() ? 0.0 : prev[i] - prev2[i];
    const double center = prev[i] + delta;
    const double half = constraint.alpha * (constraint.gamma + std::abs(delta));
    out[i] = {center - half, center + half};
  }
  return out;
}

void ParameterDataset::validate() const {
  if (records.empty()) throw std::invalid_argument("dataset is empty");
  if (anchor_index < 0 || static_cast<std::size_t>(anchor_index) >= records.size())
    throw std::invalid_argument("dataset anchor index out of range");
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].angles.size() != n_angles()) throw std::invalid_argument("dataset angle vectors differ in length");
    if (i > 0 && !(records[i].bond_length > records[i - 1].bond_length))
      throw std::invalid_argument("dataset bond lengths must be strictly ascending");
  }
}

GridPoint make_grid_point(double bond_length) {
  GridPoint gp{h2_hamiltonian(bond_length), 0.0};
  gp.oracle_energy = exact_ground_energy(gp.hamiltonian).energy;
  return gp;
}

ParameterDataset constrained_sweep(const Circuit& circuit, std::span<const GridPoint> grid, const Anchor& anchor,
                                   const SweepConfig& config, const AnsatzSpec& pqc_spec,
                                   const std::optional<StateVector>& initial_state) {
  config.constraint.validate();
  if (grid.empty()) throw std::invalid_argument("constrained_sweep: empty grid");
  if (anchor.grid_index < 0 || static_cast<std::size_t>(anchor.grid_index) >= grid.size())
    throw std::invalid_argument("constrained_sweep: anchor is not a grid member");
  if (anchor.params.size() != static_cast<std::size_t>(circuit.n_params()))
    throw std::invalid_argument("constrained_sweep: anchor parameter length mismatch");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i].hamiltonian.bond_length > grid[i - 1].hamiltonian.bond_length))
      throw std::invalid_argument("constrained_sweep: grid must be strictly ascending");

  const StateVector start = initial_state ? *initial_state : StateVector::zero(circuit.n_qubits());
  ParameterDataset ds;
  ds.anchor_index = anchor.grid_index;
  ds.pqc_spec = pqc_spec;
  ds.records.resize(grid.size());

  const auto a = static_cast<std::size_t>(anchor.grid_index);
  {
    auto& rec = ds.records[a];
    rec.bond_length = grid[a].hamiltonian.bond_length;
    rec.angles = anchor.params;
    rec.energy = energy(grid[a].hamiltonian, simulate(circuit, anchor.params, start));
    rec.oracle_energy = grid[a].oracle_energy;
  }

  auto walk = [&](int direction) {
    std::vector<double> prev = anchor.params;
    std::vector<double> prev2;
    for (long i = static_cast<long>(a) + direction; i >= 0 && i < static_cast<long>(grid.size()); i += direction) {
      const auto idx = static_cast<std::size_t>(i);
      const std::vector<Interval> bounds = step_bounds(prev, prev2, config.constraint);
      std::vector<double> init(bounds.size());
      for (std::size_t k = 0; k < bounds.size(); ++k) init[k] = 0.5 * (bounds[k].lo + bounds[k].hi);
      const StagedResult r = staged_gate_optimize(circuit, grid[idx].hamiltonian, init, config.staged, bounds, start);
      auto& rec = ds.records[idx];
      rec.bond_length = grid[idx].hamiltonian.bond_length;
      rec.angles = r.params;
      rec.energy = r.energy;
      rec.oracle_energy = grid[idx].oracle_energy;
      prev2 = std::move(prev);
      prev = r.params;
    }
  };
  walk(+1);
  walk(-1);

  const double threshold = config.flag_factor * std::max(ds.records[a].error(), config.flag_floor);
  for (auto& rec : ds.records) rec.flagged = rec.error() > threshold;
  return ds;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

std::string dataset_to_csv(const ParameterDataset& ds) {
  ds.validate();
  std::ostringstream os;
  os << "# schema_version: " << kSchemaVersion << "\n";
  os << "# kind: parameter_dataset\n";
  os << "# anchor_index: " << ds.anchor_index << "\n";
  os << "# pqc: " << to_json(ds.pqc_spec).dump() << "\n";
  os << "bond_length,energy,oracle_energy,flag";
  for (std::size_t k = 0; k < ds.n_angles(); ++k) os << ",theta_" << k;
  os << "\n";
  for (const auto& r : ds.records) {
    os << format_double(r.bond_length) << ',' << format_double(r.energy) << ',' << format_double(r.oracle_energy)
       << ',' << (r.flagged ? 1 : 0);
    for (double t : r.angles) os << ',' << format_double(t);
    os << "\n";
  }
  return os.str();
}

ParameterDataset dataset_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  ParameterDataset ds;
  bool schema_ok = false, kind_ok = false, have_pqc = false, have_header = false;
  auto fail = [](const std::string& why) { throw ArtifactError("malformed dataset CSV: " + why); };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = line.substr(2, colon - 2);
      std::string value = line.substr(colon + 1);
      value.erase(0, value.find_first_not_of(' '));
      if (key == "schema_version") {
        if (value != kSchemaVersion)
          throw ArtifactError("schema version mismatch: file has '" + value + "', expected '" +
                              std::string(kSchemaVersion) + "'");
        schema_ok = true;
      } else if (key == "kind") {
        kind_ok = value == "parameter_dataset";
      } else if (key == "anchor_index") {
        ds.anchor_index = std::stoi(value);
      } else if (key == "pqc") {
        ds.pqc_spec = ansatz_spec_from_json(nlohmann::json::parse(value));
        have_pqc = true;
      }
      continue;
    }
    if (!have_header) {
      if (line.rfind("bond_length,energy,oracle_energy,flag", 0) != 0) fail("missing column header");
      have_header = true;
      continue;
    }
    std::vector<double> cols;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        cols.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail("non-numeric cell '" + cell + "'");
      }
    }
    if (cols.size() < 5) fail("row has too few columns");
    DatasetRecord r;
    r.bond_length = cols[0];
    r.energy = cols[1];
    r.oracle_energy = cols[2];
    r.flagged = cols[3] != 0.0;
    r.angles.assign(cols.begin() + 4, cols.end());
    ds.records.push_back(std::move(r));
  }
  if (!schema_ok) throw ArtifactError("dataset CSV has no schema_version line");
  if (!kind_ok) throw ArtifactError("file is not a parameter dataset");
  if (!have_pqc || !have_header) fail("missing pqc spec or header");
  try {
    ds.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  return ds;
}

} // namespace latentvqe
