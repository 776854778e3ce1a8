#include "lensdyn/ode.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "lensdyn/error.hpp"

namespace lensdyn::ode {

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

void check_names(const std::vector<std::string>& names, const char* what,
                 std::set<std::string>& seen) {
  for (const auto& n : names) {
    if (!expr::is_identifier(n))
      throw ValidationError(std::string(what) + " '" + n + "' is not an identifier");
    if (!seen.insert(n).second)
      throw ValidationError(std::string(what) + " '" + n + "' is declared twice");
  }
}

void check_scope(const Expr& e, const std::set<std::string>& scope, const std::string& where) {
  for (const auto& v : expr::free_vars(e))
    if (!scope.count(v))
      throw ValidationError(where + " refers to '" + v + "', which is not in scope");
}

std::set<std::string> as_set(const std::vector<std::string>& a,
                             const std::vector<std::string>& b = {}) {
  std::set<std::string> out(a.begin(), a.end());
  out.insert(b.begin(), b.end());
  return out;
}

void require_same_names(const std::vector<std::string>& have,
                        const std::vector<std::string>& want, const char* what) {
  auto h = as_set(have), w = as_set(want);
  if (h == w) return;
  std::vector<std::string> missing, extra;
  for (const auto& n : w)
    if (!h.count(n)) missing.push_back(n);
  for (const auto& n : h)
    if (!w.count(n)) extra.push_back(n);
  throw BoundaryError(std::string(what) + " mismatch; missing: [" + join(missing) +
                      "], unexpected: [" + join(extra) + "]");
}

// Named slots whose values are written in place before each evaluation.
class Scope {
 public:
  Scope(const Scope&) = delete;
  Scope& operator=(const Scope&) = delete;
  explicit Scope(const std::vector<const std::vector<std::string>*>& groups) {
    for (auto g : groups) {
      std::vector<double*> slots;
      for (const auto& name : *g) slots.push_back(&env_.emplace(name, 0.0).first->second);
      groups_.push_back(std::move(slots));
    }
  }
  void set(std::size_t group, std::span<const double> values) {
    auto& slots = groups_[group];
    for (std::size_t j = 0; j < slots.size(); ++j) *slots[j] = values[j];
  }
  const expr::Env& env() const { return env_; }

 private:
  expr::Env env_;
  std::vector<std::vector<double*>> groups_;
};

std::map<std::string, Expr> bindings(const std::vector<std::string>& names,
                                     const std::vector<Expr>& exprs) {
  std::map<std::string, Expr> out;
  for (std::size_t j = 0; j < names.size(); ++j) out.emplace(names[j], exprs[j]);
  return out;
}

double eval_named(const Expr& e, const expr::Env& env, const std::string& what) {
  try {
    return expr::eval(e, env);
  } catch (const EvalError& err) {
    throw EvalError(what + ": " + err.what());
  }
}

}  // namespace

System::System(std::vector<std::string> state_vars, std::vector<std::string> output_vars,
               std::vector<std::string> param_vars, std::vector<Expr> readout,
               std::vector<Expr> field)
    : state_vars_(std::move(state_vars)),
      output_vars_(std::move(output_vars)),
      param_vars_(std::move(param_vars)),
      readout_(std::move(readout)),
      field_(std::move(field)) {
  std::set<std::string> seen;
  check_names(state_vars_, "state var", seen);
  check_names(output_vars_, "output var", seen);
  check_names(param_vars_, "param var", seen);
  if (readout_.size() != output_vars_.size())
    throw ValidationError("need one readout expression per output var");
  if (field_.size() != state_vars_.size())
    throw ValidationError("need one field expression per state var");
  const auto states = as_set(state_vars_);
  const auto inputs = as_set(state_vars_, param_vars_);
  for (std::size_t j = 0; j < readout_.size(); ++j)
    check_scope(readout_[j], states, "readout of '" + output_vars_[j] + "'");
  for (std::size_t j = 0; j < field_.size(); ++j)
    check_scope(field_[j], inputs, "field of '" + state_vars_[j] + "'");
}

Lens::Lens(std::vector<std::string> inner_outputs, std::vector<std::string> inner_params,
           std::vector<std::string> outer_outputs, std::vector<std::string> outer_params,
           std::vector<Expr> fwd, std::vector<Expr> bwd)
    : inner_outputs_(std::move(inner_outputs)),
      inner_params_(std::move(inner_params)),
      outer_outputs_(std::move(outer_outputs)),
      outer_params_(std::move(outer_params)),
      fwd_(std::move(fwd)),
      bwd_(std::move(bwd)) {
  std::set<std::string> a, b, c, d;
  check_names(inner_outputs_, "inner output", a);
  check_names(inner_params_, "inner param", b);
  check_names(outer_outputs_, "outer output", c);
  check_names(outer_params_, "outer param", d);
  for (const auto& p : outer_params_)
    if (a.count(p))
      throw ValidationError("outer param '" + p + "' collides with an inner output");
  if (fwd_.size() != outer_outputs_.size())
    throw ValidationError("need one forward expression per outer output");
  if (bwd_.size() != inner_params_.size())
    throw ValidationError("need one backward expression per inner param");
  const auto fwd_scope = as_set(inner_outputs_);
  const auto bwd_scope = as_set(inner_outputs_, outer_params_);
  for (std::size_t j = 0; j < fwd_.size(); ++j)
    check_scope(fwd_[j], fwd_scope, "forward map of '" + outer_outputs_[j] + "'");
  for (std::size_t j = 0; j < bwd_.size(); ++j)
    check_scope(bwd_[j], bwd_scope, "backward map of '" + inner_params_[j] + "'");
}

Lens Lens::identity(const System& sys) {
  std::vector<Expr> fwd, bwd;
  for (const auto& o : sys.output_vars()) fwd.push_back(Expr::variable(o));
  for (const auto& p : sys.param_vars()) bwd.push_back(Expr::variable(p));
  return Lens(sys.output_vars(), sys.param_vars(), sys.output_vars(), sys.param_vars(),
              std::move(fwd), std::move(bwd));
}

System compose_lens_ode(const Lens& lens, const System& sys) {
  require_same_names(lens.inner_outputs(), sys.output_vars(), "lens inner outputs");
  require_same_names(lens.inner_params(), sys.param_vars(), "lens inner params");
  const auto readout = bindings(sys.output_vars(), sys.readout());

  std::map<std::string, Expr> params;
  for (std::size_t j = 0; j < lens.inner_params().size(); ++j)
    params.emplace(lens.inner_params()[j], expr::substitute(lens.bwd()[j], readout));

  std::vector<Expr> field, new_readout;
  for (const auto& f : sys.field()) field.push_back(expr::substitute(f, params));
  for (const auto& f : lens.fwd()) new_readout.push_back(expr::substitute(f, readout));
  return System(sys.state_vars(), lens.outer_outputs(), lens.outer_params(),
                std::move(new_readout), std::move(field));
}

Lens compose_ode_lenses(const Lens& l1, const Lens& l2) {
  require_same_names(l2.inner_outputs(), l1.outer_outputs(), "lens outputs");
  require_same_names(l2.inner_params(), l1.outer_params(), "lens params");
  const auto mid_outputs = bindings(l1.outer_outputs(), l1.fwd());

  std::map<std::string, Expr> mid_params;
  for (std::size_t j = 0; j < l2.inner_params().size(); ++j)
    mid_params.emplace(l2.inner_params()[j], expr::substitute(l2.bwd()[j], mid_outputs));

  std::vector<Expr> fwd, bwd;
  for (const auto& f : l2.fwd()) fwd.push_back(expr::substitute(f, mid_outputs));
  for (const auto& b : l1.bwd()) bwd.push_back(expr::substitute(b, mid_params));
  return Lens(l1.inner_outputs(), l1.inner_params(), l2.outer_outputs(), l2.outer_params(),
              std::move(fwd), std::move(bwd));
}

System tensor_ode(const System& a, const System& b) {
  std::set<std::string> names;
  for (const auto* s : {&a.state_vars(), &a.output_vars(), &a.param_vars()})
    names.insert(s->begin(), s->end());
  std::vector<std::string> clash;
  for (const auto* s : {&b.state_vars(), &b.output_vars(), &b.param_vars()})
    for (const auto& n : *s)
      if (names.count(n)) clash.push_back(n);
  if (!clash.empty())
    throw BoundaryError("identifier collision in tensor: " + join(clash));

  auto cat = [](auto x, const auto& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  return System(cat(a.state_vars(), b.state_vars()), cat(a.output_vars(), b.output_vars()),
                cat(a.param_vars(), b.param_vars()), cat(a.readout(), b.readout()),
                cat(a.field(), b.field()));
}

std::vector<double> eval_field(const System& sys, std::span<const double> state,
                               std::span<const double> params) {
  if (state.size() != sys.state_vars().size() || params.size() != sys.param_vars().size())
    throw BoundaryError("state or parameter vector has the wrong length");
  Scope scope({&sys.state_vars(), &sys.param_vars()});
  scope.set(0, state);
  scope.set(1, params);
  std::vector<double> out(state.size());
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = eval_named(sys.field()[j], scope.env(), "field of '" + sys.state_vars()[j] + "'");
  return out;
}

std::vector<double> eval_readout(const System& sys, std::span<const double> state) {
  if (state.size() != sys.state_vars().size())
    throw BoundaryError("state vector has the wrong length");
  Scope scope({&sys.state_vars()});
  scope.set(0, state);
  std::vector<double> out(sys.output_vars().size());
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = eval_named(sys.readout()[j], scope.env(),
                        "readout of '" + sys.output_vars()[j] + "'");
  return out;
}

ParamSignal ParamSignal::constant(std::vector<double> values) {
  ParamSignal s;
  s.width_ = values.size();
  s.times_ = {0.0};
  s.rows_ = {std::move(values)};
  return s;
}

ParamSignal ParamSignal::table(std::vector<double> times, std::vector<std::vector<double>> rows) {
  if (times.empty() || times.size() != rows.size())
    throw ValidationError("parameter table needs one row per sample time");
  for (std::size_t j = 1; j < times.size(); ++j)
    if (!(times[j] > times[j - 1]))
      throw ValidationError("parameter sample times must be strictly increasing");
  for (const auto& r : rows)
    if (r.size() != rows[0].size()) throw ValidationError("parameter rows differ in width");
  ParamSignal s;
  s.width_ = rows[0].size();
  s.times_ = std::move(times);
  s.rows_ = std::move(rows);
  return s;
}

std::span<const double> ParamSignal::at(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto j = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  return rows_[j];
}

std::pair<std::vector<double>, std::vector<std::vector<double>>> integrate_rk4(
    const VectorField& f, std::vector<double> x, double t0, double t1, double h) {
  if (!(t1 > t0)) throw ValidationError("need t1 > t0");
  if (!(h > 0.0) || h > t1 - t0) throw ValidationError("step must satisfy 0 < h <= t1 - t0");

  const double ratio = (t1 - t0) / h;
  auto steps = static_cast<std::size_t>(std::floor(ratio));
  const bool exact = ratio - static_cast<double>(steps) < 1e-9 * std::max(1.0, ratio) ||
                     std::ceil(ratio) - ratio < 1e-9 * std::max(1.0, ratio);
  if (exact) steps = static_cast<std::size_t>(std::llround(ratio));

  std::vector<double> times;
  for (std::size_t j = 0; j < steps; ++j) times.push_back(t0 + static_cast<double>(j) * h);
  times.push_back(exact ? t1 : t0 + static_cast<double>(steps) * h);
  if (!exact) times.push_back(t1);

  const auto n = x.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  std::vector<std::vector<double>> states{x};
  states.reserve(times.size());
  for (std::size_t j = 0; j + 1 < times.size(); ++j) {
    const double t = times[j];
    const double dt = times[j + 1] - t;
    f(t, x, k1);
    for (std::size_t c = 0; c < n; ++c) tmp[c] = x[c] + 0.5 * dt * k1[c];
    f(t + 0.5 * dt, tmp, k2);
    for (std::size_t c = 0; c < n; ++c) tmp[c] = x[c] + 0.5 * dt * k2[c];
    f(t + 0.5 * dt, tmp, k3);
    for (std::size_t c = 0; c < n; ++c) tmp[c] = x[c] + dt * k3[c];
    f(t + dt, tmp, k4);
    for (std::size_t c = 0; c < n; ++c) {
      x[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
      if (!std::isfinite(x[c]))
        throw EvalError("non-finite state at t=" + format_double(times[j + 1]));
    }
    states.push_back(x);
  }
  return {std::move(times), std::move(states)};
}

namespace {

VectorField field_of(const System& sys, const ParamSignal& params) {
  if (params.width() != sys.param_vars().size())
    throw BoundaryError("parameter signal has " + std::to_string(params.width()) +
                        " values, system has " + std::to_string(sys.param_vars().size()) +
                        " params");
  auto scope = std::make_shared<Scope>(
      std::vector<const std::vector<std::string>*>{&sys.state_vars(), &sys.param_vars()});
  return [&sys, &params, scope](double t, std::span<const double> x, std::span<double> dx) {
    scope->set(0, x);
    scope->set(1, params.at(t));
    for (std::size_t j = 0; j < dx.size(); ++j)
      dx[j] = eval_named(sys.field()[j], scope->env(), "field of '" + sys.state_vars()[j] + "'");
  };
}

Trajectory make_trajectory(const System& sys, std::vector<double> times,
                           std::vector<std::vector<double>> states) {
  Trajectory tr{sys.state_vars(), sys.output_vars(), std::move(times), std::move(states), {}};
  for (const auto& s : tr.values) tr.outputs.push_back(eval_readout(sys, s));
  return tr;
}

}  // namespace

Trajectory rk4_solve(const System& sys, std::vector<double> s0, const ParamSignal& params,
                     double t0, double t1, double h) {
  if (s0.size() != sys.state_vars().size())
    throw BoundaryError("initial state has the wrong length");
  auto [times, states] = integrate_rk4(field_of(sys, params), std::move(s0), t0, t1, h);
  return make_trajectory(sys, std::move(times), std::move(states));
}

ResidualReport check_residual(const System& sys, const Trajectory& traj,
                              const ParamSignal& params, double tol) {
  const auto n = traj.times.size();
  if (n < 3) throw ValidationError("residual check needs at least 3 grid points");
  const double h = traj.times[1] - traj.times[0];
  for (std::size_t j = 1; j + 1 < n; ++j)
    if (std::abs((traj.times[j + 1] - traj.times[j]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw ValidationError("residual check needs a uniform grid");

  auto f = field_of(sys, params);
  std::vector<double> dx(sys.state_vars().size());
  ResidualReport rep;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    f(traj.times[j], traj.values[j], dx);
    const double span = traj.times[j + 1] - traj.times[j - 1];
    for (std::size_t c = 0; c < dx.size(); ++c) {
      const double diff = (traj.values[j + 1][c] - traj.values[j - 1][c]) / span;
      const double r = std::abs(diff - dx[c]);
      if (r > rep.max_residual) {
        rep.max_residual = r;
        rep.index = j;
        rep.component = c;
      }
    }
  }
  rep.ok = rep.max_residual <= tol;
  return rep;
}

FunctorialityReport check_solve_functoriality(const Lens& lens, const System& sys,
                                              std::vector<double> s0,
                                              const ParamSignal& outer_params, double t0,
                                              double t1, double h, double tol) {
  FunctorialityReport rep;
  const auto composed = compose_lens_ode(lens, sys);
  rep.composed = rk4_solve(composed, s0, outer_params, t0, t1, h);

  if (outer_params.width() != lens.outer_params().size())
    throw BoundaryError("outer parameter signal has the wrong width");
  // Evaluate the lens backward map in the order of the system's params.
  std::vector<std::size_t> order;
  for (const auto& p : sys.param_vars())
    order.push_back(static_cast<std::size_t>(
        std::find(lens.inner_params().begin(), lens.inner_params().end(), p) -
        lens.inner_params().begin()));

  Scope state_scope({&sys.state_vars()});
  Scope wiring_scope({&lens.inner_outputs(), &lens.outer_params()});
  Scope field_scope({&sys.state_vars(), &sys.param_vars()});
  std::vector<double> outputs(sys.output_vars().size()), inner(sys.param_vars().size());
  // Inner outputs in the lens' order.
  std::vector<std::size_t> out_order;
  for (const auto& o : lens.inner_outputs())
    out_order.push_back(static_cast<std::size_t>(
        std::find(sys.output_vars().begin(), sys.output_vars().end(), o) -
        sys.output_vars().begin()));
  std::vector<double> lens_outputs(out_order.size());

  VectorField wired = [&](double t, std::span<const double> x, std::span<double> dx) {
    state_scope.set(0, x);
    for (std::size_t j = 0; j < outputs.size(); ++j)
      outputs[j] = eval_named(sys.readout()[j], state_scope.env(), "readout");
    for (std::size_t j = 0; j < out_order.size(); ++j) lens_outputs[j] = outputs[out_order[j]];
    wiring_scope.set(0, lens_outputs);
    wiring_scope.set(1, outer_params.at(t));
    for (std::size_t j = 0; j < inner.size(); ++j)
      inner[j] = eval_named(lens.bwd()[order[j]], wiring_scope.env(), "wiring");
    field_scope.set(0, x);
    field_scope.set(1, inner);
    for (std::size_t j = 0; j < dx.size(); ++j)
      dx[j] = eval_named(sys.field()[j], field_scope.env(), "field");
  };
  if (s0.size() != sys.state_vars().size())
    throw BoundaryError("initial state has the wrong length");
  auto [times, states] = integrate_rk4(wired, std::move(s0), t0, t1, h);
  rep.wired = make_trajectory(sys, std::move(times), std::move(states));

  for (std::size_t j = 0; j < rep.wired.values.size(); ++j)
    for (std::size_t c = 0; c < rep.wired.values[j].size(); ++c)
      rep.max_deviation = std::max(
          rep.max_deviation, std::abs(rep.wired.values[j][c] - rep.composed.values[j][c]));
  rep.ok = rep.max_deviation <= tol;
  return rep;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "time";
  for (const auto& v : traj.state_vars) out += "," + v;
  for (const auto& v : traj.output_vars) out += "," + v;
  out += "\n";
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    out += format_double(traj.times[j]);
    for (double v : traj.values[j]) out += "," + format_double(v);
    for (double v : traj.outputs[j]) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

}  // namespace lensdyn::ode
