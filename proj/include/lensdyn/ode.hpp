#pragma once

// Continuous-time doctrine on Euclidean state spaces with trivial parameter
// bundles. A system is a vector field ds/dt = field(s, p) together with a
// readout o = readout(s); lenses wire outputs into parameters by substitution.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lensdyn/expr.hpp"

namespace lensdyn::ode {

using expr::Expr;

class System {
 public:
  System(std::vector<std::string> state_vars, std::vector<std::string> output_vars,
         std::vector<std::string> param_vars, std::vector<Expr> readout,
         std::vector<Expr> field);

  const std::vector<std::string>& state_vars() const { return state_vars_; }
  const std::vector<std::string>& output_vars() const { return output_vars_; }
  const std::vector<std::string>& param_vars() const { return param_vars_; }
  // One expression per output var, over the state vars.
  const std::vector<Expr>& readout() const { return readout_; }
  // One expression per state var, over the state and param vars.
  const std::vector<Expr>& field() const { return field_; }

  friend bool operator==(const System&, const System&) = default;

 private:
  std::vector<std::string> state_vars_;
  std::vector<std::string> output_vars_;
  std::vector<std::string> param_vars_;
  std::vector<Expr> readout_;
  std::vector<Expr> field_;
};

// (inner params, inner outputs) ⇆ (outer params, outer outputs).
// fwd: one expression per outer output, over the inner outputs.
// bwd: one expression per inner param, over inner outputs ∪ outer params.
class Lens {
 public:
  Lens(std::vector<std::string> inner_outputs, std::vector<std::string> inner_params,
       std::vector<std::string> outer_outputs, std::vector<std::string> outer_params,
       std::vector<Expr> fwd, std::vector<Expr> bwd);
  static Lens identity(const System& sys);

  const std::vector<std::string>& inner_outputs() const { return inner_outputs_; }
  const std::vector<std::string>& inner_params() const { return inner_params_; }
  const std::vector<std::string>& outer_outputs() const { return outer_outputs_; }
  const std::vector<std::string>& outer_params() const { return outer_params_; }
  const std::vector<Expr>& fwd() const { return fwd_; }
  const std::vector<Expr>& bwd() const { return bwd_; }

  friend bool operator==(const Lens&, const Lens&) = default;

 private:
  std::vector<std::string> inner_outputs_;
  std::vector<std::string> inner_params_;
  std::vector<std::string> outer_outputs_;
  std::vector<std::string> outer_params_;
  std::vector<Expr> fwd_;
  std::vector<Expr> bwd_;
};

System compose_lens_ode(const Lens& lens, const System& sys);
// l2 after l1.
Lens compose_ode_lenses(const Lens& l1, const Lens& l2);
System tensor_ode(const System& a, const System& b);

std::vector<double> eval_field(const System& sys, std::span<const double> state,
                               std::span<const double> params);
std::vector<double> eval_readout(const System& sys, std::span<const double> state);

// Piecewise-constant parameter values: either a constant vector or a table of
// samples where the value at t is the last sample taken at or before t (the
// first sample before the table starts).
class ParamSignal {
 public:
  static ParamSignal constant(std::vector<double> values);
  static ParamSignal table(std::vector<double> times, std::vector<std::vector<double>> rows);

  std::size_t width() const { return width_; }
  std::span<const double> at(double t) const;

 private:
  std::size_t width_ = 0;
  std::vector<double> times_;
  std::vector<std::vector<double>> rows_;
};

struct Trajectory {
  std::vector<std::string> state_vars;
  std::vector<std::string> output_vars;
  std::vector<double> times;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> outputs;
};

// Right-hand side callback for the integrator: dx = f(t, x).
using VectorField =
    std::function<void(double t, std::span<const double> x, std::span<double> dx)>;

// Classical fixed-step RK4 on [t0, t1]; the last step is shortened to land on
// t1. Returns (times, states).
std::pair<std::vector<double>, std::vector<std::vector<double>>> integrate_rk4(
    const VectorField& f, std::vector<double> x0, double t0, double t1, double h);

Trajectory rk4_solve(const System& sys, std::vector<double> s0, const ParamSignal& params,
                     double t0, double t1, double h);

struct ResidualReport {
  bool ok = true;
  double max_residual = 0.0;
  std::size_t index = 0;      // grid index of the worst residual
  std::size_t component = 0;  // state var of the worst residual
  explicit operator bool() const { return ok; }
};

// Compares central differences of the trajectory with the field at interior
// grid points.
ResidualReport check_residual(const System& sys, const Trajectory& traj,
                              const ParamSignal& params, double tol);

struct FunctorialityReport {
  bool ok = true;
  double max_deviation = 0.0;
  Trajectory composed;  // solve the substituted system
  Trajectory wired;     // solve the inner system, evaluating the wiring at each stage
  explicit operator bool() const { return ok; }
};

FunctorialityReport check_solve_functoriality(const Lens& lens, const System& sys,
                                              std::vector<double> s0,
                                              const ParamSignal& outer_params, double t0,
                                              double t1, double h, double tol);

// CSV with header time,<state vars>,<output vars>.
std::string trajectory_csv(const Trajectory& traj);
std::string format_double(double v);

}  // namespace lensdyn::ode
