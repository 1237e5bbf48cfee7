#pragma once

#include <array>

#include "viab/grid.hpp"

namespace viab {

enum class DemandVariant { linear, quadratic };

/// Production-inventory-quality constants. Defaults are the reference
/// calibration (rho = 0.2, a = 20, ..., price band [75, 150]).
struct ModelParams {
  double rho = 0.2;
  double a = 20.0;
  double b = 0.2;
  double c = 0.3;
  double theta = 0.1;  // inventory decay
  double delta = 0.2;  // quality decay
  double alpha = 0.8;
  double beta = 0.1;
  double gamma = 0.1;
  double U_max = 1.0;
  double p_min = 75.0;
  double p_max = 150.0;
  double s_max = 100.0;
  double q_fixed = 40.0;  // frozen quality for the (P, I) system
  double U_fixed = 1.0;   // advertising ceiling for the (P, q, I) system
  double r = 0.04;        // listed with the calibration; only used as an optional discount override
  DemandVariant demand_variant = DemandVariant::linear;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

  /// Throws ConfigError on negative coefficients, empty control bands or alpha <= gamma.
  void validate() const;
};

/// Short-term state (production rate, inventory level).
struct State2 {
  double P = 0.0;
  double I = 0.0;
};

/// Long-term state (production rate, quality level, inventory level).
struct State3 {
  double P = 0.0;
  double q = 0.0;
  double I = 0.0;
};

/// Price, advertising effort and quality investment. The short-term system
/// ignores s; the long-term system takes U in [0, U_fixed].
struct Control {
  double p = 0.0;
  double U = 0.0;
  double s = 0.0;

  friend bool operator==(const Control&, const Control&) = default;
};

double demand(double p, double U, double q, const ModelParams& params);

State2 dynamics2(const State2& x, const Control& w, const ModelParams& params);

/// Throws std::invalid_argument for s < 0.
State3 dynamics3(const State3& x, const Control& w, const ModelParams& params);

struct Equilibrium2 {
  State2 state;
  bool stable = false;
  double trace = 0.0;
  double det = 0.0;
};

/// Rest point of dynamics2 under a constant control, solved from f = 0, with
/// the trace/determinant test on the constant Jacobian [[-gamma, -beta], [1, -theta]].
Equilibrium2 equilibrium2(const Control& w, const ModelParams& params);

// Grid-facing adapters: State2 <-> (P, I), State3 <-> (P, q, I).
inline Point to_point(const State2& x) { return {x.P, x.I, 0.0}; }
inline Point to_point(const State3& x) { return {x.P, x.q, x.I}; }
inline State2 to_state2(const Point& x) { return {x[0], x[1]}; }
inline State3 to_state3(const Point& x) { return {x[0], x[1], x[2]}; }

/// Vertices and optional interior samples of an admissible control box.
struct ControlBox {
  std::array<double, 3> lower{};  // (p, U, s)
  std::array<double, 3> upper{};
  std::array<bool, 3> active{};   // axes that vary; inactive axes sit at `lower`

  static ControlBox short_term(const ModelParams& params);  // (p, U), s = 0
  static ControlBox long_term(const ModelParams& params);   // (p, U, s), U <= U_fixed
};

}  // namespace viab
