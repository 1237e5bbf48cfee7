#include "viab/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "viab/errors.hpp"

namespace viab {

void ModelParams::validate() const {
  const std::pair<const char*, double> nonneg[] = {
      {"rho", rho},     {"a", a},         {"b", b},         {"c", c},
      {"theta", theta}, {"delta", delta}, {"alpha", alpha}, {"beta", beta},
      {"gamma", gamma}, {"p_min", p_min}, {"q_fixed", q_fixed}, {"U_fixed", U_fixed}};
  for (const auto& [name, value] : nonneg) {
    if (!std::isfinite(value)) throw ConfigError(std::string("model.") + name + " is not finite");
    if (value < 0.0) throw ConfigError(std::string("model.") + name + " must be >= 0");
  }
  if (!(p_max > p_min)) throw ConfigError("model.p_max must exceed model.p_min");
  if (!(U_max > 0.0)) throw ConfigError("model.U_max must be > 0");
  if (!(s_max > 0.0)) throw ConfigError("model.s_max must be > 0");
  if (!(alpha > gamma)) throw ConfigError("model: production response requires alpha > gamma");
}

double demand(double p, double U, double q, const ModelParams& params) {
  const double price_term =
      params.demand_variant == DemandVariant::quadratic ? params.b * p * p : params.b * p;
  return params.rho * U * (params.a - price_term + params.c * q);
}

State2 dynamics2(const State2& x, const Control& w, const ModelParams& params) {
  const double D = demand(w.p, w.U, params.q_fixed, params);
  return {params.alpha * D - params.beta * x.I - params.gamma * x.P, x.P - D - params.theta * x.I};
}

State3 dynamics3(const State3& x, const Control& w, const ModelParams& params) {
  if (w.s < 0.0) throw std::invalid_argument("dynamics3: quality investment s must be >= 0");
  const double D = demand(w.p, w.U, x.q, params);
  return {params.alpha * D - params.beta * x.I - params.gamma * x.P,
          std::sqrt(w.s) - params.delta * x.q, x.P - D - params.theta * x.I};
}

Equilibrium2 equilibrium2(const Control& w, const ModelParams& params) {
  const double denom = params.beta + params.gamma * params.theta;
  if (denom == 0.0) throw std::domain_error("equilibrium2: beta + gamma*theta = 0, singular system");
  const double M = demand(w.p, w.U, params.q_fixed, params);
  Equilibrium2 eq;
  // From I' = 0: P = M + theta I. Substituting into P' = 0 gives
  // (alpha - gamma) M = (beta + gamma theta) I.
  eq.state.I = (params.alpha - params.gamma) * M / denom;
  eq.state.P = M * (params.beta + params.theta * params.alpha) / denom;
  eq.trace = -(params.gamma + params.theta);
  eq.det = params.gamma * params.theta + params.beta;
  eq.stable = eq.trace < 0.0 && eq.det > 0.0;
  return eq;
}

ControlBox ControlBox::short_term(const ModelParams& params) {
  ControlBox box;
  box.lower = {params.p_min, 0.0, 0.0};
  box.upper = {params.p_max, params.U_max, 0.0};
  box.active = {true, true, false};
  return box;
}

ControlBox ControlBox::long_term(const ModelParams& params) {
  ControlBox box;
  box.lower = {params.p_min, 0.0, 0.0};
  box.upper = {params.p_max, params.U_fixed, params.s_max};
  box.active = {true, params.U_fixed > 0.0, true};
  return box;
}

}  // namespace viab
