#include "viab/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace viab {

Hamiltonian2::Hamiltonian2(const ModelParams& params)
    : params_(params),
      demand_low_price_(demand(params.p_min, params.U_max, params.q_fixed, params)),
      demand_high_price_(demand(params.p_max, params.U_max, params.q_fixed, params)) {}

double Hamiltonian2::operator()(const Point& x, const Point& z) const {
  const double P = x[0], I = x[1];
  const double zP = z[0], zI = z[1];
  const double kappa = zI - params_.alpha * zP;
  const double forcing = std::max({kappa * demand_low_price_, kappa * demand_high_price_, 0.0});
  return (params_.theta * I - P) * zI + (params_.beta * I + params_.gamma * P) * zP + forcing;
}

Hamiltonian3::Hamiltonian3(const ModelParams& params, Hamiltonian3Form form)
    : params_(params), form_(form), sqrt_s_max_(std::sqrt(params.s_max)) {}

double Hamiltonian3::operator()(const Point& x, const Point& z) const {
  const double P = x[0], q = x[1], I = x[2];
  const double zP = z[0], zq = z[1], zI = z[2];
  const double kappa = zI - params_.alpha * zP;
  const double low = demand(params_.p_min, params_.U_fixed, q, params_);
  const double base = (params_.theta * I - P) * zI + (params_.beta * I + params_.gamma * P) * zP;
  if (form_ == Hamiltonian3Form::fixed_investment)
    return base + std::max(kappa * low, 0.0) + zq * (sqrt_s_max_ - params_.delta * q);
  const double high = demand(params_.p_max, params_.U_fixed, q, params_);
  return base + std::max({kappa * low, kappa * high, 0.0}) + params_.delta * q * zq +
         std::max(-zq * sqrt_s_max_, 0.0);
}

double hamiltonian2(const State2& x, const Point& z, const ModelParams& params) {
  return Hamiltonian2(params)(to_point(x), z);
}

double hamiltonian3(const State3& x, const Point& z, const ModelParams& params,
                    Hamiltonian3Form form) {
  return Hamiltonian3(params, form)(to_point(x), z);
}

std::vector<Control> control_lattice(const ControlBox& box, std::size_t samples_per_axis) {
  if (samples_per_axis < 2) throw std::invalid_argument("control lattice needs >= 2 samples per axis");
  std::array<std::vector<double>, 3> axes;
  for (std::size_t a = 0; a < 3; ++a) {
    if (!box.active[a]) {
      axes[a] = {box.lower[a]};
      continue;
    }
    for (std::size_t k = 0; k < samples_per_axis; ++k) {
      // Endpoints are assigned directly so vertices are exact.
      const double t = static_cast<double>(k) / static_cast<double>(samples_per_axis - 1);
      axes[a].push_back(k + 1 == samples_per_axis ? box.upper[a]
                                                  : box.lower[a] + t * (box.upper[a] - box.lower[a]));
    }
  }
  std::vector<Control> lattice;
  lattice.reserve(axes[0].size() * axes[1].size() * axes[2].size());
  for (double p : axes[0])
    for (double U : axes[1])
      for (double s : axes[2]) lattice.push_back({p, U, s});
  return lattice;
}

double hamiltonian_bruteforce(const Point& x, const Point& z, const DynamicsFn& f,
                              const std::vector<Control>& lattice, std::size_t dim) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Control& w : lattice) {
    const Point v = f(x, w);
    double dot = 0.0;
    for (std::size_t i = 0; i < dim; ++i) dot += v[i] * z[i];
    best = std::max(best, -dot);
  }
  return best;
}

DynamicsFn model_dynamics(const ModelParams& params, Phase phase) {
  if (phase == Phase::short_term)
    return [params](const Point& x, const Control& w) { return to_point(dynamics2(to_state2(x), w, params)); };
  return [params](const Point& x, const Control& w) { return to_point(dynamics3(to_state3(x), w, params)); };
}

double hamiltonian_bruteforce(const Point& x, const Point& z, const ModelParams& params, Phase phase,
                              std::size_t samples_per_axis) {
  const ControlBox box =
      phase == Phase::short_term ? ControlBox::short_term(params) : ControlBox::long_term(params);
  return hamiltonian_bruteforce(x, z, model_dynamics(params, phase), control_lattice(box, samples_per_axis),
                                phase == Phase::short_term ? 2 : 3);
}

namespace {

double max_abs(double lo, double hi) { return std::max(std::abs(lo), std::abs(hi)); }

// Largest |demand| over the control vertices and the listed quality levels.
double demand_magnitude(const ModelParams& params, double U_ceiling, std::initializer_list<double> qs) {
  double m = 0.0;
  for (double q : qs)
    for (double p : {params.p_min, params.p_max}) m = std::max(m, std::abs(demand(p, U_ceiling, q, params)));
  return m;
}

}  // namespace

Point dissipation_bounds(const BoxSet& domain, const ModelParams& params, Phase phase) {
  const std::size_t iP = 0;
  const std::size_t iI = phase == Phase::short_term ? 1 : 2;
  if (domain.dim != (phase == Phase::short_term ? 2u : 3u))
    throw std::invalid_argument("dissipation_bounds: domain dimension does not match the phase");
  const double Pm = max_abs(domain.lower[iP], domain.upper[iP]);
  const double Im = max_abs(domain.lower[iI], domain.upper[iI]);
  double Dm = 0.0;
  if (phase == Phase::short_term)
    Dm = demand_magnitude(params, params.U_max, {params.q_fixed});
  else
    Dm = demand_magnitude(params, params.U_fixed, {domain.lower[1], domain.upper[1]});

  Point C{};
  C[iP] = params.alpha * Dm + params.beta * Im + params.gamma * Pm;
  C[iI] = Pm + Dm + params.theta * Im;
  if (phase == Phase::long_term) {
    const double root = std::sqrt(params.s_max);
    double Cq = 0.0;
    for (double s : {0.0, root})
      for (double q : {domain.lower[1], domain.upper[1]}) Cq = std::max(Cq, std::abs(s - params.delta * q));
    C[1] = Cq;
  }
  return C;
}

Point local_dissipation(const Point& x, const ModelParams& params, Phase phase) {
  const ControlBox box =
      phase == Phase::short_term ? ControlBox::short_term(params) : ControlBox::long_term(params);
  const DynamicsFn f = model_dynamics(params, phase);
  Point C{};
  for (const Control& w : control_lattice(box, 2)) {
    const Point v = f(x, w);
    for (std::size_t i = 0; i < kMaxDim; ++i) C[i] = std::max(C[i], std::abs(v[i]));
  }
  return C;
}

}  // namespace viab
