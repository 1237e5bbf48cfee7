#pragma once

#include <functional>
#include <vector>

#include "viab/grid.hpp"
#include "viab/levelset.hpp"
#include "viab/model.hpp"

namespace viab {

/// H(x, costate) with costate components ordered like the grid axes.
using HamiltonianFn = std::function<double(const Point& x, const Point& costate)>;

/// Controlled vector field f(x, w) in grid-axis order.
using DynamicsFn = std::function<Point(const Point& x, const Control& w)>;

enum class Phase { short_term, long_term };

/// Quality term of the (P, q, I) Hamiltonian.
///   exact_max:     delta q z_q + max(-z_q sqrt(s_max), 0), the maximum over s in [0, s_max]
///   fixed_investment: z_q (sqrt(s_max) - delta q), kept for comparison runs
enum class Hamiltonian3Form { exact_max, fixed_investment };

/// Closed-form H(X, z) = max over (p, U) of -<f(X, w), z> for the (P, I) system
/// with q frozen at q_fixed:
///   (theta I - P) z_I + (beta I + gamma P) z_P + max{(z_I - alpha z_P) D, 0}
/// where D ranges over the demand at the price endpoints with U = U_max. The
/// max also covers the p_max endpoint so it stays exact if demand goes negative.
class Hamiltonian2 {
 public:
  explicit Hamiltonian2(const ModelParams& params);
  double operator()(const Point& x, const Point& z) const;

 private:
  ModelParams params_;
  double demand_low_price_;   // demand at (p_min, U_max, q_fixed)
  double demand_high_price_;  // demand at (p_max, U_max, q_fixed)
};

/// Closed-form Hamiltonian of the (P, q, I) system with U in [0, U_fixed].
class Hamiltonian3 {
 public:
  explicit Hamiltonian3(const ModelParams& params, Hamiltonian3Form form = Hamiltonian3Form::exact_max);
  double operator()(const Point& x, const Point& z) const;

 private:
  ModelParams params_;
  Hamiltonian3Form form_;
  double sqrt_s_max_;
};

double hamiltonian2(const State2& x, const Point& z, const ModelParams& params);
double hamiltonian3(const State3& x, const Point& z, const ModelParams& params,
                    Hamiltonian3Form form = Hamiltonian3Form::exact_max);

/// Evenly spaced samples on every active control axis, box vertices always
/// included, ordered lexicographically by (price, advertising, investment) index.
std::vector<Control> control_lattice(const ControlBox& box, std::size_t samples_per_axis);

/// max over the sampled control lattice of -<f(x, w), z>.
double hamiltonian_bruteforce(const Point& x, const Point& z, const DynamicsFn& f,
                              const std::vector<Control>& lattice, std::size_t dim);

double hamiltonian_bruteforce(const Point& x, const Point& z, const ModelParams& params, Phase phase,
                              std::size_t samples_per_axis);

DynamicsFn model_dynamics(const ModelParams& params, Phase phase);

/// Per-axis constants C_i >= sup |f_i| over the domain box and admissible
/// controls, from term-wise magnitude bounds of the affine dynamics. The
/// quality rate sqrt(s) - delta q is bounded as one term by endpoint evaluation.
Point dissipation_bounds(const BoxSet& domain, const ModelParams& params, Phase phase);

/// Node-local bound max_w |f_i(x, w)| over the control vertices, used by the
/// local Lax-Friedrichs variant. Exact because f is affine in each control monomial.
Point local_dissipation(const Point& x, const ModelParams& params, Phase phase);

}  // namespace viab
