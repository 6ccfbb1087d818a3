#pragma once

#include <set>
#include <span>
#include <vector>

#include "usv/protocols.hpp"
#include "usv/types.hpp"

// Reference computations used to cross-check the library. They deliberately
// avoid the library's own algorithms.
namespace usv::oracles {

struct SimplexResult {
  double distance = 0.0;
  std::vector<double> weights;  // convex weights of the closest point
};

/// min over convex weights of ||x_o - sum w_k p_k||: exhaustive grid on the
/// simplex followed by pairwise weight-transfer pattern search.
SimplexResult simplex_distance(const Vec2& x_o, std::span<const Vec2> points,
                               int grid = 12, double final_step = 1e-13);

/// Containment verdict of the simplex oracle (distance <= 1e-9).
bool simplex_contains(const Vec2& x_o, std::span<const Vec2> points);

/// Smallest eigenvalue of L + diag(leader indicators).
double grounded_laplacian_lambda_min(const protocols::Graph& g, const std::set<std::size_t>& leaders);

/// Central finite-difference gradient of protocols::lyapunov_V w.r.t. x_i.
Vec2 fd_gradient_V(std::span<const Vec2> x, std::size_t i, const Vec2& x_o,
                   const protocols::SwarmConfig& cfg, double h = 1e-5);

/// Ordered-pair potential sum with angles reduced through atan2(sin, cos).
double brute_force_P(std::span<const double> thetas, double beta2, std::size_t n);

}  // namespace usv::oracles
