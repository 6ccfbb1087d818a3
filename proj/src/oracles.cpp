#include "usv/oracles.hpp"

#include <cmath>
#include <Eigen/Dense>

namespace usv::oracles {

namespace {

double objective(const Vec2& x_o, std::span<const Vec2> pts, const std::vector<double>& w) {
  Vec2 s = Vec2::Zero();
  for (std::size_t k = 0; k < pts.size(); ++k) s += w[k] * pts[k];
  return (x_o - s).squaredNorm();
}

void grid_search(const Vec2& x_o, std::span<const Vec2> pts, int grid, std::size_t k, int left,
                 std::vector<int>& counts, double& best, std::vector<double>& best_w) {
  if (k + 1 == pts.size()) {
    counts[k] = left;
    std::vector<double> w(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) w[j] = static_cast<double>(counts[j]) / grid;
    const double f = objective(x_o, pts, w);
    if (f < best) {
      best = f;
      best_w = w;
    }
    return;
  }
  for (int c = 0; c <= left; ++c) {
    counts[k] = c;
    grid_search(x_o, pts, grid, k + 1, left - c, counts, best, best_w);
  }
}

}  // namespace

SimplexResult simplex_distance(const Vec2& x_o, std::span<const Vec2> points, int grid,
                               double final_step) {
  const std::size_t n = points.size();
  SimplexResult res;
  if (n == 0) return res;
  std::vector<int> counts(n, 0);
  double best = INFINITY;
  std::vector<double> w;
  grid_search(x_o, points, grid, 0, grid, counts, best, w);

  // Move weight between pairs while it helps; halve the step when stuck.
  for (double step = 1.0 / grid; step >= final_step; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          if (a == b) continue;
          const double d = std::min(step, w[a]);
          if (d <= 0.0) continue;
          w[a] -= d;
          w[b] += d;
          const double f = objective(x_o, points, w);
          if (f < best) {
            best = f;
            improved = true;
          } else {
            w[a] += d;
            w[b] -= d;
          }
        }
      }
    }
  }
  res.distance = std::sqrt(best);
  res.weights = w;
  return res;
}

bool simplex_contains(const Vec2& x_o, std::span<const Vec2> points) {
  return simplex_distance(x_o, points).distance <= 1e-9;
}

double grounded_laplacian_lambda_min(const protocols::Graph& g,
                                     const std::set<std::size_t>& leaders) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [a, b] : g.edges()) {
    const auto i = static_cast<Eigen::Index>(a), j = static_cast<Eigen::Index>(b);
    m(i, j) -= 1.0;
    m(j, i) -= 1.0;
    m(i, i) += 1.0;
    m(j, j) += 1.0;
  }
  for (std::size_t l : leaders) m(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l)) += 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvalues().minCoeff();
}

Vec2 fd_gradient_V(std::span<const Vec2> x, std::size_t i, const Vec2& x_o,
                   const protocols::SwarmConfig& cfg, double h) {
  std::vector<Vec2> p(x.begin(), x.end());
  Vec2 g;
  for (int c = 0; c < 2; ++c) {
    const double keep = p[i](c);
    p[i](c) = keep + h;
    const double up = protocols::lyapunov_V(p, x_o, cfg);
    p[i](c) = keep - h;
    const double down = protocols::lyapunov_V(p, x_o, cfg);
    p[i](c) = keep;
    g(c) = (up - down) / (2.0 * h);
  }
  return g;
}

double brute_force_P(std::span<const double> thetas, double beta2, std::size_t n) {
  const double gap = 2.0 * std::acos(-1.0) / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (std::size_t j = 0; j < thetas.size(); ++j) {
      if (i == j) continue;
      const double d = thetas[i] - thetas[j];
      const double a = std::abs(std::atan2(std::sin(d), std::cos(d)));
      if (a < gap) total += beta2 / 2.0 * (a - gap) * (a - gap);
    }
  }
  return total;
}

}  // namespace usv::oracles
