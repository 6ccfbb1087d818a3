#include "usv/protocols.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "usv/geometry.hpp"

namespace usv::protocols {

Graph Graph::complete(std::size_t n) {
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

Graph Graph::line(std::size_t n) {
  Graph g(n);
  for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph Graph::from_edges(std::size_t n,
                        std::span<const std::pair<std::size_t, std::size_t>> edges) {
  Graph g(n);
  for (const auto& [a, b] : edges) g.add_edge(a, b);
  return g;
}

void Graph::add_edge(std::size_t a, std::size_t b) {
  if (a >= adj_.size() || b >= adj_.size()) throw std::out_of_range("graph: vertex out of range");
  if (a == b) throw std::invalid_argument("graph: self loop");
  adj_[a].insert(b);
  adj_[b].insert(a);
}

bool Graph::symmetric() const {
  for (std::size_t i = 0; i < adj_.size(); ++i)
    for (std::size_t j : adj_[i])
      if (j >= adj_.size() || !adj_[j].count(i)) return false;
  return true;
}

bool Graph::connected() const {
  if (adj_.empty()) return true;
  std::vector<bool> seen(adj_.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j : adj_[i]) {
      if (!seen[j]) {
        seen[j] = true;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count == adj_.size();
}

std::vector<std::pair<std::size_t, std::size_t>> Graph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < adj_.size(); ++i)
    for (std::size_t j : adj_[i])
      if (i < j) out.emplace_back(i, j);
  return out;
}

void SwarmConfig::validate(bool decentralized) const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("swarm: " + m); };
  if (n < 3) fail("at least 3 vessels are required");
  const std::pair<const char*, double> positive[] = {
      {"mu", mu},         {"gamma1", gamma1}, {"gamma2", gamma2}, {"gamma3", gamma3},
      {"beta1", beta1},   {"beta2", beta2},   {"rho_o", rho_o},   {"rho_min", rho_min}};
  for (const auto& [name, value] : positive) {
    if (!(value > 0.0) || !std::isfinite(value)) fail(std::string(name) + " must be positive");
  }
  if (comm_graph.size() != 0 && comm_graph.size() != n) fail("comm_graph size differs from n");
  if (!comm_graph.symmetric()) fail("comm_graph must be undirected");
  for (std::size_t l : leader_set)
    if (l >= n) fail("leader index out of range");
  if (decentralized) {
    if (comm_graph.size() != n) fail("decentralized mode needs a comm_graph");
    if (!comm_graph.connected()) fail("comm_graph is not connected");
    if (leader_set.empty()) fail("leader_set is empty");
  }
}

std::vector<std::size_t> proximity_neighbors(std::span<const Vec2> x, std::size_t i, double mu) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j != i && (x[i] - x[j]).norm() < mu) out.push_back(j);
  }
  return out;
}

Vec2 surrounding_control(std::span<const Vec2> x, std::size_t i, const Vec2& target_est,
                         const SwarmConfig& cfg) {
  Vec2 u = cfg.gamma2 * (target_est - x[i]);
  const double mu2 = cfg.mu * cfg.mu;
  for (std::size_t j : proximity_neighbors(x, i, cfg.mu)) {
    const Vec2 xij = x[i] - x[j];
    u += cfg.gamma1 * (mu2 - xij.squaredNorm()) * xij;
  }
  return u;
}

std::vector<Vec2> estimator_rate(std::span<const Vec2> y, const Vec2& x_o,
                                 const SwarmConfig& cfg) {
  std::vector<Vec2> dy(y.size(), Vec2::Zero());
  for (std::size_t i = 0; i < y.size(); ++i) {
    Vec2 s = Vec2::Zero();
    for (std::size_t j : cfg.comm_graph.neighbors(i)) s += y[j] - y[i];
    if (cfg.leader_set.count(i)) s += x_o - y[i];
    dy[i] = cfg.gamma3 * s;
  }
  return dy;
}

EstimatorState estimator_step(const EstimatorState& e, const Vec2& x_o, const SwarmConfig& cfg,
                              double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("estimator_step: dt must be positive");
  const std::size_t n = e.y.size();
  auto axpy = [n](const std::vector<Vec2>& a, const std::vector<Vec2>& b, double s) {
    std::vector<Vec2> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + s * b[i];
    return out;
  };
  const auto k1 = estimator_rate(e.y, x_o, cfg);
  const auto k2 = estimator_rate(axpy(e.y, k1, 0.5 * dt), x_o, cfg);
  const auto k3 = estimator_rate(axpy(e.y, k2, 0.5 * dt), x_o, cfg);
  const auto k4 = estimator_rate(axpy(e.y, k3, dt), x_o, cfg);
  EstimatorState out{std::vector<Vec2>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.y[i] = e.y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

std::vector<std::size_t> angular_neighbors(std::span<const double> thetas, std::size_t i,
                                           std::size_t n) {
  const double gap = kTwoPi / static_cast<double>(n);
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    if (j == i) continue;
    if (std::abs(geometry::wrapped_diff(thetas[i], thetas[j]).value()) < gap - kAngleTol) out.push_back(j);
  }
  return out;
}

std::optional<PolarCommand> equal_surround_control(const PolarState& ps, std::size_t i,
                                                   std::span<const double> thetas,
                                                   const SwarmConfig& cfg) {
  if (!(ps.rho > cfg.rho_min)) return std::nullopt;
  const double gap = kTwoPi / static_cast<double>(cfg.n);
  PolarCommand c;
  c.eta_r = cfg.beta1 * (cfg.rho_o - ps.rho);
  for (std::size_t j : angular_neighbors(thetas, i, cfg.n)) {
    const double tij = geometry::wrapped_diff(thetas[i], thetas[j]).value();
    // Coincident angles: lower index is pushed forward, higher index back.
    const double sign = tij > 0.0 ? 1.0 : (tij < 0.0 ? -1.0 : (i < j ? 1.0 : -1.0));
    c.omega_r += cfg.beta2 * (gap - std::abs(tij)) * sign;
  }
  return c;
}

double lyapunov_V(std::span<const Vec2> x, const Vec2& x_o, const SwarmConfig& cfg) {
  const double mu2 = cfg.mu * cfg.mu;
  double v1 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (i == j) continue;
      const double d2 = (x[i] - x[j]).squaredNorm();
      if (d2 < mu2) v1 += (d2 - mu2) * (d2 - mu2);
    }
  }
  double v2 = 0.0;
  for (const auto& xi : x) v2 += (x_o - xi).squaredNorm();
  return 0.25 * cfg.gamma1 * v1 + cfg.gamma2 * v2;
}

double lyapunov_P(std::span<const double> thetas, const SwarmConfig& cfg) {
  const double gap = kTwoPi / static_cast<double>(cfg.n);
  double p = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (std::size_t j = 0; j < thetas.size(); ++j) {
      if (i == j) continue;
      const double a = std::abs(geometry::wrapped_diff(thetas[i], thetas[j]).value());
      if (a < gap - kAngleTol) p += 0.5 * cfg.beta2 * (a - gap) * (a - gap);
    }
  }
  return p;
}

}  // namespace usv::protocols
