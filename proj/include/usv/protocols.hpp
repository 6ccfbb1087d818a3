#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "usv/types.hpp"

namespace usv::protocols {

/// Undirected communication graph stored as adjacency sets.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n) {}
  static Graph complete(std::size_t n);
  /// 0 - 1 - ... - (n-1)
  static Graph line(std::size_t n);
  static Graph from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges);

  void add_edge(std::size_t a, std::size_t b);
  std::size_t size() const { return adj_.size(); }
  const std::set<std::size_t>& neighbors(std::size_t i) const { return adj_.at(i); }
  bool symmetric() const;
  bool connected() const;
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

 private:
  std::vector<std::set<std::size_t>> adj_;
};

struct SwarmConfig {
  std::size_t n = 3;
  double mu = 10.0;
  double gamma1 = 0.0006;
  double gamma2 = 0.03;
  double gamma3 = 1.0;
  double beta1 = 0.13;
  double beta2 = 0.06;
  double rho_o = 10.0;
  double rho_min = 0.1;
  Graph comm_graph;
  std::set<std::size_t> leader_set;

  /// Throws std::invalid_argument describing the first violated condition.
  /// Graph connectivity and a nonempty leader set are only required when
  /// `decentralized` is set.
  void validate(bool decentralized) const;
};

struct EstimatorState {
  std::vector<Vec2> y;
};

struct PolarState {
  double rho = 0.0;
  double theta = 0.0;  // unwrapped
};

struct PolarCommand {
  double eta_r = 0.0;
  double omega_r = 0.0;
};

std::vector<std::size_t> proximity_neighbors(std::span<const Vec2> x, std::size_t i, double mu);

Vec2 surrounding_control(std::span<const Vec2> x, std::size_t i, const Vec2& target_est,
                         const SwarmConfig& cfg);

/// Right-hand side of the consensus estimator.
std::vector<Vec2> estimator_rate(std::span<const Vec2> y, const Vec2& x_o, const SwarmConfig& cfg);

EstimatorState estimator_step(const EstimatorState& e, const Vec2& x_o, const SwarmConfig& cfg,
                              double dt);

/// Slack on the strict |theta_ij| < 2 pi / N test, so that equally spaced
/// angles given in degrees are not neighbors through rounding.
inline constexpr double kAngleTol = 1e-12;

std::vector<std::size_t> angular_neighbors(std::span<const double> thetas, std::size_t i,
                                           std::size_t n);

/// Equal-spacing polar law. Returns nullopt when rho <= cfg.rho_min.
std::optional<PolarCommand> equal_surround_control(const PolarState& ps, std::size_t i,
                                                   std::span<const double> thetas,
                                                   const SwarmConfig& cfg);

double lyapunov_V(std::span<const Vec2> x, const Vec2& x_o, const SwarmConfig& cfg);

double lyapunov_P(std::span<const double> thetas, const SwarmConfig& cfg);

}  // namespace usv::protocols
