#include "usv/cli/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace usv::cli {

using nlohmann::json;

namespace {

json vec(const Vec2& v) { return json::array({v.x(), v.y()}); }

const char* kind_name(engine::TargetTrajectory::Kind k) {
  switch (k) {
    case engine::TargetTrajectory::Kind::Static:
      return "static";
    case engine::TargetTrajectory::Kind::ConstantVelocity:
      return "constant-velocity";
    case engine::TargetTrajectory::Kind::Waypoints:
      return "waypoints";
  }
  return "static";
}

// Typed access with the dotted field path in every error.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("field '" + join(key) + "': " + what);
  }

  std::string join(const std::string& key) const {
    if (path_.empty()) return key;
    return key.empty() ? path_ : path_ + "." + key;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  void only(std::initializer_list<const char*> keys) const {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j_.items()) {
      if (!allowed.count(k)) fail(k, "unknown key");
    }
  }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "expected a finite number");
    return d;
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    const bool ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    if (!ok) fail(key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  Vec2 pair(const std::string& key, const Vec2& fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(key, "expected [number, number]");
    }
    return Vec2(v[0].get<double>(), v[1].get<double>());
  }

  Reader child(const std::string& key) const { return Reader(j_.at(key), join(key)); }
  const json& raw(const std::string& key) const { return j_.at(key); }

 private:
  const json& j_;
  std::string path_;
};

}  // namespace

json scenario_to_json(const engine::Scenario& sc) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = sc.name;
  j["approach"] = engine::to_string(sc.approach);
  j["regulator"] = engine::to_string(sc.regulator);
  j["duration"] = sc.duration;
  j["dt_phys"] = sc.dt_phys;
  j["dt_ctrl"] = sc.dt_ctrl;
  j["dt_reg"] = sc.dt_reg;
  j["seed"] = sc.seed;

  json vessels = json::array();
  for (const auto& s : sc.vessels) {
    vessels.push_back({{"x", s.position.x()},
                       {"y", s.position.y()},
                       {"heading_deg", rad_to_deg(s.heading)},
                       {"surge", s.surge},
                       {"sway", s.sway},
                       {"yaw_rate_deg", rad_to_deg(s.yaw_rate)}});
  }
  j["vessels"] = vessels;
  j["placement"] = {{"count", sc.random_count},
                    {"area", json::array({sc.area.lo.x(), sc.area.lo.y(), sc.area.hi.x(),
                                          sc.area.hi.y()})}};

  json wps = json::array();
  for (const auto& w : sc.target.waypoints) {
    wps.push_back({{"x", w.position.x()}, {"y", w.position.y()}, {"speed", w.speed}});
  }
  j["target"] = {{"kind", kind_name(sc.target.kind)},
                 {"start", vec(sc.target.start)},
                 {"velocity", vec(sc.target.velocity)},
                 {"waypoints", wps}};

  const auto& sw = sc.swarm;
  json edges = json::array();
  for (const auto& [a, b] : sw.comm_graph.edges()) edges.push_back(json::array({a, b}));
  j["swarm"] = {{"mu", sw.mu},         {"gamma1", sw.gamma1}, {"gamma2", sw.gamma2},
                {"gamma3", sw.gamma3}, {"beta1", sw.beta1},   {"beta2", sw.beta2},
                {"rho_o", sw.rho_o},   {"rho_min", sw.rho_min},
                {"comm_graph", edges}, {"leaders", json(sw.leader_set)}};

  j["gains"] = {{"kappa1", sc.gains.kappa1()},
                {"kappa2", sc.gains.kappa2()},
                {"kappa3", sc.gains.kappa3()},
                {"kappa4", sc.gains.kappa4()}};

  const auto& p = sc.params;
  j["dynamics"] = {{"k1", p.k1},
                   {"k2", p.k2},
                   {"k3", p.k3},
                   {"k4", p.k4},
                   {"k5", deg_to_rad(p.k5)},
                   {"k5_angle_unit", "degree"},
                   {"k6", p.k6},
                   {"k7", p.k7},
                   {"tau1_range", json::array({p.tau1_range.lo, p.tau1_range.hi})},
                   {"tau2_range_deg", json::array({rad_to_deg(p.tau2_range.lo),
                                                   rad_to_deg(p.tau2_range.hi)})}};
  j["reference"] = {{"tau", sc.ref_tau}, {"u_min", sc.u_min}};
  j["outcome"] = {{"hull", sc.thresholds.hull},
                  {"rho", sc.thresholds.rho},
                  {"phase_deg", rad_to_deg(sc.thresholds.phase)},
                  {"window", sc.thresholds.window}};
  return j;
}

engine::Scenario scenario_from_json(const json& j) {
  Reader r(j, "");
  r.only({"schema_version", "name", "approach", "regulator", "duration", "dt_phys", "dt_ctrl",
          "dt_reg", "seed", "vessels", "placement", "target", "swarm", "gains", "dynamics",
          "reference", "outcome"});
  if (!r.has("schema_version")) r.fail("schema_version", "missing");
  if (r.unsigned_integer("schema_version", 0) != kSchemaVersion) {
    r.fail("schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  engine::Scenario sc;
  sc.name = r.string("name", sc.name);
  const std::string approach = r.string("approach", engine::to_string(sc.approach));
  if (auto a = engine::approach_from_string(approach)) {
    sc.approach = *a;
  } else {
    r.fail("approach", "unknown value '" + approach + "'");
  }
  const std::string regulator = r.string("regulator", engine::to_string(sc.regulator));
  if (auto g = engine::regulator_from_string(regulator)) {
    sc.regulator = *g;
  } else {
    r.fail("regulator", "unknown value '" + regulator + "'");
  }
  sc.duration = r.number("duration", sc.duration);
  sc.dt_phys = r.number("dt_phys", sc.dt_phys);
  sc.dt_ctrl = r.number("dt_ctrl", sc.dt_ctrl);
  sc.dt_reg = r.number("dt_reg", sc.dt_reg);
  sc.seed = r.unsigned_integer("seed", sc.seed);

  if (r.has("vessels")) {
    const json& arr = r.raw("vessels");
    if (!arr.is_array()) r.fail("vessels", "expected an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      Reader v(arr[k], "vessels[" + std::to_string(k) + "]");
      v.only({"x", "y", "heading_deg", "surge", "sway", "yaw_rate_deg"});
      dynamics::VesselState s;
      s.position = Vec2(v.number("x", 0.0), v.number("y", 0.0));
      s.heading = deg_to_rad(v.number("heading_deg", 0.0));
      s.surge = v.number("surge", 0.0);
      s.sway = v.number("sway", 0.0);
      s.yaw_rate = deg_to_rad(v.number("yaw_rate_deg", 0.0));
      sc.vessels.push_back(s);
    }
  }
  if (r.has("placement")) {
    Reader p = r.child("placement");
    p.only({"count", "area"});
    sc.random_count = p.unsigned_integer("count", sc.random_count);
    if (p.has("area")) {
      const json& a = p.raw("area");
      if (!a.is_array() || a.size() != 4) p.fail("area", "expected [xmin, ymin, xmax, ymax]");
      for (const auto& x : a)
        if (!x.is_number()) p.fail("area", "expected [xmin, ymin, xmax, ymax]");
      sc.area.lo = Vec2(a[0].get<double>(), a[1].get<double>());
      sc.area.hi = Vec2(a[2].get<double>(), a[3].get<double>());
    }
  }
  if (r.has("target")) {
    Reader t = r.child("target");
    t.only({"kind", "start", "velocity", "waypoints"});
    const std::string kind = t.string("kind", "static");
    if (kind == "static") {
      sc.target.kind = engine::TargetTrajectory::Kind::Static;
    } else if (kind == "constant-velocity") {
      sc.target.kind = engine::TargetTrajectory::Kind::ConstantVelocity;
    } else if (kind == "waypoints") {
      sc.target.kind = engine::TargetTrajectory::Kind::Waypoints;
    } else {
      t.fail("kind", "unknown value '" + kind + "'");
    }
    sc.target.start = t.pair("start", sc.target.start);
    sc.target.velocity = t.pair("velocity", sc.target.velocity);
    if (t.has("waypoints")) {
      const json& arr = t.raw("waypoints");
      if (!arr.is_array()) t.fail("waypoints", "expected an array");
      for (std::size_t k = 0; k < arr.size(); ++k) {
        Reader w(arr[k], t.join("waypoints[" + std::to_string(k) + "]"));
        w.only({"x", "y", "speed"});
        sc.target.waypoints.push_back({Vec2(w.number("x", 0.0), w.number("y", 0.0)),
                                       w.number("speed", 0.0)});
      }
    }
  }
  sc.swarm.n = sc.vessels.empty() ? sc.random_count : sc.vessels.size();
  if (r.has("swarm")) {
    Reader s = r.child("swarm");
    s.only({"mu", "gamma1", "gamma2", "gamma3", "beta1", "beta2", "rho_o", "rho_min", "comm_graph",
            "leaders"});
    auto& sw = sc.swarm;
    sw.mu = s.number("mu", sw.mu);
    sw.gamma1 = s.number("gamma1", sw.gamma1);
    sw.gamma2 = s.number("gamma2", sw.gamma2);
    sw.gamma3 = s.number("gamma3", sw.gamma3);
    sw.beta1 = s.number("beta1", sw.beta1);
    sw.beta2 = s.number("beta2", sw.beta2);
    sw.rho_o = s.number("rho_o", sw.rho_o);
    sw.rho_min = s.number("rho_min", sw.rho_min);
    if (s.has("comm_graph")) {
      const json& e = s.raw("comm_graph");
      if (!e.is_array()) s.fail("comm_graph", "expected an array of [i, j] edges");
      protocols::Graph g(sw.n);
      for (const auto& edge : e) {
        if (!edge.is_array() || edge.size() != 2 || !edge[0].is_number_unsigned() ||
            !edge[1].is_number_unsigned()) {
          s.fail("comm_graph", "expected an array of [i, j] edges");
        }
        const auto a = edge[0].get<std::size_t>(), b = edge[1].get<std::size_t>();
        if (a >= sw.n || b >= sw.n || a == b) {
          s.fail("comm_graph", "bad edge [" + std::to_string(a) + ", " + std::to_string(b) + "]");
        }
        g.add_edge(a, b);
      }
      sw.comm_graph = g.edges().empty() ? protocols::Graph() : g;
    }
    if (s.has("leaders")) {
      const json& l = s.raw("leaders");
      if (!l.is_array()) s.fail("leaders", "expected an array of indices");
      for (const auto& x : l) {
        if (!x.is_number_unsigned()) s.fail("leaders", "expected an array of indices");
        sw.leader_set.insert(x.get<std::size_t>());
      }
    }
  }
  if (r.has("gains")) {
    Reader g = r.child("gains");
    g.only({"kappa1", "kappa2", "kappa3", "kappa4"});
    try {
      sc.gains = regulation::RegGains(g.number("kappa1", sc.gains.kappa1()),
                                      g.number("kappa2", sc.gains.kappa2()),
                                      g.number("kappa3", sc.gains.kappa3()),
                                      g.number("kappa4", sc.gains.kappa4()));
    } catch (const std::invalid_argument& e) {
      g.fail("", e.what());
    }
  }
  if (r.has("dynamics")) {
    Reader d = r.child("dynamics");
    d.only({"k1", "k2", "k3", "k4", "k5", "k5_angle_unit", "k6", "k7", "tau1_range",
            "tau2_range_deg"});
    auto& p = sc.params;
    p.k1 = d.number("k1", p.k1);
    p.k2 = d.number("k2", p.k2);
    p.k3 = d.number("k3", p.k3);
    p.k4 = d.number("k4", p.k4);
    p.k6 = d.number("k6", p.k6);
    p.k7 = d.number("k7", p.k7);
    const std::string unit = d.string("k5_angle_unit", "degree");
    if (unit != "degree" && unit != "radian") d.fail("k5_angle_unit", "expected 'degree' or 'radian'");
    if (d.has("k5")) {
      const double k5 = d.number("k5", 0.0);
      p.k5 = unit == "degree" ? rad_to_deg(k5) : k5;
    }
    const Vec2 t1 = d.pair("tau1_range", Vec2(p.tau1_range.lo, p.tau1_range.hi));
    p.tau1_range = {t1.x(), t1.y()};
    const Vec2 t2 = d.pair("tau2_range_deg",
                           Vec2(rad_to_deg(p.tau2_range.lo), rad_to_deg(p.tau2_range.hi)));
    p.tau2_range = {deg_to_rad(t2.x()), deg_to_rad(t2.y())};
  }
  if (r.has("reference")) {
    Reader f = r.child("reference");
    f.only({"tau", "u_min"});
    sc.ref_tau = f.number("tau", sc.ref_tau);
    sc.u_min = f.number("u_min", sc.u_min);
  }
  if (r.has("outcome")) {
    Reader o = r.child("outcome");
    o.only({"hull", "rho", "phase_deg", "window"});
    sc.thresholds.hull = o.number("hull", sc.thresholds.hull);
    sc.thresholds.rho = o.number("rho", sc.thresholds.rho);
    sc.thresholds.phase = deg_to_rad(o.number("phase_deg", rad_to_deg(sc.thresholds.phase)));
    sc.thresholds.window = o.number("window", sc.thresholds.window);
  }
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return sc;
}

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "': expected key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json* node = &j;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (!node->is_object() || !node->contains(part)) {
      throw ConfigError("unknown override key '" + key + "'");
    }
    node = &(*node)[part];
  }
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  *node = value;
}

engine::Scenario load_scenario_file(const std::string& path,
                                    const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  json j = parse_json_text(buf.str(), path);
  // Fill absent sections so overrides can name any documented key.
  json full = scenario_to_json(engine::Scenario{});
  if (j.is_object()) {
    for (const auto& o : overrides) {
      const std::string key = o.substr(0, o.find('='));
      const std::string root = key.substr(0, key.find('.'));
      if (!j.contains(root) && full.contains(root)) j[root] = full[root];
    }
  }
  for (const auto& o : overrides) apply_override(j, o);
  try {
    return scenario_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace usv::cli
