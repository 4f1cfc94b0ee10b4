// cz-mech: scenario simulation with CSV trajectory output and property
// verification with pass/fail reporting.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage/config error,
// 3 numerical failure.

#include "czmech/czmech.hpp"
#include "czmech/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

using json = nlohmann::json;
using namespace czmech;

namespace {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// fail-closed schema helpers
// ---------------------------------------------------------------------------

void check_keys(const json& obj, const std::string& ctx, const std::set<std::string>& allowed,
                const std::set<std::string>& required) {
  if (!obj.is_object()) throw ConfigError(ctx + ": expected an object");
  for (const auto& item : obj.items())
    if (!allowed.contains(item.key()))
      throw ConfigError(ctx + ": unknown key \"" + item.key() + "\"");
  for (const auto& key : required)
    if (!obj.contains(key)) throw ConfigError(ctx + ": missing key \"" + key + "\"");
}

double get_number(const json& obj, const std::string& ctx, const std::string& key) {
  if (!obj.at(key).is_number()) throw ConfigError(ctx + ": \"" + key + "\" must be a number");
  return obj.at(key).get<double>();
}

Vec3 get_vec3(const json& obj, const std::string& ctx, const std::string& key) {
  const auto& arr = obj.at(key);
  if (!arr.is_array() || arr.size() != 3)
    throw ConfigError(ctx + ": \"" + key + "\" must be an array of 3 numbers");
  return Vec3(arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>());
}

Mat3 get_mat3(const json& obj, const std::string& ctx, const std::string& key) {
  const auto& rows = obj.at(key);
  if (!rows.is_array() || rows.size() != 3)
    throw ConfigError(ctx + ": \"" + key + "\" must be a 3x3 array");
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    if (!rows[i].is_array() || rows[i].size() != 3)
      throw ConfigError(ctx + ": \"" + key + "\" must be a 3x3 array");
    for (int j = 0; j < 3; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

struct IntegratorSpec {
  double h = 1e-3;
  int steps = 1000;
};

IntegratorSpec get_integrator(const json& cfg, std::optional<double> h_override,
                              std::optional<int> steps_override) {
  const auto& integ = cfg.at("integrator");
  check_keys(integ, "integrator", {"h", "steps"}, {"h", "steps"});
  IntegratorSpec spec;
  spec.h = get_number(integ, "integrator", "h");
  spec.steps = integ.at("steps").get<int>();
  if (h_override) spec.h = *h_override;
  if (steps_override) spec.steps = *steps_override;
  if (!(spec.h > 0.0)) throw ConfigError("integrator: \"h\" must be positive");
  if (spec.steps < 0) throw ConfigError("integrator: \"steps\" must be nonnegative");
  return spec;
}

int get_output_every(const json& cfg) {
  if (!cfg.contains("output")) return 1;
  check_keys(cfg.at("output"), "output", {"every"}, {});
  const int every = cfg.at("output").value("every", 1);
  if (every < 1) throw ConfigError("output: \"every\" must be >= 1");
  return every;
}

json load_config(const std::string& path, const std::string& expected_kind,
                 const std::set<std::string>& allowed, const std::set<std::string>& required) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  std::set<std::string> all = allowed;
  all.insert({"schema_version", "kind", "integrator", "output"});
  std::set<std::string> req = required;
  req.insert({"schema_version", "kind", "integrator"});
  check_keys(cfg, "config", all, req);
  if (cfg.at("schema_version").get<int>() != 1)
    throw ConfigError("config: unsupported \"schema_version\" (expected 1)");
  if (cfg.at("kind").get<std::string>() != expected_kind)
    throw ConfigError("config: \"kind\" is \"" + cfg.at("kind").get<std::string>() +
                      "\" but the subcommand expects \"" + expected_kind + "\"");
  return cfg;
}

// ---------------------------------------------------------------------------
// CSV writing
// ---------------------------------------------------------------------------

class CsvWriter {
public:
  explicit CsvWriter(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file: " + path);
    }
  }

  bool enabled() const { return file_.is_open(); }

  void header(const std::vector<std::string>& cols) {
    if (!enabled()) return;
    for (std::size_t i = 0; i < cols.size(); ++i) file_ << (i ? "," : "") << cols[i];
    file_ << "\n";
  }

  void row(const std::vector<double>& vals) {
    if (!enabled()) return;
    for (std::size_t i = 0; i < vals.size(); ++i)
      file_ << (i ? "," : "") << to_decimal_string(vals[i]);
    file_ << "\n";
  }

private:
  std::ofstream file_;
};

void append_vec(std::vector<double>& row, const Vec3& v) {
  row.push_back(v.x());
  row.push_back(v.y());
  row.push_back(v.z());
}

// ---------------------------------------------------------------------------
// scenario runners
// ---------------------------------------------------------------------------

int run_rigid(const json& cfg, const std::string& out_path, std::optional<double> h_ov,
              std::optional<int> steps_ov) {
  const auto& body = cfg.at("body");
  check_keys(body, "body", {"mass", "inertia_diag", "theta", "points"}, {});
  RigidBodyModel model = [&] {
    if (body.contains("points")) {
      MassDistribution d;
      for (const auto& p : body.at("points")) {
        check_keys(p, "body.points[]", {"x", "m", "nu"}, {"x", "m"});
        d.pp.push_back({get_vec3(p, "body.points[]", "x"), get_number(p, "body.points[]", "m"),
                        p.value("nu", 0.0)});
      }
      return RigidBodyModel::assemble(d);
    }
    if (body.contains("theta")) {
      const auto& rows = body.at("theta");
      if (!rows.is_array() || rows.size() != 6) throw ConfigError("body: \"theta\" must be 6x6");
      Mat6 th;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) th(i, j) = rows[i][j].get<double>();
      return RigidBodyModel::from_operators(th);
    }
    if (!body.contains("mass") || !body.contains("inertia_diag"))
      throw ConfigError("body: need \"points\", \"theta\", or \"mass\" + \"inertia_diag\"");
    Mat6 th = Mat6::Zero();
    th.topLeftCorner<3, 3>() = get_number(body, "body", "mass") * Mat3::Identity();
    th.bottomRightCorner<3, 3>() = get_vec3(body, "body", "inertia_diag").asDiagonal();
    return RigidBodyModel::from_operators(th);
  }();

  RigidBodyState state;
  if (cfg.contains("initial")) {
    const auto& init = cfg.at("initial");
    check_keys(init, "initial", {"rotation", "translation", "velocity", "angular_velocity"}, {});
    Placement pl;
    if (init.contains("rotation")) pl.rotation = Rotation(get_mat3(init, "initial", "rotation"));
    if (init.contains("translation")) pl.translation = get_vec3(init, "initial", "translation");
    state.placement = pl;
    Vec6 v = Vec6::Zero();
    if (init.contains("velocity")) v.head<3>() = get_vec3(init, "initial", "velocity");
    if (init.contains("angular_velocity")) v.tail<3>() = get_vec3(init, "initial", "angular_velocity");
    state.quasi_velocity = v;
  }

  WrenchFn wrench = [](double, const RigidBodyState&) { return Vec6::Zero(); };
  if (cfg.contains("wrench")) {
    const auto& w = cfg.at("wrench");
    check_keys(w, "wrench", {"type", "force", "torque"}, {"type"});
    const std::string type = w.at("type").get<std::string>();
    if (type == "constant") {
      Vec6 f = Vec6::Zero();
      if (w.contains("force")) f.head<3>() = get_vec3(w, "wrench", "force");
      if (w.contains("torque")) f.tail<3>() = get_vec3(w, "wrench", "torque");
      wrench = [f](double, const RigidBodyState&) { return f; };
    } else if (type != "zero") {
      throw ConfigError("wrench: unknown \"type\" \"" + type + "\"");
    }
  }

  const auto integ = get_integrator(cfg, h_ov, steps_ov);
  const int every = get_output_every(cfg);
  const auto traj = simulate_rigid_body(model, wrench, state, integ.h, integ.steps);

  CsvWriter csv(out_path);
  csv.header({"t", "C11", "C12", "C13", "C21", "C22", "C23", "C31", "C32", "C33",
              "d1", "d2", "d3", "v1", "v2", "v3", "w1", "w2", "w3", "ke"});
  for (std::size_t k = 0; k < traj.steps.size(); ++k) {
    if (k % static_cast<std::size_t>(every) != 0 && k + 1 != traj.steps.size()) continue;
    const auto& s = traj.steps[k];
    std::vector<double> row{s.t};
    const Mat3& c = s.state.placement.rotation.matrix();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) row.push_back(c(i, j));
    append_vec(row, s.state.placement.translation);
    append_vec(row, s.state.quasi_velocity.head<3>());
    append_vec(row, s.state.quasi_velocity.tail<3>());
    row.push_back(s.kinetic_energy);
    csv.row(row);
  }

  double ke_drift = 0.0, momentum_drift = 0.0;
  for (const auto& s : traj.steps) {
    ke_drift = std::max(ke_drift, rel_err(s.kinetic_energy, traj.steps.front().kinetic_energy));
    momentum_drift = std::max(momentum_drift, rel_err(s.momentum_world, traj.steps.front().momentum_world));
  }
  const auto& last = traj.steps.back();
  auto fmt3 = [](const Vec3& v) {
    return "[" + to_decimal_string(v.x()) + "," + to_decimal_string(v.y()) + "," +
           to_decimal_string(v.z()) + "]";
  };
  std::cout << "rigid: t_end=" << to_decimal_string(last.t)
            << " d=" << fmt3(last.state.placement.translation)
            << " v=" << fmt3(last.state.quasi_velocity.head<3>())
            << " w=" << fmt3(last.state.quasi_velocity.tail<3>())
            << " ke=" << to_decimal_string(last.kinetic_energy)
            << " ke_drift=" << to_decimal_string(ke_drift)
            << " momentum_drift=" << to_decimal_string(momentum_drift) << "\n";
  return 0;
}

int run_nbody(const json& cfg, const std::string& out_path, std::optional<double> h_ov,
              std::optional<int> steps_ov) {
  if (!cfg.at("bodies").is_array() || cfg.at("bodies").empty())
    throw ConfigError("config: \"bodies\" must be a nonempty array");
  std::vector<NBody> bodies;
  for (const auto& b : cfg.at("bodies")) {
    check_keys(b, "bodies[]", {"x", "v", "m"}, {"x", "v", "m"});
    bodies.push_back({get_vec3(b, "bodies[]", "x"), get_vec3(b, "bodies[]", "v"),
                      get_number(b, "bodies[]", "m")});
  }
  const double gamma = get_number(cfg, "config", "gamma");
  const auto integ = get_integrator(cfg, h_ov, steps_ov);
  const int every = get_output_every(cfg);

  const auto traj = nbody_simulate(bodies, gamma, integ.h, integ.steps, 1e-9, every);

  CsvWriter csv(out_path);
  std::vector<std::string> cols{"t"};
  for (std::size_t i = 1; i <= bodies.size(); ++i) {
    const std::string k = std::to_string(i);
    for (const char* base : {"x", "y", "z", "vx", "vy", "vz"}) cols.push_back(base + k);
  }
  for (const char* extra : {"energy", "px", "py", "pz", "Lx", "Ly", "Lz"}) cols.push_back(extra);
  csv.header(cols);
  for (const auto& snap : traj) {
    std::vector<double> row{snap.t};
    for (const auto& b : snap.bodies) {
      append_vec(row, b.x);
      append_vec(row, b.v);
    }
    row.push_back(snap.energy);
    append_vec(row, snap.momentum);
    append_vec(row, snap.angular_momentum);
    csv.row(row);
  }

  double energy_drift = 0.0, momentum_drift = 0.0;
  for (const auto& snap : traj) {
    energy_drift = std::max(energy_drift, rel_err(snap.energy, traj.front().energy));
    momentum_drift = std::max(momentum_drift, (snap.momentum - traj.front().momentum).norm());
  }
  std::cout << "nbody: t_end=" << to_decimal_string(traj.back().t)
            << " energy=" << to_decimal_string(traj.back().energy)
            << " energy_drift=" << to_decimal_string(energy_drift)
            << " momentum_drift=" << to_decimal_string(momentum_drift) << "\n";

  if (bodies.size() == 2) {
    // unwrap the separation-vector angle in its orbital plane
    const Vec3 r0 = traj.front().bodies[0].x - traj.front().bodies[1].x;
    Vec3 n = r0.cross(traj.front().bodies[0].v - traj.front().bodies[1].v);
    if (n.norm() > 1e-12) {
      n.normalize();
      const Vec3 e1 = r0.normalized();
      const Vec3 e2 = n.cross(e1);
      double prev = 0.0, total = 0.0;
      std::optional<double> period;
      for (std::size_t k = 1; k < traj.size(); ++k) {
        const Vec3 r = traj[k].bodies[0].x - traj[k].bodies[1].x;
        const double th = std::atan2(r.dot(e2), r.dot(e1));
        double dth = th - prev;
        while (dth > std::numbers::pi) dth -= 2 * std::numbers::pi;
        while (dth < -std::numbers::pi) dth += 2 * std::numbers::pi;
        const double before = total;
        total += dth;
        prev = th;
        if (!period && std::abs(total) >= 2 * std::numbers::pi) {
          const double frac = (2 * std::numbers::pi - std::abs(before)) / std::abs(dth);
          period = traj[k - 1].t + frac * (traj[k].t - traj[k - 1].t);
        }
      }
      if (period) std::cout << "nbody: estimated_period=" << to_decimal_string(*period) << "\n";
    }
  }
  return 0;
}

int run_masspoint(const json& cfg, const std::string& out_path, std::optional<double> h_ov,
                  std::optional<int> steps_ov) {
  const double m0 = get_number(cfg, "config", "mass");
  const Vec3 x0 = get_vec3(cfg, "config", "position");
  const Vec3 v0 = get_vec3(cfg, "config", "velocity");

  MassPointModel model;
  if (cfg.contains("force")) {
    const auto& f = cfg.at("force");
    check_keys(f, "force", {"type", "value"}, {"type"});
    const std::string type = f.at("type").get<std::string>();
    if (type == "constant") {
      const Vec3 value = get_vec3(f, "force", "value");
      model.force = [value](double, const Vec3&, const Vec3&) { return value; };
    } else if (type != "zero") {
      throw ConfigError("force: unknown \"type\" \"" + type + "\"");
    }
  }
  if (cfg.contains("mass_rate")) {
    const auto& r = cfg.at("mass_rate");
    check_keys(r, "mass_rate", {"type", "value", "k"}, {"type"});
    const std::string type = r.at("type").get<std::string>();
    if (type == "constant") {
      const double value = get_number(r, "mass_rate", "value");
      model.nu = [value](double) { return value; };
    } else if (type == "exponential") {
      const double k = get_number(r, "mass_rate", "k");
      model.nu = [k, m0](double t) { return -k * m0 * std::exp(-k * t); };
    } else if (type != "zero") {
      throw ConfigError("mass_rate: unknown \"type\" \"" + type + "\"");
    }
  }
  if (cfg.contains("exhaust")) {
    const auto& e = cfg.at("exhaust");
    check_keys(e, "exhaust", {"type", "velocity"}, {"type"});
    const std::string type = e.at("type").get<std::string>();
    if (type == "relative") {
      const Vec3 c = get_vec3(e, "exhaust", "velocity");
      model.gain_velocity = [c](double, const Vec3&, const Vec3& v) { return Vec3(v + c); };
    } else if (type == "absolute") {
      const Vec3 u = get_vec3(e, "exhaust", "velocity");
      model.gain_velocity = [u](double, const Vec3&, const Vec3&) { return u; };
    } else if (type != "zero") {
      throw ConfigError("exhaust: unknown \"type\" \"" + type + "\"");
    }
  }

  const auto integ = get_integrator(cfg, h_ov, steps_ov);
  const int every = get_output_every(cfg);
  const auto traj = simulate_mass_point(model, x0, v0, m0, integ.h, integ.steps);

  CsvWriter csv(out_path);
  csv.header({"t", "m", "x1", "x2", "x3", "v1", "v2", "v3"});
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (k % static_cast<std::size_t>(every) != 0 && k + 1 != traj.size()) continue;
    std::vector<double> row{traj[k].t, traj[k].m};
    append_vec(row, traj[k].x);
    append_vec(row, traj[k].v);
    csv.row(row);
  }
  const auto& last = traj.back();
  std::cout << "masspoint: t_end=" << to_decimal_string(last.t) << " m=" << to_decimal_string(last.m)
            << " v=[" << to_decimal_string(last.v.x()) << "," << to_decimal_string(last.v.y())
            << "," << to_decimal_string(last.v.z()) << "]\n";
  return 0;
}

int run_bodypoint(const json& cfg, const std::string& out_path, std::optional<double> h_ov,
                  std::optional<int> steps_ov) {
  BodyPointInertia inertia;
  inertia.rho = get_number(cfg, "config", "rho");
  if (cfg.contains("A")) inertia.A = get_mat3(cfg, "config", "A");
  if (cfg.contains("B")) inertia.B = get_mat3(cfg, "config", "B");
  const double nu = cfg.value("nu", 0.0);

  const auto& load = cfg.at("load");
  check_keys(load, "load", {"alpha", "beta"}, {"alpha", "beta"});
  Vec6 ab;
  ab << get_vec3(load, "load", "alpha"), get_vec3(load, "load", "beta");

  const Vec3 v0 = get_vec3(cfg, "config", "velocity");
  const Vec3 mu0 = get_vec3(cfg, "config", "spin");
  const auto integ = get_integrator(cfg, h_ov, steps_ov);
  const int every = get_output_every(cfg);

  const auto traj = simulate_body_point(
      inertia, [nu](double) { return nu; }, [ab](double) { return ab; }, v0, mu0, integ.h,
      integ.steps);

  CsvWriter csv(out_path);
  csv.header({"t", "v1", "v2", "v3", "mu1", "mu2", "mu3"});
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (k % static_cast<std::size_t>(every) != 0 && k + 1 != traj.size()) continue;
    std::vector<double> row{traj[k].t};
    append_vec(row, traj[k].v);
    append_vec(row, traj[k].mu);
    csv.row(row);
  }
  std::cout << "bodypoint: t_end=" << to_decimal_string(traj.back().t) << " v=["
            << to_decimal_string(traj.back().v.x()) << "," << to_decimal_string(traj.back().v.y())
            << "," << to_decimal_string(traj.back().v.z()) << "] mu=["
            << to_decimal_string(traj.back().mu.x()) << "," << to_decimal_string(traj.back().mu.y())
            << "," << to_decimal_string(traj.back().mu.z()) << "]\n";
  return 0;
}

int run_multiphase(const json& cfg, const std::string& out_path, std::optional<double> h_ov,
                   std::optional<int> steps_ov) {
  MultiphaseState state;
  const auto& dens = cfg.at("densities");
  if (!dens.is_array() || dens.empty()) throw ConfigError("config: \"densities\" must be a nonempty array");
  state.rho = Eigen::VectorXd(dens.size());
  for (std::size_t i = 0; i < dens.size(); ++i) state.rho[static_cast<Eigen::Index>(i)] = dens[i].get<double>();

  const auto& offs = cfg.at("offsets");
  if (!offs.is_array() || offs.size() != dens.size())
    throw ConfigError("config: \"offsets\" must match \"densities\" in length");
  for (const auto& o : offs)
    state.offsets.push_back(Vec3(o[0].get<double>(), o[1].get<double>(), o[2].get<double>()));

  const auto& st = cfg.at("stoichiometry");
  if (!st.is_array() || st.size() != dens.size())
    throw ConfigError("config: \"stoichiometry\" must have one row per component");
  const auto& rates = cfg.at("rates");
  state.stoichiometry = Eigen::MatrixXd(dens.size(), rates.size());
  for (std::size_t i = 0; i < st.size(); ++i) {
    if (!st[i].is_array() || st[i].size() != rates.size())
      throw ConfigError("config: \"stoichiometry\" rows must match \"rates\" in length");
    for (std::size_t j = 0; j < rates.size(); ++j)
      state.stoichiometry(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          st[i][j].get<double>();
  }
  state.rates = Eigen::VectorXd(rates.size());
  for (std::size_t j = 0; j < rates.size(); ++j)
    state.rates[static_cast<Eigen::Index>(j)] = rates[j].get<double>();
  state.validate();

  const double div_v = cfg.value("div_v", 0.0);
  const auto integ = get_integrator(cfg, h_ov, steps_ov);
  const int every = get_output_every(cfg);

  CsvWriter csv(out_path);
  std::vector<std::string> cols{"t"};
  for (Eigen::Index i = 0; i < state.rho.size(); ++i) cols.push_back("rho" + std::to_string(i + 1));
  cols.push_back("rho_total");
  cols.push_back("Jx");
  csv.header(cols);

  auto write_row = [&](double t, const MultiphaseState& s) {
    std::vector<double> row{t};
    for (Eigen::Index i = 0; i < s.rho.size(); ++i) row.push_back(s.rho[i]);
    row.push_back(s.total_density());
    row.push_back(s.micro_inertia_trace());
    csv.row(row);
  };

  double worst_sum_identity = 0.0;
  MultiphaseState cur = state;
  write_row(0.0, cur);
  for (int k = 0; k < integ.steps; ++k) {
    const Eigen::VectorXd gamma = cur.formation();
    const double component_sum = (gamma - div_v * cur.rho).sum();
    const double total_rate = gamma.sum() - cur.total_density() * div_v;
    worst_sum_identity = std::max(worst_sum_identity, std::abs(component_sum - total_rate));
    cur = multiphase_step(cur, div_v, integ.h);
    if ((k + 1) % every == 0 || k + 1 == integ.steps) write_row((k + 1) * integ.h, cur);
  }
  std::cout << "multiphase: t_end=" << to_decimal_string(integ.steps * integ.h)
            << " rho_total=" << to_decimal_string(cur.total_density())
            << " Jx=" << to_decimal_string(cur.micro_inertia_trace())
            << " sum_identity_residual=" << to_decimal_string(worst_sum_identity) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"screw-calculus mechanics toolkit"};
  app.set_help_flag("--help", "print help");  // frees -h / --h for the step size
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run a scenario and write a CSV trajectory");
  std::string kind, config_path, out_path;
  std::optional<double> h_override;
  std::optional<int> steps_override;
  simulate->add_option("kind", kind, "scenario kind")
      ->required()
      ->check(CLI::IsMember({"rigid", "nbody", "masspoint", "bodypoint", "multiphase"}));
  simulate->add_option("--config", config_path, "JSON scenario config")->required();
  simulate->add_option("--out", out_path, "CSV output path");
  double h_val = 0.0;
  int steps_val = 0;
  auto* h_opt = simulate->add_option("--h", h_val, "override integrator step");
  auto* steps_opt = simulate->add_option("--steps", steps_val, "override step count");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run property verification suites");
  std::string suite;
  int trials = 200;
  std::uint64_t seed = 1;
  auto names = verify::suite_names();
  names.push_back("all");
  verify_cmd->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(names));
  verify_cmd->add_option("--trials", trials, "trials per property")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (simulate->parsed()) {
      if (h_opt->count()) h_override = h_val;
      if (steps_opt->count()) steps_override = steps_val;
      if (kind == "rigid") {
        const json cfg = load_config(config_path, kind, {"body", "initial", "wrench"}, {"body"});
        return run_rigid(cfg, out_path, h_override, steps_override);
      }
      if (kind == "nbody") {
        const json cfg = load_config(config_path, kind, {"gamma", "bodies"}, {"gamma", "bodies"});
        return run_nbody(cfg, out_path, h_override, steps_override);
      }
      if (kind == "masspoint") {
        const json cfg = load_config(config_path, kind,
                                     {"mass", "position", "velocity", "force", "mass_rate", "exhaust"},
                                     {"mass", "position", "velocity"});
        return run_masspoint(cfg, out_path, h_override, steps_override);
      }
      if (kind == "bodypoint") {
        const json cfg = load_config(config_path, kind,
                                     {"rho", "A", "B", "nu", "load", "velocity", "spin"},
                                     {"rho", "load", "velocity", "spin"});
        return run_bodypoint(cfg, out_path, h_override, steps_override);
      }
      const json cfg = load_config(config_path, kind,
                                   {"densities", "offsets", "stoichiometry", "rates", "div_v"},
                                   {"densities", "offsets", "stoichiometry", "rates"});
      return run_multiphase(cfg, out_path, h_override, steps_override);
    }

    // verify
    const auto reports = verify::run(suite, trials, seed);
    bool all_pass = true;
    for (const auto& rep : reports) {
      std::cout << verify::render(rep);
      all_pass = all_pass && rep.pass;
    }
    return all_pass ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
