#include "ovalflow/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include <openssl/evp.h>

#include "ovalflow/errors.hpp"
#include "ovalflow/geometry.hpp"
#include "ovalflow/profile_io.hpp"

namespace ovalflow {

using nlohmann::json;

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::validate_speed:
      return "validate-speed";
    case ExperimentKind::run_flow:
      return "run-flow";
    case ExperimentKind::compare:
      return "compare";
    case ExperimentKind::ancient_pipeline:
      return "ancient-pipeline";
    case ExperimentKind::backward_limit:
      return "backward-limit";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view s) {
  for (auto k : {ExperimentKind::validate_speed, ExperimentKind::run_flow, ExperimentKind::compare,
                 ExperimentKind::ancient_pipeline, ExperimentKind::backward_limit}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

std::string message_of(const std::vector<std::string>& messages) {
  return "invalid configuration: " + join(messages);
}

// Pulls typed fields out of one JSON object, recording type errors and
// unknown keys instead of stopping at the first problem.
class Reader {
 public:
  Reader(const json& obj, std::string prefix, std::vector<std::string>& errors)
      : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {}

  bool has(const char* key) const { return obj_.contains(key); }

  void real(const char* key, double& out) {
    if (const json* v = take(key)) {
      if (v->is_number()) {
        out = v->get<double>();
      } else {
        type_error(key, "a number");
      }
    }
  }

  template <class Int>
  void integer(const char* key, Int& out) {
    if (const json* v = take(key)) {
      if (v->is_number_integer()) {
        out = v->get<Int>();
      } else {
        type_error(key, "an integer");
      }
    }
  }

  void string(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (v->is_string()) {
        out = v->get<std::string>();
      } else {
        type_error(key, "a string");
      }
    }
  }

  void reals(const char* key, std::vector<double>& out) {
    if (const json* v = take(key)) {
      if (v->is_array() && std::all_of(v->begin(), v->end(), [](const json& x) { return x.is_number(); })) {
        out = v->get<std::vector<double>>();
      } else {
        type_error(key, "an array of numbers");
      }
    }
  }

  const json* object(const char* key) {
    const json* v = take(key);
    if (v && !v->is_object()) {
      type_error(key, "an object");
      return nullptr;
    }
    return v;
  }

  const json* array(const char* key) {
    const json* v = take(key);
    if (v && !v->is_array()) {
      type_error(key, "an array");
      return nullptr;
    }
    return v;
  }

  std::string path(const char* key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  void finish() {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) errors_.push_back(path(it.key().c_str()) + ": unknown field");
    }
  }

 private:
  const json* take(const char* key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }
  void type_error(const char* key, const char* what) {
    errors_.push_back(path(key) + ": must be " + what);
  }

  const json& obj_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

InitialSpec read_initial(const json& obj, const std::string& prefix,
                         std::vector<std::string>& errors) {
  InitialSpec spec;
  Reader r(obj, prefix, errors);
  r.string("type", spec.type);
  r.real("a", spec.a);
  r.real("epsilon0", spec.epsilon0);
  r.real("radius", spec.radius);
  r.finish();
  if (spec.type == "cap") {
    if (!(spec.a >= 1.0)) errors.push_back(prefix + ".a: cap half-length must be >= 1");
    if (!(spec.epsilon0 > 0.0 && spec.epsilon0 < 1.0)) {
      errors.push_back(prefix + ".epsilon0: must lie in (0, 1)");
    }
  } else if (spec.type == "ellipsoid") {
    if (!(spec.a > 0.0)) errors.push_back(prefix + ".a: ellipsoid semi-axis must be positive");
  } else if (spec.type == "sphere") {
    if (!(spec.radius > 0.0)) errors.push_back(prefix + ".radius: must be positive");
  } else {
    errors.push_back(prefix + ".type: must be one of cap, ellipsoid, sphere (got '" + spec.type +
                     "')");
  }
  return spec;
}

std::string position_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

ConfigErrors::ConfigErrors(std::vector<std::string> messages)
    : ConfigError(message_of(messages)), messages_(std::move(messages)) {}

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigErrors({"syntax error at " + position_of(text, e.byte) + ": " + e.what()});
  }
  if (!doc.is_object()) throw ConfigErrors({"document: top level must be an object"});

  std::vector<std::string> errors;
  ExperimentConfig cfg;
  Reader r(doc, "", errors);

  std::string kind;
  if (!r.has("experiment")) errors.push_back("experiment: required field missing");
  r.string("experiment", kind);
  if (r.has("experiment")) {
    if (auto k = parse_experiment_kind(kind)) {
      cfg.experiment = *k;
    } else if (!kind.empty()) {
      errors.push_back("experiment: unknown kind '" + kind +
                       "' (expected validate-speed, run-flow, compare, ancient-pipeline or "
                       "backward-limit)");
    }
  }
  r.string("speed", cfg.speed);
  if (!is_registered_speed(cfg.speed)) {
    errors.push_back("speed: unknown speed '" + cfg.speed + "'; registered speeds: " +
                     join(registered_speeds()));
  }
  r.integer("n", cfg.n);
  r.integer("J", cfg.J);
  r.integer("m", cfg.m);
  if (cfg.n < 2) errors.push_back("n: must be >= 2");
  if (cfg.J < 1 || cfg.J > cfg.n - 1) {
    errors.push_back("J: must satisfy 1 <= J <= n-1 (got J = " + std::to_string(cfg.J) +
                     " with n = " + std::to_string(cfg.n) + ")");
  }
  if (cfg.m < 8) errors.push_back("m: grid size must be >= 8");

  if (const json* v = r.object("initial")) cfg.initial = read_initial(*v, "initial", errors);
  if (const json* v = r.object("other")) cfg.other = read_initial(*v, "other", errors);

  if (const json* v = r.object("solver")) {
    Reader s(*v, "solver", errors);
    s.real("cfl_safety", cfg.solver.cfl_safety);
    s.real("stop_min_r", cfg.solver.stop_min_r);
    s.real("stop_max_speed", cfg.solver.stop_max_speed);
    s.integer("max_steps", cfg.solver.max_steps);
    s.integer("record_every", cfg.solver.record_every);
    s.real("stop_time", cfg.solver.stop_time);
    s.real("stop_ratio", cfg.solver.stop_ratio);
    s.real("stop_ratio_depth", cfg.solver.stop_ratio_depth);
    s.finish();
  }
  try {
    validate(cfg.solver);
  } catch (const DomainError& e) {
    errors.push_back(e.what());
  }

  r.reals("family", cfg.family);
  r.reals("K", cfg.K);
  if (const json* v = r.array("barriers")) {
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string prefix = "barriers[" + std::to_string(i) + "]";
      if (!(*v)[i].is_object()) {
        errors.push_back(prefix + ": must be an object");
        continue;
      }
      Reader b((*v)[i], prefix, errors);
      std::string kind_name = "sphere";
      BarrierSpec spec;
      b.string("kind", kind_name);
      b.real("R0", spec.R0);
      b.finish();
      if (kind_name == "sphere") {
        spec.kind = BarrierKind::sphere;
      } else if (kind_name == "cylinder") {
        spec.kind = BarrierKind::cylinder;
      } else {
        errors.push_back(prefix + ".kind: must be sphere or cylinder");
      }
      if (!(spec.R0 > 0.0)) errors.push_back(prefix + ".R0: must be positive");
      cfg.barriers.push_back(spec);
    }
  }
  r.integer("random_pairs", cfg.random_pairs);
  r.integer("random_pairs_m", cfg.random_pairs_m);
  if (cfg.random_pairs < 0) errors.push_back("random_pairs: must be >= 0");
  if (cfg.random_pairs_m < 8) errors.push_back("random_pairs_m: must be >= 8");

  if (const json* v = r.object("samples")) {
    Reader s(*v, "samples", errors);
    s.integer("count", cfg.samples.count);
    s.real("lo", cfg.samples.lo);
    s.real("hi", cfg.samples.hi);
    s.finish();
    if (cfg.samples.count <= 0) errors.push_back("samples.count: must be positive");
    if (!(cfg.samples.lo > 0.0 && cfg.samples.lo < cfg.samples.hi)) {
      errors.push_back("samples: need 0 < lo < hi");
    }
  }
  if (const json* v = r.object("window")) {
    Reader s(*v, "window", errors);
    s.real("lo", cfg.window.lo);
    s.real("hi", cfg.window.hi);
    s.finish();
  }
  if (!(cfg.window.lo >= 0.0 && cfg.window.lo <= cfg.window.hi &&
        cfg.window.hi <= std::numbers::pi / 2)) {
    errors.push_back("window: need 0 <= lo <= hi <= pi/2");
  }
  r.integer("profile_files", cfg.profile_files);
  if (cfg.profile_files < 2) errors.push_back("profile_files: must be >= 2");
  r.string("output_dir", cfg.output_dir);
  r.integer("seed", cfg.seed);
  r.finish();

  const bool shaped = cfg.initial.type == "cap" || cfg.initial.type == "ellipsoid";
  switch (cfg.experiment) {
    case ExperimentKind::ancient_pipeline:
      if (cfg.family.empty()) errors.push_back("family: must be non-empty for ancient-pipeline");
      if (!shaped) errors.push_back("initial.type: ancient-pipeline needs cap or ellipsoid data");
      for (double a : cfg.family) {
        if (!(a >= 1.0)) errors.push_back("family: every a must be >= 1");
      }
      break;
    case ExperimentKind::backward_limit:
      if (cfg.K.empty()) errors.push_back("K: must be non-empty for backward-limit");
      if (!shaped) errors.push_back("initial.type: backward-limit needs cap or ellipsoid data");
      for (double K : cfg.K) {
        if (!(K >= 1.0)) errors.push_back("K: every K must be >= 1");
      }
      break;
    case ExperimentKind::compare:
      if (cfg.barriers.empty() && !cfg.other && cfg.random_pairs == 0) {
        errors.push_back("compare: give barriers, other or random_pairs");
      }
      break;
    default:
      break;
  }
  cfg.samples.seed = cfg.seed;
  if (!errors.empty()) throw ConfigErrors(std::move(errors));
  return cfg;
}

namespace {

json initial_json(const InitialSpec& s) {
  json j = {{"type", s.type}};
  if (s.type == "cap") {
    j["a"] = s.a;
    j["epsilon0"] = s.epsilon0;
  } else if (s.type == "ellipsoid") {
    j["a"] = s.a;
  } else {
    j["radius"] = s.radius;
  }
  return j;
}

}  // namespace

void to_json(json& j, const ExperimentConfig& cfg) {
  j = {{"experiment", std::string(to_string(cfg.experiment))},
       {"speed", cfg.speed},
       {"n", cfg.n},
       {"J", cfg.J},
       {"m", cfg.m},
       {"initial", initial_json(cfg.initial)},
       {"solver", cfg.solver},
       {"window", {{"lo", cfg.window.lo}, {"hi", cfg.window.hi}}},
       {"seed", cfg.seed}};
  if (!cfg.family.empty()) j["family"] = cfg.family;
  if (!cfg.K.empty()) j["K"] = cfg.K;
  if (!cfg.barriers.empty()) {
    json bs = json::array();
    for (const auto& b : cfg.barriers) bs.push_back({{"kind", to_string(b.kind)}, {"R0", b.R0}});
    j["barriers"] = bs;
  }
  if (cfg.other) j["other"] = initial_json(*cfg.other);
  if (cfg.random_pairs > 0) {
    j["random_pairs"] = cfg.random_pairs;
    j["random_pairs_m"] = cfg.random_pairs_m;
  }
  if (cfg.experiment == ExperimentKind::validate_speed) {
    j["samples"] = {{"count", cfg.samples.count}, {"lo", cfg.samples.lo}, {"hi", cfg.samples.hi}};
  }
  if (cfg.experiment == ExperimentKind::run_flow) j["profile_files"] = cfg.profile_files;
}

SymmetricProfile build_initial(const ExperimentConfig& cfg, const InitialSpec& spec) {
  if (spec.type == "cap") {
    return build_cap_profile(cfg.n, cfg.J, CapSpec{spec.a, spec.epsilon0, cfg.m}, cfg.m);
  }
  if (spec.type == "ellipsoid") return build_ellipsoid_profile(cfg.n, cfg.J, spec.a, cfg.m);
  if (spec.type == "sphere") return build_sphere_profile(cfg.n, cfg.J, spec.radius, cfg.m);
  throw DomainError("unknown initial data type '" + spec.type + "'");
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("SHA-256 computation failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

namespace {

class Emitter {
 public:
  explicit Emitter(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_);
  }

  void write(const std::filesystem::path& rel, const std::string& content) {
    const auto full = root_ / rel;
    std::filesystem::create_directories(full.parent_path());
    std::ofstream os(full, std::ios::binary);
    if (!os) throw Error("cannot write " + full.string());
    os << content;
    if (!os) throw Error("write failed for " + full.string());
    entries_.push_back({{"path", rel.generic_string()},
                        {"sha256", sha256_hex(content)},
                        {"bytes", content.size()}});
    files_.push_back(rel);
  }

  void json_file(const std::filesystem::path& rel, const json& j) { write(rel, j.dump(2) + "\n"); }

  void profile(const std::filesystem::path& stem, const SymmetricProfile& p) {
    write(stem.string() + ".csv", profile_csv(p));
    json_file(stem.string() + ".json", {{"n", p.n()}, {"J", p.J()}, {"m", p.m()}});
  }

  void manifest(const ExperimentConfig& cfg, bool complete, const std::string& error) {
    json m = {{"experiment", std::string(to_string(cfg.experiment))},
              {"config", cfg},
              {"seed", cfg.seed},
              {"complete", complete},
              {"files", entries_}};
    if (!error.empty()) m["error"] = error;
    std::ofstream os(root_ / "manifest.json", std::ios::binary);
    os << m.dump(2) << "\n";
  }

  const std::vector<std::filesystem::path>& files() const { return files_; }

 private:
  std::filesystem::path root_;
  json entries_ = json::array();
  std::vector<std::filesystem::path> files_;
};

std::string tag(double x) { return format_real(x); }

json fit_json(const CylinderFit& fit, double target) {
  json j = fit;
  j["relative_error"] = std::abs(fit.radius - target) / target;
  return j;
}

void run_validate_speed(const ExperimentConfig& cfg, Emitter& out) {
  const auto f = make_speed(cfg.speed, cfg.n);
  out.json_file("assumptions.json", check_assumptions(f, cfg.J, cfg.samples));
}

void run_flow(const ExperimentConfig& cfg, Emitter& out) {
  const auto f = make_speed(cfg.speed, cfg.n);
  const auto p0 = build_initial(cfg, cfg.initial);
  const auto traj = run_to_extinction(p0, f, cfg.solver);
  out.write("trajectory.csv", trajectory_csv(traj));
  json summary = trajectory_summary(traj);
  summary["initial"] = initial_json(cfg.initial);
  try {
    summary["final_roundness_ratio"] = roundness_ratio(traj.snapshots.back().profile);
  } catch (const DomainError&) {
    summary["final_roundness_ratio"] = nullptr;
  }
  out.json_file("summary.json", summary);

  const std::size_t count = traj.snapshots.size();
  const std::size_t files = std::min<std::size_t>(cfg.profile_files, count);
  std::set<std::size_t> picks;
  for (std::size_t k = 0; k < files; ++k) {
    picks.insert(files == 1 ? 0 : k * (count - 1) / (files - 1));
  }
  json index = json::array();
  for (std::size_t k : picks) {
    char name[32];
    std::snprintf(name, sizeof name, "profiles/profile_%06zu", k);
    out.profile(name, traj.snapshots[k].profile);
    index.push_back({{"file", std::string(name) + ".csv"},
                     {"t", traj.snapshots[k].t},
                     {"step", traj.snapshots[k].step}});
  }
  out.json_file("profiles/index.json", index);
}

// Inner profile plus a second random profile scaled to enclose it.
std::pair<SymmetricProfile, SymmetricProfile> random_nested_pair(std::mt19937_64& rng, int n,
                                                                 int J, int m) {
  std::uniform_real_distribution<double> gap(1.05, 1.4);
  const auto inner = random_convex_profile(rng, n, J, m);
  const auto shape = random_convex_profile(rng, n, J, m);
  double scale = 0.0;
  for (int i = 0; i <= m; ++i) scale = std::max(scale, inner.r(i) / shape.r(i));
  scale *= gap(rng);
  auto outer = shape.scaled(scale);
  while (nesting(inner, outer) != Nesting::p_inside_q) {
    scale *= 1.05;
    outer = shape.scaled(scale);
  }
  return {inner, outer};
}

void run_compare(const ExperimentConfig& cfg, Emitter& out) {
  const auto f = make_speed(cfg.speed, cfg.n);
  json report = json::object();
  bool all_pass = true;
  if (!cfg.barriers.empty() || cfg.other) {
    const auto traj = run_to_extinction(build_initial(cfg, cfg.initial), f, cfg.solver);
    out.write("trajectory.csv", trajectory_csv(traj));
    json bs = json::array();
    for (const auto& spec : cfg.barriers) {
      const auto b = make_barrier(spec.kind, spec.R0, f, cfg.J);
      const auto rep = comparison_check(traj, b);
      all_pass = all_pass && rep.pass;
      bs.push_back({{"barrier", b}, {"report", rep}});
    }
    report["barriers"] = bs;
    if (cfg.other) {
      const auto other = run_to_extinction(build_initial(cfg, *cfg.other), f, cfg.solver);
      out.write("other_trajectory.csv", trajectory_csv(other));
      const auto rep = comparison_check(traj, other);
      all_pass = all_pass && rep.pass;
      report["other"] = {{"initial", initial_json(*cfg.other)}, {"report", rep}};
    }
  }
  if (cfg.random_pairs > 0) {
    std::mt19937_64 rng(cfg.seed);
    json pairs = json::array();
    for (int k = 0; k < cfg.random_pairs; ++k) {
      const auto [inner, outer] = random_nested_pair(rng, cfg.n, cfg.J, cfg.random_pairs_m);
      const auto ti = run_to_extinction(inner, f, cfg.solver);
      const auto to = run_to_extinction(outer, f, cfg.solver);
      const auto rep = comparison_check(ti, to);
      all_pass = all_pass && rep.pass;
      pairs.push_back({{"index", k},
                       {"pass", rep.pass},
                       {"min_increment", rep.min_increment},
                       {"tolerance", rep.tolerance},
                       {"initial_distance", rep.rho.empty() ? 0.0 : rep.rho.front()},
                       {"samples", rep.rho.size()}});
    }
    report["random_pairs"] = pairs;
  }
  report["all_pass"] = all_pass;
  out.json_file("comparison.json", report);
}

std::shared_ptr<const FlowTrajectory> run_member(const ExperimentConfig& cfg, double a,
                                                 const SpeedFunction& f) {
  InitialSpec spec = cfg.initial;
  spec.a = a;
  return std::make_shared<const FlowTrajectory>(
      run_to_extinction(build_initial(cfg, spec), f, cfg.solver));
}

json backward_fits(const ExperimentConfig& cfg, const RescaledTrajectory& rt,
                   const SpeedFunction& f, Emitter& out, const std::string& stem) {
  const double target = std::sqrt(2 * boundary_speed_cJ0(f, cfg.n, cfg.J));
  json fits = json::array();
  std::vector<double> flat;
  for (double K : cfg.K) {
    if (K > rt.max_K()) {
      fits.push_back({{"K", K}, {"available", false}, {"max_K", rt.max_K()}});
      continue;
    }
    const auto p = backward_rescale(rt, K);
    out.profile(stem + "_K" + tag(K), p);
    const auto fit = cylinder_fit(p, cfg.window);
    flat.push_back(fit.flatness);
    json j = fit_json(fit, target);
    j["K"] = K;
    j["available"] = true;
    fits.push_back(j);
  }
  bool decreasing = flat.size() >= 2;
  for (std::size_t k = 1; k < flat.size(); ++k) decreasing = decreasing && flat[k] < flat[k - 1];
  return {{"target_radius", target},
          {"max_K", rt.max_K()},
          {"fits", fits},
          {"flatness_strictly_decreasing", decreasing}};
}

void run_ancient(const ExperimentConfig& cfg, Emitter& out) {
  const auto f = make_speed(cfg.speed, cfg.n);
  std::vector<RescaledTrajectory> family;
  json members = json::array();
  for (double a : cfg.family) {
    auto traj = run_member(cfg, a, f);
    family.push_back(rescale(traj));
    const auto& rt = family.back();
    out.write("ratio_a" + tag(a) + ".csv", ratio_curve_csv(rt));
    json j = rescaled_summary(rt);
    j["a"] = a;
    j["extinction_bracket"] = {traj->t_low, traj->t_high};
    j["termination_reason"] = std::string(to_string(traj->reason));
    j["initial_ratio"] = axis_ratio(traj->snapshots.front().profile);
    members.push_back(j);
  }
  std::vector<const RescaledTrajectory*> ptrs;
  for (const auto& rt : family) ptrs.push_back(&rt);
  json summary = {{"members", members}, {"diagnostics", d1_d2_diagnostics(ptrs, cfg.family)}};
  if (!cfg.K.empty()) {
    const auto deepest = std::max_element(cfg.family.begin(), cfg.family.end()) - cfg.family.begin();
    summary["backward"] = backward_fits(cfg, family[deepest], f, out,
                                        "backward_a" + tag(cfg.family[deepest]));
  }
  out.json_file("summary.json", summary);
}

void run_backward(const ExperimentConfig& cfg, Emitter& out) {
  const auto f = make_speed(cfg.speed, cfg.n);
  const auto rt = rescale(run_member(cfg, cfg.initial.a, f));
  out.write("ratio.csv", ratio_curve_csv(rt));
  json summary = backward_fits(cfg, rt, f, out, "backward");
  summary["rescaled"] = rescaled_summary(rt);
  out.json_file("summary.json", summary);
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  Emitter out(out_dir);
  RunOutcome outcome;
  try {
    switch (cfg.experiment) {
      case ExperimentKind::validate_speed:
        run_validate_speed(cfg, out);
        break;
      case ExperimentKind::run_flow:
        run_flow(cfg, out);
        break;
      case ExperimentKind::compare:
        run_compare(cfg, out);
        break;
      case ExperimentKind::ancient_pipeline:
        run_ancient(cfg, out);
        break;
      case ExperimentKind::backward_limit:
        run_backward(cfg, out);
        break;
    }
    outcome.complete = true;
  } catch (const Error& e) {
    outcome.error = std::string(e.kind()) + ": " + e.what();
  }
  out.manifest(cfg, outcome.complete, outcome.error);
  outcome.files = out.files();
  return outcome;
}

}  // namespace ovalflow
