#include "emden/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "emden/errors.hpp"

namespace emden {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorCode::ConfigError, path + ": " + what);
}

void known_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) {
    bad(path, "expected an object");
  }
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      bad(path + "." + key, "unknown key");
    }
  }
}

double number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number()) {
    bad(path + "." + key, "expected a number");
  }
  return v.get<double>();
}

double required_number(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) {
    bad(path + "." + key, "missing");
  }
  return number(obj, path, key, 0.0);
}

std::size_t count(const json& obj, const std::string& path, const char* key, std::size_t fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    bad(path + "." + key, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> vec(const json& v, const std::string& path) {
  if (!v.is_array()) {
    bad(path, "expected an array of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      bad(path + "[" + std::to_string(i) + "]", "expected a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::optional<double> auto_or_number(const json& obj, const std::string& path, const char* key,
                                     const char* keyword) {
  if (!obj.contains(key) || obj.at(key).is_null()) {
    return std::nullopt;
  }
  const json& v = obj.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() != keyword) {
      bad(path + "." + key, std::string("expected a number or \"") + keyword + "\"");
    }
    return std::nullopt;
  }
  if (!v.is_number()) {
    bad(path + "." + key, std::string("expected a number or \"") + keyword + "\"");
  }
  return v.get<double>();
}

Domain parse_domain(const json& d, int n) {
  const std::string path = "spec.domain";
  known_keys(d, path, {"kind", "radius", "center", "half_width", "lo", "hi"});
  if (!d.contains("kind") || !d.at("kind").is_string()) {
    bad(path + ".kind", "expected \"ball\", \"cube\" or \"box\"");
  }
  const std::string kind = d.at("kind").get<std::string>();
  Domain dom;
  if (kind == "ball") {
    dom = Domain::ball(n, number(d, path, "radius", 1.0));
    if (d.contains("center")) {
      dom.center = vec(d.at("center"), path + ".center");
    }
    if (!(dom.radius > 0.0)) {
      bad(path + ".radius", "must be positive");
    }
  } else if (kind == "cube") {
    const double hw = number(d, path, "half_width", 1.0);
    if (!(hw > 0.0)) {
      bad(path + ".half_width", "must be positive");
    }
    dom = Domain::cube(n, hw);
  } else if (kind == "box") {
    dom.kind = DomainKind::Box;
    if (!d.contains("lo") || !d.contains("hi")) {
      bad(path, "box needs lo and hi");
    }
    dom.lo = vec(d.at("lo"), path + ".lo");
    dom.hi = vec(d.at("hi"), path + ".hi");
    for (std::size_t k = 0; k < dom.lo.size() && k < dom.hi.size(); ++k) {
      if (!(dom.lo[k] < dom.hi[k])) {
        bad(path, "lo must be below hi on every axis");
      }
    }
  } else {
    bad(path + ".kind", "expected \"ball\", \"cube\" or \"box\"");
  }
  if (dom.dimension() != n) {
    bad(path, "dimension does not match problem.N");
  }
  return dom;
}

json domain_json(const Domain& d) {
  if (d.kind == DomainKind::Ball) {
    return {{"kind", "ball"}, {"radius", d.radius}, {"center", d.center}};
  }
  return {{"kind", "box"}, {"lo", d.lo}, {"hi", d.hi}};
}

}  // namespace

bool RunConfig::wants(const std::string& format) const {
  for (const auto& f : output.formats) {
    if (f == format) {
      return true;
    }
  }
  return false;
}

std::filesystem::path default_output_directory() {
  if (const char* env = std::getenv("EMDEN_GLUE_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

RunConfig parse_config(const json& j) {
  known_keys(j, "config", {"problem", "profile", "spec", "weights", "disc", "picard", "output", "seed"});
  RunConfig cfg;

  if (!j.contains("problem")) {
    bad("problem", "missing");
  }
  const json& pr = j.at("problem");
  known_keys(pr, "problem", {"N", "p"});
  if (!pr.contains("N") || !pr.at("N").is_number_integer()) {
    bad("problem.N", "expected an integer");
  }
  cfg.problem.dimension = pr.at("N").get<int>();
  cfg.problem.exponent = required_number(pr, "problem", "p");
  validate(cfg.problem);
  const int n = cfg.problem.dimension;

  if (j.contains("profile")) {
    const json& p = j.at("profile");
    known_keys(p, "profile", {"tol", "t_min", "t_max", "delta", "dt", "normalize_alpha"});
    cfg.profile.tol = number(p, "profile", "tol", cfg.profile.tol);
    cfg.profile.t_min = number(p, "profile", "t_min", cfg.profile.t_min);
    cfg.profile.t_max = number(p, "profile", "t_max", cfg.profile.t_max);
    cfg.profile.delta = number(p, "profile", "delta", cfg.profile.delta);
    cfg.profile.dt = number(p, "profile", "dt", cfg.profile.dt);
    if (p.contains("normalize_alpha") && !p.at("normalize_alpha").is_null()) {
      cfg.normalize_alpha = number(p, "profile", "normalize_alpha", 0.0);
      if (!(*cfg.normalize_alpha > 0.0)) {
        bad("profile.normalize_alpha", "must be positive");
      }
    }
    if (!(cfg.profile.tol > 0.0) || !(cfg.profile.dt > 0.0) || !(cfg.profile.t_max > 0.0) ||
        !(cfg.profile.t_min < 0.0) || !(cfg.profile.delta > 0.0)) {
      bad("profile", "tol, dt, t_max, delta must be positive and t_min negative");
    }
  }

  if (!j.contains("spec")) {
    bad("spec", "missing");
  }
  {
    const json& s = j.at("spec");
    known_keys(s, "spec", {"points", "epsilons", "R", "cone_a", "domain"});
    cfg.spec.dimension = n;
    if (!s.contains("points") || !s.at("points").is_array()) {
      bad("spec.points", "expected an array of points");
    }
    for (std::size_t i = 0; i < s.at("points").size(); ++i) {
      auto x = vec(s.at("points")[i], "spec.points[" + std::to_string(i) + "]");
      if (static_cast<int>(x.size()) != n) {
        bad("spec.points[" + std::to_string(i) + "]", "needs N coordinates");
      }
      cfg.spec.points.push_back(std::move(x));
    }
    if (!s.contains("epsilons")) {
      bad("spec.epsilons", "missing");
    }
    cfg.spec.epsilons = vec(s.at("epsilons"), "spec.epsilons");
    if (cfg.spec.epsilons.size() != cfg.spec.points.size()) {
      bad("spec.epsilons", "needs one entry per point");
    }
    cfg.spec.R = required_number(s, "spec", "R");
    cfg.spec.cone_a = number(s, "spec", "cone_a", cfg.spec.cone_a);
    cfg.spec.domain = s.contains("domain") ? parse_domain(s.at("domain"), n) : Domain::ball(n, 1.0);
    validate(cfg.spec);
  }

  if (j.contains("weights")) {
    const json& w = j.at("weights");
    known_keys(w, "weights", {"nu"});
    cfg.nu = auto_or_number(w, "weights", "nu", "default");
    select_weights(derive_constants(cfg.problem), cfg.nu);
  }

  // A box domain defaults to box3d with 65 nodes per axis, a ball to radial1d.
  cfg.disc.mode = cfg.spec.domain.kind == DomainKind::Box ? DiscMode::Box3d : DiscMode::Radial1d;
  const json disc = j.contains("disc") ? j.at("disc") : json::object();
  known_keys(disc, "disc", {"mode", "r_min_factor", "r_out", "grid_n"});
  if (disc.contains("mode")) {
    const std::string mode = disc.at("mode").is_string() ? disc.at("mode").get<std::string>() : "";
    if (mode == "radial1d") {
      cfg.disc.mode = DiscMode::Radial1d;
    } else if (mode == "box3d") {
      cfg.disc.mode = DiscMode::Box3d;
    } else {
      bad("disc.mode", "expected \"radial1d\" or \"box3d\"");
    }
  }
  if (cfg.disc.mode == DiscMode::Box3d) {
    cfg.disc.grid_n = 65;
  }
  cfg.disc.r_min_factor = number(disc, "disc", "r_min_factor", cfg.disc.r_min_factor);
  cfg.disc.r_out = number(disc, "disc", "r_out", cfg.disc.r_out);
  cfg.disc.grid_n = count(disc, "disc", "grid_n", cfg.disc.grid_n);
  {
    // Catches IncompatibleDomain and coarse grids before any numerics.
    SingularSpec copy = cfg.spec;
    make_discretization(copy, cfg.disc);
  }

  if (j.contains("picard")) {
    const json& p = j.at("picard");
    known_keys(p, "picard", {"stop_tol", "max_iter", "beta", "cg_tol", "cg_max_iter", "general_exponent"});
    cfg.picard.stop_tol = number(p, "picard", "stop_tol", cfg.picard.stop_tol);
    cfg.picard.max_iter = count(p, "picard", "max_iter", cfg.picard.max_iter);
    cfg.picard.beta = auto_or_number(p, "picard", "beta", "auto");
    cfg.picard.solve.cg_tol = number(p, "picard", "cg_tol", cfg.picard.solve.cg_tol);
    cfg.picard.solve.max_iter = count(p, "picard", "cg_max_iter", cfg.picard.solve.max_iter);
    if (p.contains("general_exponent")) {
      if (!p.at("general_exponent").is_boolean()) {
        bad("picard.general_exponent", "expected a boolean");
      }
      cfg.picard.general_exponent = p.at("general_exponent").get<bool>();
    }
    if (!(cfg.picard.stop_tol > 0.0) || cfg.picard.max_iter == 0 || !(cfg.picard.solve.cg_tol > 0.0)) {
      bad("picard", "stop_tol, max_iter and cg_tol must be positive");
    }
    if (cfg.picard.beta && !(*cfg.picard.beta > 0.0)) {
      bad("picard.beta", "must be positive");
    }
  }

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) {
      bad("seed", "expected a non-negative integer");
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }

  cfg.output.directory = default_output_directory();
  if (j.contains("output")) {
    const json& o = j.at("output");
    known_keys(o, "output", {"directory", "formats"});
    if (o.contains("directory")) {
      if (!o.at("directory").is_string()) {
        bad("output.directory", "expected a string");
      }
      cfg.output.directory = o.at("directory").get<std::string>();
    }
    if (o.contains("formats")) {
      if (!o.at("formats").is_array()) {
        bad("output.formats", "expected an array");
      }
      cfg.output.formats.clear();
      for (const auto& f : o.at("formats")) {
        if (!f.is_string() || (f.get<std::string>() != "csv" && f.get<std::string>() != "json")) {
          bad("output.formats", "entries must be \"csv\" or \"json\"");
        }
        cfg.output.formats.push_back(f.get<std::string>());
      }
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::ConfigError, "cannot open config " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["problem"] = {{"N", c.problem.dimension}, {"p", c.problem.exponent}};
  j["profile"] = {{"tol", c.profile.tol},     {"t_min", c.profile.t_min}, {"t_max", c.profile.t_max},
                  {"delta", c.profile.delta}, {"dt", c.profile.dt},
                  {"normalize_alpha", c.normalize_alpha ? json(*c.normalize_alpha) : json(nullptr)}};
  j["spec"] = {{"points", c.spec.points}, {"epsilons", c.spec.epsilons}, {"R", c.spec.R},
               {"cone_a", c.spec.cone_a}, {"domain", domain_json(c.spec.domain)}};
  j["weights"] = {{"nu", c.nu ? json(*c.nu) : json("default")}};
  j["disc"] = {{"mode", c.disc.mode == DiscMode::Radial1d ? "radial1d" : "box3d"},
               {"r_min_factor", c.disc.r_min_factor},
               {"r_out", c.disc.r_out},
               {"grid_n", c.disc.grid_n}};
  j["picard"] = {{"stop_tol", c.picard.stop_tol},
                 {"max_iter", c.picard.max_iter},
                 {"beta", c.picard.beta ? json(*c.picard.beta) : json("auto")},
                 {"cg_tol", c.picard.solve.cg_tol},
                 {"cg_max_iter", c.picard.solve.max_iter},
                 {"general_exponent", c.picard.general_exponent}};
  j["seed"] = c.seed;
  j["output"] = {{"directory", c.output.directory.string()}, {"formats", c.output.formats}};
  return j;
}

json tolerances(const RunConfig& c) {
  const VerifyOptions v;
  return {{"profile_tol", c.profile.tol},
          {"picard_stop_tol", c.picard.stop_tol},
          {"cg_tol", c.picard.solve.cg_tol},
          {"residual_tol", v.residual_tol},
          {"truncation_tol", v.truncation_tol},
          {"asymptote_threshold", v.asymptote_threshold},
          {"sandwich_slack", v.sandwich_slack}};
}

}  // namespace emden
