// gc3b command-line front end.
//
// Subcommands: orbit, portrait, fixedpoints, anholonomy, validate, spectrum.
// A run is described by a strict JSON config (unknown keys rejected),
// overridable from the command line with --set path=value. Outputs are CSV and
// JSON files written atomically under --out, plus a manifest echoing the
// resolved config; identical configs produce byte-identical outputs.
//
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 singular
// configuration.

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gc3b/gc3b.h"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitSingular = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunError : std::runtime_error {
  RunError(int exit_code_, const std::string& what)
      : std::runtime_error(what), exit_code(exit_code_) {}
  int exit_code;
};

int exit_code_of(gc3b_status st) {
  switch (st) {
    case GC3B_OK:
      return 0;
    case GC3B_ERR_INVALID_ARGUMENT:
    case GC3B_ERR_UNSUPPORTED_FORM:
    case GC3B_ERR_NOT_SYMMETRIC:
      return kExitConfig;
    case GC3B_ERR_ZERO_SIZE_SHAPE:
    case GC3B_ERR_SINGULAR_CONFIGURATION:
    case GC3B_ERR_SINGULAR_OPERATOR:
      return kExitSingular;
    default:
      return kExitNumerical;
  }
}

void check(gc3b_status st) {
  if (st != GC3B_OK) throw RunError(exit_code_of(st), gc3b_last_error());
}

// Fixed float formatting: 17 significant digits, locale-free.
std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

// JSON-safe variant: non-finite values become null.
std::string fmt_json(double v) { return std::isfinite(v) ? fmt(v) : "null"; }

// ----- strict config access -----

void require_object(const json& v, const std::string& where) {
  if (!v.is_object()) throw ConfigError(where + " must be an object");
}

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& required,
                const std::set<std::string>& optional) {
  require_object(obj, where);
  for (const auto& [key, _] : obj.items()) {
    if (!required.count(key) && !optional.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) {
      throw ConfigError("missing key '" + key + "' in " + where);
    }
  }
}

double get_num(const json& obj, const std::string& where,
               const std::string& key) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw ConfigError(where + "." + key + " must be a number");
  }
  return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& where,
            const std::string& key) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    throw ConfigError(where + "." + key + " must be an integer");
  }
  return obj[key].get<int>();
}

std::vector<double> get_num_array(const json& v, const std::string& where,
                                  size_t exact = 0) {
  if (!v.is_array() || (exact != 0 && v.size() != exact)) {
    throw ConfigError(where + " must be an array" +
                      (exact ? " of " + std::to_string(exact) + " numbers"
                             : " of numbers"));
  }
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(where + " must contain numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

// ----- config blocks -----

using PotentialPtr =
    std::unique_ptr<gc3b_potential, decltype(&gc3b_potential_destroy)>;

PotentialPtr parse_potential(const json& cfg) {
  if (!cfg.contains("potential")) {
    throw ConfigError("missing 'potential' block");
  }
  const json& blk = cfg["potential"];
  require_object(blk, "potential");
  if (!blk.contains("kind") || !blk["kind"].is_string()) {
    throw ConfigError("potential.kind must be a string");
  }
  const std::string kind = blk["kind"].get<std::string>();
  gc3b_potential* raw = nullptr;
  if (kind == "power") {
    check_keys(blk, "potential", {"kind", "g", "lambda"}, {});
    check(gc3b_potential_power(get_num(blk, "potential", "g"),
                               get_num(blk, "potential", "lambda"), &raw));
  } else if (kind == "sum") {
    check_keys(blk, "potential", {"kind", "terms"}, {});
    if (!blk["terms"].is_array() || blk["terms"].empty()) {
      throw ConfigError("potential.terms must be a non-empty array");
    }
    std::vector<double> g, lambda;
    for (const auto& t : blk["terms"]) {
      check_keys(t, "potential.terms[]", {"g", "lambda"}, {});
      g.push_back(get_num(t, "potential.terms[]", "g"));
      lambda.push_back(get_num(t, "potential.terms[]", "lambda"));
    }
    check(gc3b_potential_sum(g.data(), lambda.data(),
                             static_cast<int>(g.size()), &raw));
  } else if (kind == "polynomial") {
    check_keys(blk, "potential", {"kind", "terms"}, {});
    if (!blk["terms"].is_array() || blk["terms"].empty()) {
      throw ConfigError("potential.terms must be a non-empty array");
    }
    std::vector<double> coeff;
    std::vector<int> s_power, f_exp;
    for (const auto& t : blk["terms"]) {
      check_keys(t, "potential.terms[]", {"coeff", "s_power", "f_exp"}, {});
      coeff.push_back(get_num(t, "potential.terms[]", "coeff"));
      s_power.push_back(get_int(t, "potential.terms[]", "s_power"));
      if (!t["f_exp"].is_array() || t["f_exp"].size() != 3) {
        throw ConfigError("potential.terms[].f_exp must have 3 entries");
      }
      for (const auto& e : t["f_exp"]) {
        if (!e.is_number_integer() || e.get<int>() < 0) {
          throw ConfigError("potential.terms[].f_exp entries must be "
                            "nonnegative integers");
        }
        f_exp.push_back(e.get<int>());
      }
    }
    check(gc3b_potential_polynomial(coeff.data(), s_power.data(),
                                    f_exp.data(),
                                    static_cast<int>(coeff.size()), &raw));
  } else {
    throw ConfigError("potential.kind must be power, sum, or polynomial");
  }
  return PotentialPtr(raw, &gc3b_potential_destroy);
}

struct ShapeSpec {
  double S = 0.0;
  double xi[3] = {0.0, 0.0, 1.0};
  bool has_orientation = false;
};

// shape block: either explicit guiding-center coordinates
// {"positions": {"x": [..3..], "y": [..3..]}}, or a size "S" plus an
// optional shape direction given as "xi": [3] or polar "theta"/"phi"
// about the area axis (xi1 = sin t cos p, xi2 = cos t, xi3 = sin t sin p).
ShapeSpec parse_shape(const json& cfg, bool need_orientation) {
  if (!cfg.contains("shape")) throw ConfigError("missing 'shape' block");
  const json& blk = cfg["shape"];
  require_object(blk, "shape");
  ShapeSpec out;
  if (blk.contains("positions")) {
    check_keys(blk, "shape", {"positions"}, {});
    const json& pos = blk["positions"];
    check_keys(pos, "shape.positions", {"x", "y"}, {});
    const auto x = get_num_array(pos["x"], "shape.positions.x", 3);
    const auto y = get_num_array(pos["y"], "shape.positions.y", 3);
    check(gc3b_shape_from_coordinates(x.data(), y.data(), &out.S, out.xi,
                                      nullptr));
    out.has_orientation = true;
    return out;
  }
  check_keys(blk, "shape", {"S"}, {"xi", "theta", "phi"});
  out.S = get_num(blk, "shape", "S");
  if (blk.contains("xi")) {
    if (blk.contains("theta") || blk.contains("phi")) {
      throw ConfigError("shape: give either xi or theta/phi, not both");
    }
    const auto xi = get_num_array(blk["xi"], "shape.xi", 3);
    std::copy(xi.begin(), xi.end(), out.xi);
    out.has_orientation = true;
  } else if (blk.contains("theta") || blk.contains("phi")) {
    const double theta = get_num(blk, "shape", "theta");
    const double phi =
        blk.contains("phi") ? get_num(blk, "shape", "phi") : 0.0;
    out.xi[0] = std::sin(theta) * std::cos(phi);
    out.xi[1] = std::cos(theta);
    out.xi[2] = std::sin(theta) * std::sin(phi);
    out.has_orientation = true;
  }
  if (need_orientation && !out.has_orientation) {
    throw ConfigError("shape: this command needs xi, theta/phi, or positions");
  }
  return out;
}

struct DynamicsSpec {
  double omega_c = 0.0;
  double t_end = 0.0;
  double tol = 1e-10;
};

DynamicsSpec parse_dynamics(const json& cfg, bool need_t_end) {
  DynamicsSpec out;
  if (!cfg.contains("dynamics")) {
    if (need_t_end) throw ConfigError("missing 'dynamics' block");
    return out;
  }
  const json& blk = cfg["dynamics"];
  check_keys(blk, "dynamics", {}, {"omega_c", "t_end", "tol"});
  if (blk.contains("omega_c")) out.omega_c = get_num(blk, "dynamics", "omega_c");
  if (blk.contains("t_end")) out.t_end = get_num(blk, "dynamics", "t_end");
  if (blk.contains("tol")) out.tol = get_num(blk, "dynamics", "tol");
  if (out.tol <= 0.0) throw ConfigError("dynamics.tol must be positive");
  if (need_t_end && out.t_end <= 0.0) {
    throw ConfigError("dynamics.t_end must be positive");
  }
  return out;
}

// ----- output plumbing -----

struct OutputSink {
  std::filesystem::path dir;
  std::string prefix;
  std::vector<std::pair<std::string, std::string>> files;  // name -> bytes

  void add(const std::string& suffix, std::string bytes) {
    files.emplace_back(prefix + "_" + suffix, std::move(bytes));
  }

  // Atomic per-file commit: write to a temporary then rename into place.
  void commit(const std::string& command, const json& resolved) {
    json manifest;
    manifest["command"] = command;
    manifest["version"] = gc3b_version();
    manifest["config"] = resolved;
    json names = json::array();
    for (const auto& [name, _] : files) names.push_back(name);
    manifest["outputs"] = names;
    files.emplace_back(prefix + "_manifest.json", manifest.dump(2) + "\n");

    std::filesystem::create_directories(dir);
    for (const auto& [name, bytes] : files) {
      const auto path = dir / name;
      const auto tmp = dir / (name + ".tmp");
      {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
          throw RunError(kExitConfig, "cannot write " + tmp.string());
        }
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f.good()) {
          throw RunError(kExitConfig, "short write to " + tmp.string());
        }
      }
      std::filesystem::rename(tmp, path);
    }
  }
};

int worker_count() {
  if (const char* env = std::getenv("GC3B_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return std::min(n, 256);
  }
  return 1;
}

// ----- subcommand runners -----

void run_orbit(const json& cfg, OutputSink& sink) {
  check_keys(cfg, "config", {"potential", "shape", "dynamics"}, {"output"});
  auto pot = parse_potential(cfg);
  const ShapeSpec shape = parse_shape(cfg, true);
  const DynamicsSpec dyn = parse_dynamics(cfg, true);

  gc3b_orbit* raw = nullptr;
  check(gc3b_orbit_run(pot.get(), shape.S, shape.xi, dyn.t_end, dyn.tol,
                       &raw));
  std::unique_ptr<gc3b_orbit, decltype(&gc3b_orbit_destroy)> orbit(
      raw, &gc3b_orbit_destroy);

  std::ostringstream csv;
  csv << "t,xi1,xi2,xi3,energy\n";
  const long n = gc3b_orbit_sample_count(orbit.get());
  for (long i = 0; i < n; ++i) {
    double t = 0.0, xi[3] = {0, 0, 0}, v = 0.0;
    check(gc3b_orbit_sample(orbit.get(), i, &t, xi));
    check(gc3b_potential_eval(pot.get(), shape.S, xi, &v));
    csv << fmt(t) << ',' << fmt(xi[0]) << ',' << fmt(xi[1]) << ','
        << fmt(xi[2]) << ',' << fmt(v) << '\n';
  }
  sink.add("orbit.csv", csv.str());
}

void run_portrait(const json& cfg, OutputSink& sink) {
  check_keys(cfg, "config", {"potential", "shape", "portrait"}, {"output"});
  auto pot = parse_potential(cfg);
  const ShapeSpec shape = parse_shape(cfg, false);
  const json& blk = cfg["portrait"];
  check_keys(blk, "portrait", {"energies"}, {"resolution"});
  const auto energies = get_num_array(blk["energies"], "portrait.energies");
  if (energies.empty()) {
    throw ConfigError("portrait.energies must be non-empty");
  }
  const int resolution =
      blk.contains("resolution") ? get_int(blk, "portrait", "resolution") : 64;

  // Independent level sets fan out to GC3B_WORKERS threads; results are
  // merged in the order the energies were given, so output is deterministic.
  using PortraitPtr =
      std::unique_ptr<gc3b_portrait, decltype(&gc3b_portrait_destroy)>;
  std::vector<PortraitPtr> parts;
  std::vector<gc3b_status> statuses(energies.size(), GC3B_OK);
  std::vector<gc3b_portrait*> raws(energies.size(), nullptr);
  {
    std::atomic<size_t> next{0};
    const int workers =
        std::min<int>(worker_count(), static_cast<int>(energies.size()));
    auto work = [&] {
      for (size_t i = next.fetch_add(1); i < energies.size();
           i = next.fetch_add(1)) {
        statuses[i] = gc3b_portrait_run(pot.get(), shape.S, &energies[i], 1,
                                        resolution, &raws[i]);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
  }
  for (auto* raw : raws) parts.emplace_back(raw, &gc3b_portrait_destroy);
  for (auto st : statuses) check(st);

  const char* class_names[] = {"periodic", "fixed_point", "separatrix_suspect",
                               "truncated"};
  std::ostringstream csv;
  csv << "curve,energy,classification,point,t,xi1,xi2,xi3\n";
  int curve_id = 0;
  for (const auto& part : parts) {
    const int nc = gc3b_portrait_curve_count(part.get());
    for (int c = 0; c < nc; ++c) {
      double energy = 0.0;
      int cls = 0;
      long npts = 0;
      check(gc3b_portrait_curve_info(part.get(), c, &energy, &cls, &npts));
      for (long p = 0; p < npts; ++p) {
        double t = 0.0, xi[3] = {0, 0, 0};
        check(gc3b_portrait_curve_point(part.get(), c, p, &t, xi));
        csv << curve_id << ',' << fmt(energy) << ',' << class_names[cls]
            << ',' << p << ',' << fmt(t) << ',' << fmt(xi[0]) << ','
            << fmt(xi[1]) << ',' << fmt(xi[2]) << '\n';
      }
      ++curve_id;
    }
  }
  sink.add("portrait.csv", csv.str());
}

void run_fixedpoints(const json& cfg, OutputSink& sink) {
  check_keys(cfg, "config", {"potential", "shape"}, {"output"});
  auto pot = parse_potential(cfg);
  const ShapeSpec shape = parse_shape(cfg, false);

  gc3b_fixed_point_list* raw = nullptr;
  check(gc3b_fixed_points(pot.get(), shape.S, &raw));
  std::unique_ptr<gc3b_fixed_point_list,
                  decltype(&gc3b_fixed_point_list_destroy)>
      list(raw, &gc3b_fixed_point_list_destroy);

  const char* stab_names[] = {"elliptic", "hyperbolic", "degenerate",
                              "singular"};
  std::ostringstream csv;
  csv << "xi1,xi2,xi3,stability,rate,value,residual\n";
  const int n = gc3b_fixed_point_count(list.get());
  for (int i = 0; i < n; ++i) {
    double xi[3] = {0, 0, 0}, rate = 0, value = 0, residual = 0;
    int stab = 0;
    check(gc3b_fixed_point_get(list.get(), i, xi, &stab, &rate, &value,
                               &residual));
    csv << fmt(xi[0]) << ',' << fmt(xi[1]) << ',' << fmt(xi[2]) << ','
        << stab_names[stab] << ',' << fmt(rate) << ',' << fmt(value) << ','
        << fmt(residual) << '\n';
  }
  sink.add("fixedpoints.csv", csv.str());
}

void run_anholonomy(const json& cfg, OutputSink& sink) {
  check_keys(cfg, "config", {"potential", "shape", "dynamics"}, {"output"});
  auto pot = parse_potential(cfg);
  const ShapeSpec shape = parse_shape(cfg, true);
  const DynamicsSpec dyn = parse_dynamics(cfg, false);

  gc3b_anholonomy_report rep{};
  check(gc3b_anholonomy(pot.get(), shape.S, shape.xi, dyn.omega_c, dyn.tol,
                        &rep));

  std::ostringstream js;
  js << "{\n"
     << "  \"T_s\": " << fmt_json(rep.T_s) << ",\n"
     << "  \"omega_dyn_avg\": " << fmt_json(rep.omega_dyn_avg) << ",\n"
     << "  \"Omega\": " << fmt_json(rep.Omega) << ",\n"
     << "  \"omega_geo\": " << fmt_json(rep.omega_geo) << ",\n"
     << "  \"omega_r\": " << fmt_json(rep.omega_r) << ",\n"
     << "  \"I_s\": " << fmt_json(rep.I_s) << ",\n"
     << "  \"delta_gamma_direct\": " << fmt_json(rep.delta_gamma_direct)
     << ",\n"
     << "  \"spin\": " << fmt_json(rep.spin) << ",\n"
     << "  \"energy\": " << fmt_json(rep.energy) << ",\n"
     << "  \"fixed_point\": " << (rep.fixed_point ? "true" : "false") << ",\n"
     << "  \"gauge_singularity\": "
     << (rep.gauge_singularity ? "true" : "false") << "\n"
     << "}\n";
  sink.add("anholonomy.json", js.str());
}

void run_validate(const json& cfg, OutputSink& sink) {
  check_keys(cfg, "config", {"potential", "shape", "validate"}, {"output"});
  auto pot = parse_potential(cfg);
  const ShapeSpec shape = parse_shape(cfg, true);
  const json& blk = cfg["validate"];
  check_keys(blk, "validate", {"b_values", "t_obs"}, {});
  const auto b_values = get_num_array(blk["b_values"], "validate.b_values");
  if (b_values.empty()) {
    throw ConfigError("validate.b_values must be non-empty");
  }
  const double t_obs = get_num(blk, "validate", "t_obs");

  std::vector<double> errors(b_values.size(), 0.0);
  double slope = 0.0;
  check(gc3b_b_sweep(pot.get(), shape.S, shape.xi, b_values.data(),
                     static_cast<int>(b_values.size()), t_obs, errors.data(),
                     &slope));

  std::ostringstream csv;
  csv << "B,error\n";
  for (size_t i = 0; i < b_values.size(); ++i) {
    csv << fmt(b_values[i]) << ',' << fmt(errors[i]) << '\n';
  }
  sink.add("sweep.csv", csv.str());

  std::ostringstream js;
  js << "{\n  \"slope\": " << fmt_json(slope) << ",\n  \"points\": [\n";
  for (size_t i = 0; i < b_values.size(); ++i) {
    js << "    {\"B\": " << fmt_json(b_values[i])
       << ", \"error\": " << fmt_json(errors[i]) << "}"
       << (i + 1 < b_values.size() ? "," : "") << "\n";
  }
  js << "  ]\n}\n";
  sink.add("sweep.json", js.str());
}

void run_spectrum(const json& cfg, OutputSink& sink) {
  check_keys(cfg, "config", {"potential", "spectrum"}, {"dynamics", "output"});
  auto pot = parse_potential(cfg);
  const json& blk = cfg["spectrum"];
  check_keys(blk, "spectrum", {"s_max"}, {"l_max"});
  const int s_max = get_int(blk, "spectrum", "s_max");
  const int l_max = blk.contains("l_max") ? get_int(blk, "spectrum", "l_max")
                                          : 0;
  const DynamicsSpec dyn = parse_dynamics(cfg, false);

  gc3b_spectrum_table* raw = nullptr;
  check(gc3b_spectrum_run(pot.get(), s_max, dyn.omega_c, l_max, &raw));
  std::unique_ptr<gc3b_spectrum_table, decltype(&gc3b_spectrum_destroy)>
      table(raw, &gc3b_spectrum_destroy);

  std::ostringstream csv;
  csv << "l,s,n,irrep,E\n";
  const long rows = gc3b_spectrum_row_count(table.get());
  for (long i = 0; i < rows; ++i) {
    int l = 0, s = 0, n = 0;
    const char* irrep = nullptr;
    double e = 0.0;
    check(gc3b_spectrum_row(table.get(), i, &l, &s, &n, &irrep, nullptr, &e,
                            nullptr));
    csv << l << ',' << s << ',' << n << ',' << irrep << ',' << fmt(e) << '\n';
  }
  sink.add("spectrum.csv", csv.str());
}

// ----- config assembly -----

json load_config(const std::string& path, const std::string& command) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path);
  json cfg;
  try {
    cfg = json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  require_object(cfg, "config");
  // A manifest from a previous run is accepted in place of a config.
  if (cfg.contains("command") && cfg.contains("config")) {
    if (!cfg["command"].is_string() ||
        cfg["command"].get<std::string>() != command) {
      throw ConfigError("manifest command does not match subcommand");
    }
    cfg = cfg["config"];
    require_object(cfg, "config");
  }
  return cfg;
}

void apply_override(json& cfg, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--set expects path.to.key=value: " + spec);
  }
  const std::string path = spec.substr(0, eq);
  const std::string value = spec.substr(eq + 1);
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value;  // bare strings need no quotes
  }
  json* node = &cfg;
  size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(
        start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("empty key in --set path: " + spec);
    if (dot == std::string::npos) {
      (*node)[key] = parsed;
      break;
    }
    node = &(*node)[key];
    if (!node->is_object() && !node->is_null()) {
      throw ConfigError("--set path crosses a non-object: " + spec);
    }
    start = dot + 1;
  }
}

std::string resolve_prefix(const json& cfg, const std::string& flag_prefix,
                           const std::string& command) {
  if (!flag_prefix.empty()) return flag_prefix;
  if (cfg.contains("output")) {
    const json& blk = cfg["output"];
    check_keys(blk, "output", {}, {"prefix"});
    if (blk.contains("prefix")) {
      if (!blk["prefix"].is_string() ||
          blk["prefix"].get<std::string>().empty()) {
        throw ConfigError("output.prefix must be a non-empty string");
      }
      return blk["prefix"].get<std::string>();
    }
  }
  return command;
}

int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir, const std::string& flag_prefix,
                const std::vector<std::string>& overrides) {
  try {
    json cfg = load_config(config_path, command);
    for (const auto& spec : overrides) apply_override(cfg, spec);

    OutputSink sink;
    sink.dir = out_dir;
    sink.prefix = resolve_prefix(cfg, flag_prefix, command);

    if (command == "orbit") {
      run_orbit(cfg, sink);
    } else if (command == "portrait") {
      run_portrait(cfg, sink);
    } else if (command == "fixedpoints") {
      run_fixedpoints(cfg, sink);
    } else if (command == "anholonomy") {
      run_anholonomy(cfg, sink);
    } else if (command == "validate") {
      run_validate(cfg, sink);
    } else {
      run_spectrum(cfg, sink);
    }
    sink.commit(command, cfg);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const RunError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gc3b: guiding-center three-body shape dynamics"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", prefix;
  std::vector<std::string> overrides;

  const char* commands[] = {"orbit",      "portrait", "fixedpoints",
                            "anholonomy", "validate", "spectrum"};
  const char* blurbs[] = {
      "integrate the shape flow and write the trajectory",
      "trace constant-energy level sets on the shape sphere",
      "locate and classify the critical shapes",
      "split the triangle rotation into dynamical and geometric parts",
      "compare the reduced model against the exact flow over a field sweep",
      "diagonalize the shape sectors and write the level table"};
  std::vector<CLI::App*> subs;
  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], blurbs[i]);
    sub->add_option("-c,--config", config_path, "JSON config (or manifest)")
        ->required();
    sub->add_option("-o,--out", out_dir, "output directory");
    sub->add_option("-p,--prefix", prefix, "output file prefix");
    sub->add_option("-s,--set", overrides,
                    "config override, path.to.key=value (repeatable)");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  for (int i = 0; i < 6; ++i) {
    if (subs[i]->parsed()) {
      return run_command(commands[i], config_path, out_dir, prefix,
                         overrides);
    }
  }
  return kExitConfig;
}
