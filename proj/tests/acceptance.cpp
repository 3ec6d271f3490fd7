// Acceptance gate: one self-contained check per shipped guarantee, each
// printed as a single PASS/FAIL line. Exits nonzero if any check fails.
//
// Usage: gc3b_acceptance <path-to-cli-binary>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/anholonomy.hpp"
#include "core/geometry.hpp"
#include "core/permutation.hpp"
#include "core/potential.hpp"
#include "core/quantum.hpp"
#include "core/reference.hpp"
#include "core/shape_dynamics.hpp"

using namespace gc3b;
namespace fs = std::filesystem;

namespace {

std::string g_cli_path;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double wrap_pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a > kPi) a -= 2.0 * kPi;
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

const Vec3 kStandardXi(std::sqrt(0.84), 0.4, 0.0);

GuidingCenterState standard_state() {
  const auto z = reconstruct_positions(std::sqrt(3.0) * Complex(0.05, -0.1),
                                       ShapePoint(1.0, kStandardXi), 0.2);
  GuidingCenterState s;
  for (int i = 0; i < 3; ++i) {
    s.x[i] = z[i].real();
    s.y[i] = z[i].imag();
  }
  return s;
}

// ----- criterion bodies (tolerances pinned inline) -----

// Triangle encoding round-trip: positions -> modes -> angles -> positions.
bool c01(std::string& note) {
  constexpr double kTol = 1e-10;
  constexpr double kBudgetSeconds = 1.0;
  std::mt19937 eng(12345u);
  auto coord = [&] { return 6.0 * (eng() / 4294967296.0) - 3.0; };
  const double t0 = now_seconds();
  double worst = 0.0;
  for (int it = 0; it < 1000; ++it) {
    GuidingCenterState st;
    for (int i = 0; i < 3; ++i) {
      st.x[i] = coord();
      st.y[i] = coord();
    }
    const auto dec = decompose(st);
    if (dec.psi.norm2() < 1e-10) continue;  // immeasurably degenerate draw
    const auto ang = spinor_angles(dec.psi);
    const auto shape = bloch_from_spinor(dec.psi);
    const auto z = reconstruct_positions(dec.centroid_mode, shape, ang.gamma);
    for (int i = 0; i < 3; ++i) {
      worst = std::max(worst, std::abs(Complex(st.x[i], st.y[i]) - z[i]));
    }
  }
  const double secs = now_seconds() - t0;
  note = "max position error " + sci(worst) + ", " + sci(secs) + " s";
  return worst < kTol && secs < kBudgetSeconds;
}

// Invariant drift of the canonical reduced flow over 1000 shape periods.
bool c02(std::string& note) {
  constexpr double kTol = 1e-9;
  const auto s0 = standard_state();
  double worst = 0.0;
  for (double lambda : {0.5, 2.0, 3.0}) {
    const auto pot = Potential::power(1.0, lambda);
    const double T = find_period(pot, ShapePoint(1.0, kStandardXi), 1e-9).period;
    const auto traj = integrate_gc6(pot, s0, 0.7, 1000.0 * T, 1e-9, 64);
    worst = std::max({worst, traj.max_drift_energy, traj.max_drift_L,
                      traj.max_drift_S});
  }
  note = "max relative drift " + sci(worst);
  return worst < kTol;
}

// Reduced shape flow tracks the full magnetic flow at strong field.
bool c03(std::string& note) {
  constexpr double kTol = 1e-6;
  double worst = 0.0;
  for (double lambda : {2.0, 3.0}) {
    const auto pot = Potential::power(1.0, lambda);
    const auto res =
        b_sweep(pot, ShapePoint(1.0, kStandardXi), {100.0}, 0.08);
    worst = std::max(worst, res.points[0].max_angle_error);
  }
  note = "max shape-angle error " + sci(worst) + " rad";
  return worst < kTol;
}

// Tracking error decreases with field strength at the expected order.
bool c04(std::string& note) {
  const auto pot = Potential::power(1.0, 2.0);
  const auto res = b_sweep(pot, ShapePoint(1.0, kStandardXi),
                           {50.0, 100.0, 200.0, 400.0}, 0.08);
  bool monotone = true;
  for (size_t i = 1; i < res.points.size(); ++i) {
    monotone = monotone &&
               res.points[i].max_angle_error < res.points[i - 1].max_angle_error;
  }
  note = "slope " + sci(res.slope) + (monotone ? ", errors decreasing"
                                               : ", errors NOT decreasing");
  return monotone && res.slope > -1.4 && res.slope < -0.6;
}

// Linear interaction: frozen shape, rigid rotation at omega_c + 6 g.
bool c05(std::string& note) {
  constexpr double kFreezeTol = 1e-12;
  constexpr double kRateTol = 1e-10;
  const double g = 0.8, wc = 0.5, T = 2.0;
  const auto pot = Potential::power(g, 1.0);
  const ShapePoint p0(1.3, Vec3(0.4, -0.6, 0.2).normalized());
  const auto traj = integrate_spinor(pot, spinor_from_shape(p0, 0.35), wc, T,
                                     1e-12);
  double freeze = 0.0;
  for (const auto& s : traj.samples) {
    freeze = std::max(freeze, (s.xi - p0.xi()).norm());
  }
  const double rate =
      (traj.samples.back().gamma - traj.samples.front().gamma) / T;
  const double rate_err = std::abs(rate - (wc + 6.0 * g));
  note = "shape drift " + sci(freeze) + ", rotation-rate error " +
         sci(rate_err);
  return freeze < kFreezeTol && rate_err < kRateTol;
}

// Quadratic interaction: closed-form latitude, period, and energy.
bool c06(std::string& note) {
  constexpr double kLatTol = 1e-9;
  constexpr double kPeriodTol = 1e-8;
  constexpr double kEnergyTol = 1e-12;
  const auto pot = Potential::power(1.0, 2.0);
  double lat = 0.0, per = 0.0, en = 0.0;
  for (double S : {1.0, 1.7}) {
    for (double c : {0.2, 0.5, 0.8}) {
      const ShapePoint p0(S, Vec3(std::sqrt(1.0 - c * c), c, 0.0));
      const auto pr = find_period(pot, p0, 1e-10);
      per = std::max(per, std::abs(pr.period - 2.0 * kPi / (24.0 * S * c)) /
                              pr.period);
      for (const auto& s : pr.orbit.samples) {
        lat = std::max(lat, std::abs(s.xi[1] - c));
      }
      en = std::max(en, std::abs(pot.eval_shape(p0) -
                                 6.0 * S * S * (3.0 - c * c)) /
                            (6.0 * S * S * (3.0 - c * c)));
    }
  }
  note = "latitude " + sci(lat) + ", period " + sci(per) + ", energy " +
         sci(en);
  return lat < kLatTol && per < kPeriodTol && en < kEnergyTol;
}

struct CensusEntry {
  Vec3 dir;
  Stability stability;
  double value;      // infinity allowed
  double rate;       // <= 0 means "do not check"
  double rate_rtol;
};

bool check_census(const Potential& pot, const std::vector<CensusEntry>& want,
                  std::string& why) {
  const auto fps = fixed_points(pot, 1.0);
  if (fps.size() != 8) {
    why = "expected 8 critical shapes, got " + std::to_string(fps.size());
    return false;
  }
  for (const auto& w : want) {
    const FixedPointReport* hit = nullptr;
    for (const auto& fp : fps) {
      if ((fp.xi_star - w.dir).norm() < 1e-6) hit = &fp;
    }
    if (!hit) {
      why = "no critical shape near the expected direction";
      return false;
    }
    if (hit->stability != w.stability) {
      why = "wrong stability class";
      return false;
    }
    if (std::isinf(w.value)) {
      if (!std::isinf(hit->value)) {
        why = "expected divergent value";
        return false;
      }
    } else if (std::abs(hit->value - w.value) > 1e-9 * std::abs(w.value)) {
      why = "wrong critical value " + sci(hit->value);
      return false;
    }
    if (w.rate > 0.0 &&
        std::abs(hit->rate - w.rate) > w.rate_rtol * w.rate) {
      why = "wrong linearization rate " + sci(hit->rate);
      return false;
    }
  }
  return true;
}

// Critical-shape census across repulsive, soft, and attractive interactions.
bool c07(std::string& note) {
  const double h = std::sqrt(3.0) / 2.0;
  const Vec3 pole_n(0, 1, 0), pole_s(0, -1, 0);
  const std::array<Vec3, 3> mk{Vec3(h, 0, -0.5), Vec3(-h, 0, -0.5),
                               Vec3(0, 0, 1)};
  const std::array<Vec3, 3> nk{Vec3(-h, 0, 0.5), Vec3(h, 0, 0.5),
                               Vec3(0, 0, -1)};
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<CensusEntry> cubic;
  cubic.push_back({pole_n, Stability::Elliptic, 24.0, 144.0, 1e-6});
  cubic.push_back({pole_s, Stability::Elliptic, 24.0, 144.0, 1e-6});
  for (const auto& d : nk) {
    cubic.push_back({d, Stability::Hyperbolic, 54.0, 108.0, 1e-6});
  }
  for (const auto& d : mk) {
    cubic.push_back({d, Stability::Elliptic, 66.0, 139.4274005, 1e-5});
  }

  std::vector<CensusEntry> soft;
  const double soft_pole_rate = 3.0 / (2.0 * std::sqrt(2.0));
  soft.push_back({pole_n, Stability::Elliptic, 3.0 * std::sqrt(2.0),
                  soft_pole_rate, 1e-6});
  soft.push_back({pole_s, Stability::Elliptic, 3.0 * std::sqrt(2.0),
                  soft_pole_rate, 1e-6});
  for (const auto& d : mk) {
    soft.push_back({d, Stability::Hyperbolic, 4.0, std::sqrt(2.0), 1e-6});
  }
  for (const auto& d : nk) {
    soft.push_back({d, Stability::Elliptic, 2.0 * std::sqrt(3.0), -1.0, 0.0});
  }

  std::vector<CensusEntry> attractive;
  const double att_pole_rate = 9.0 / (4.0 * std::sqrt(2.0));
  attractive.push_back({pole_n, Stability::Elliptic, 3.0 / std::sqrt(2.0),
                        att_pole_rate, 1e-6});
  attractive.push_back({pole_s, Stability::Elliptic, 3.0 / std::sqrt(2.0),
                        att_pole_rate, 1e-6});
  for (const auto& d : mk) {
    attractive.push_back(
        {d, Stability::Hyperbolic, 2.5, 3.561951712, 1e-5});
  }
  for (const auto& d : nk) {
    attractive.push_back({d, Stability::Singular, inf, -1.0, 0.0});
  }

  std::string why;
  if (!check_census(Potential::power(1.0, 3.0), cubic, why)) {
    note = "cubic interaction: " + why;
    return false;
  }
  if (!check_census(Potential::power(1.0, 0.5), soft, why)) {
    note = "square-root interaction: " + why;
    return false;
  }
  if (!check_census(Potential::power(1.0, -0.5), attractive, why)) {
    note = "attractive interaction: " + why;
    return false;
  }
  note = "3 interactions x 8 critical shapes classified";
  return true;
}

// The frequency split must agree with direct orientation integration.
bool c08(std::string& note) {
  constexpr double kTol = 1e-6;  // radians modulo a full turn
  double worst = 0.0;
  int orbits = 0;
  auto probe = [&](const Potential& pot, const Vec3& xi0) {
    const auto rep = report(pot, ShapePoint(1.0, xi0), 0.7, kTol);
    worst = std::max(
        worst, std::abs(wrap_pi(rep.delta_gamma_direct - rep.omega_r * rep.T_s)));
    ++orbits;
  };
  for (double lambda : {0.5, 3.0}) {
    const auto pot = Potential::power(1.0, lambda);
    for (double alpha : {0.3, 0.6, 0.9}) {
      probe(pot, Vec3(std::sin(alpha), std::cos(alpha), 0.0));
    }
  }
  const auto quad = Potential::power(1.0, 2.0);
  for (double c : {0.25, 0.5, 0.75}) {
    probe(quad, Vec3(std::sqrt(1.0 - c * c), c, 0.0));
  }
  note = std::to_string(orbits) + " orbits, max phase mismatch " + sci(worst) +
         " rad";
  return orbits == 9 && worst < kTol;
}

// Level-curve action: dI/dE = T / (2 pi) and T = (S/2) dOmega/dE.
bool c09(std::string& note) {
  constexpr double kTol = 1e-3;  // relative, central differences
  const Vec3 hint(0, 1, 0);
  double worst = 0.0;
  auto probe = [&](const Potential& pot, double E, double h) {
    const double spin = 1.0;
    const double ip = shape_action(pot, spin, E + h, hint);
    const double im = shape_action(pot, spin, E - h, hint);
    const double dI_dE = (ip - im) / (2.0 * h);
    const double dOmega_dE = (4.0 * kPi / spin) * dI_dE;

    const auto pts = level_set_points(pot, spin, E);
    size_t best = 0;
    for (size_t i = 1; i < pts.size(); ++i) {
      if ((pts[i] - hint).norm() < (pts[best] - hint).norm()) best = i;
    }
    const double T = find_period(pot, ShapePoint(spin, pts[best]), 1e-9).period;

    worst = std::max(worst, std::abs(2.0 * kPi * dI_dE - T) / T);
    worst = std::max(worst, std::abs(0.5 * spin * dOmega_dE - T) / T);
  };
  probe(Potential::power(1.0, 2.0), 15.0, 0.05);
  probe(Potential::power(1.0, 3.0), 30.0, 0.1);
  note = "max relative defect " + sci(worst);
  return worst < kTol;
}

// Operator algebra exactness: Casimir, linear and quadratic interactions.
bool c10(std::string& note) {
  double casimir = 0.0;
  {
    const int s = 200;
    const double j = 0.5 * (s - 1);
    const auto F = spin_matrices(s);
    const CMatrix c2 = F[0] * F[0] + F[1] * F[1] + F[2] * F[2];
    casimir = (c2 - j * (j + 1.0) * CMatrix::Identity(s, s))
                  .cwiseAbs()
                  .maxCoeff() /
              (j * (j + 1.0));
  }
  double linear = 0.0;
  {
    const auto pot = Potential::power(1.4, 1.0);
    for (int s = 1; s <= 50; ++s) {
      const CMatrix H = build_hamiltonian(pot, s);
      linear = std::max(
          linear,
          (H - 8.4 * s * CMatrix::Identity(s, s)).cwiseAbs().maxCoeff() /
              (8.4 * s));
    }
  }
  double quad = 0.0;
  {
    const auto pot = Potential::power(1.0, 2.0);
    for (int s : {2, 3, 5, 10, 25, 50}) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(build_hamiltonian(pot, s));
      std::vector<double> want;
      const double j = 0.5 * (s - 1);
      for (int k = 0; k < s; ++k) {
        const double m = j - k;
        want.push_back(18.0 * s * s - 6.0 - 24.0 * m * m);
      }
      std::sort(want.begin(), want.end());
      for (int k = 0; k < s; ++k) {
        quad = std::max(quad,
                        std::abs(es.eigenvalues()[k] - want[k]) / want[k]);
      }
    }
  }
  note = "casimir " + sci(casimir) + ", linear " + sci(linear) +
         ", quadratic " + sci(quad);
  return casimir < 1e-12 && linear < 1e-12 && quad < 1e-10;
}

// Relabeling symmetry: character table, completeness, commutant.
bool c11(std::string& note) {
  constexpr double kTableTol = 1e-12;
  constexpr double kCompletenessTol = 1e-12;
  constexpr double kCommutantTol = 1e-10;
  // Characters of the three irreducible blocks in group order
  // id, (12), (13), (23), (123), (132).
  const double chi_A1[6] = {1, 1, 1, 1, 1, 1};
  const double chi_A2[6] = {1, -1, -1, -1, 1, 1};
  const double chi_E[6] = {2, 0, 0, 0, -1, -1};
  const auto pot = Potential::power(1.0, 2.0);

  for (int s : {5, 24}) {
    const auto U = permutation_unitaries(s);
    const CMatrix H = build_hamiltonian(pot, s);
    const auto blocks = symmetry_blocks(H, U);

    if (blocks.mult_A1 + blocks.mult_A2 + blocks.mult_E != s) {
      note = "projector ranks do not fill the sector";
      return false;
    }
    // Representation characters decompose over the table.
    for (int g = 0; g < 6; ++g) {
      const double tr = U[g].trace().real();
      const double want = blocks.mult_A1 * chi_A1[g] +
                          blocks.mult_A2 * chi_A2[g] +
                          0.5 * blocks.mult_E * chi_E[g];
      if (std::abs(tr - want) > kTableTol * s) {
        note = "character mismatch at group element " + std::to_string(g);
        return false;
      }
    }
    const CMatrix id = CMatrix::Identity(s, s);
    const double complete =
        (blocks.P_A1 + blocks.P_A2 + blocks.P_E - id).cwiseAbs().maxCoeff();
    if (complete > kCompletenessTol) {
      note = "projectors do not resolve the identity: " + sci(complete);
      return false;
    }
    double comm = 0.0;
    for (const CMatrix* P : {&blocks.P_A1, &blocks.P_A2, &blocks.P_E}) {
      for (const auto& u : U) {
        comm = std::max(comm, (*P * u - u * *P).cwiseAbs().maxCoeff());
      }
      comm = std::max(comm, (*P * H - H * *P).cwiseAbs().maxCoeff() /
                                H.cwiseAbs().maxCoeff());
    }
    if (comm > kCommutantTol) {
      note = "projector fails to commute: " + sci(comm);
      return false;
    }
  }
  note = "sectors 5 and 24: table, completeness, commutant verified";
  return true;
}

// Quantum level spacing matches the classical precession frequency.
bool c12(std::string& note) {
  constexpr double kTol = 0.05;
  const int s = 60;
  const auto pot = Potential::power(1.0, 2.0);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(build_hamiltonian(pot, s));
  // Cluster the doubly degenerate ladder into distinct levels, ascending.
  std::vector<double> distinct;
  for (int i = 0; i < s; ++i) {
    const double e = es.eigenvalues()[i];
    if (distinct.empty() || e - distinct.back() > 1e-6 * std::abs(e)) {
      distinct.push_back(e);
    }
  }
  // Ascending distinct level k corresponds to |m| = (s-1)/2 - k; the gap
  // between k = 14 and k = 15 straddles |m| = 15, i.e. latitude c = 0.5.
  if (distinct.size() < 17) {
    note = "unexpected level clustering";
    return false;
  }
  const double spacing = distinct[15] - distinct[14];
  const double classical = 24.0 * s * 0.5;  // precession rate at c = 1/2
  const double rel = std::abs(spacing - classical) / classical;
  note = "spacing " + sci(spacing) + " vs classical " + sci(classical) +
         ", relative " + sci(rel);
  return rel < kTol;
}

// CLI runs are byte-for-byte deterministic.
bool c13(std::string& note) {
  if (g_cli_path.empty()) {
    note = "no CLI binary path provided";
    return false;
  }
  const fs::path root =
      fs::temp_directory_path() /
      ("gc3b_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(root);
  auto cleanup = [&] {
    std::error_code ec;
    fs::remove_all(root, ec);
  };

  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream f(root / name, std::ios::binary);
    f << body;
  };
  write("orbit.json",
        R"({"potential": {"kind": "power", "g": 1.0, "lambda": 2.0},
            "shape": {"S": 1.0, "xi": [0.916515138991168, 0.4, 0.0]},
            "dynamics": {"omega_c": 0.7, "t_end": 0.25, "tol": 1e-10}})");
  write("fixedpoints.json",
        R"({"potential": {"kind": "power", "g": 1.0, "lambda": 0.5},
            "shape": {"S": 1.0}})");
  write("spectrum.json",
        R"({"potential": {"kind": "power", "g": 1.0, "lambda": 1.0},
            "spectrum": {"s_max": 6, "l_max": 1},
            "dynamics": {"omega_c": 2.0}})");

  auto run = [&](const std::string& cmd, const std::string& cfg,
                 const std::string& out) {
    const std::string full = "\"" + g_cli_path + "\" " + cmd + " -c \"" +
                             (root / cfg).string() + "\" -o \"" +
                             (root / out).string() + "\" 2>/dev/null";
    const int status = std::system(full.c_str());
    return status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0;
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };

  const char* cmds[] = {"orbit", "fixedpoints", "spectrum"};
  for (const char* cmd : cmds) {
    const std::string cfg = std::string(cmd) + ".json";
    if (!run(cmd, cfg, std::string(cmd) + "_a") ||
        !run(cmd, cfg, std::string(cmd) + "_b")) {
      note = std::string("CLI run failed for ") + cmd;
      cleanup();
      return false;
    }
    const fs::path a = root / (std::string(cmd) + "_a");
    const fs::path b = root / (std::string(cmd) + "_b");
    int files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      const auto name = entry.path().filename();
      if (!fs::exists(b / name) || slurp(entry.path()) != slurp(b / name)) {
        note = std::string(cmd) + ": " + name.string() + " differs";
        cleanup();
        return false;
      }
    }
    if (files < 2) {
      note = std::string(cmd) + ": expected output files missing";
      cleanup();
      return false;
    }
  }
  cleanup();
  note = "orbit, fixedpoints, spectrum each byte-identical across reruns";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];

  struct Check {
    const char* label;
    std::function<bool(std::string&)> fn;
  };
  const std::vector<Check> checks = {
      {"triangle encoding round-trip (1000 draws, < 1e-10, < 1 s)", c01},
      {"invariant drift < 1e-9 over 1000 shape periods", c02},
      {"strong-field tracking error < 1e-6 rad at B = 100", c03},
      {"tracking error decreases with B, slope in [-1.4, -0.6]", c04},
      {"linear interaction: frozen shape and exact rotation rate", c05},
      {"quadratic interaction matches its closed forms", c06},
      {"critical-shape census across three interaction types", c07},
      {"phase split consistent with direct integration (9 orbits)", c08},
      {"action-period-area relations to 1e-3", c09},
      {"operator exactness: Casimir, linear, quadratic ladders", c10},
      {"relabeling symmetry blocks: table, completeness, commutant", c11},
      {"quantum level spacing matches classical precession to 5%", c12},
      {"CLI output is byte-for-byte deterministic", c13},
  };

  int failures = 0;
  for (size_t i = 0; i < checks.size(); ++i) {
    std::string note;
    bool ok = false;
    const double t0 = now_seconds();
    try {
      ok = checks[i].fn(note);
    } catch (const std::exception& e) {
      ok = false;
      note = std::string("exception: ") + e.what();
    }
    const double dt = now_seconds() - t0;
    if (!ok) ++failures;
    std::printf("[%s] %02zu %s — %s (%.1f s)\n", ok ? "PASS" : "FAIL", i + 1,
                checks[i].label, note.c_str(), dt);
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d of %zu acceptance checks failed\n", failures,
                checks.size());
    return 1;
  }
  std::printf("all %zu acceptance checks passed\n", checks.size());
  return 0;
}
