#include "mixkin/scenario.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>

#include "mixkin/errors.hpp"

namespace mixkin {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw ConfigParseError("line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, int line) {
  std::istringstream in(v);
  double d;
  if (!(in >> d) || !(in >> std::ws).eof()) parse_fail(line, "expected a number, got '" + v + "'");
  return d;
}

int parse_int(const std::string& v, int line) {
  std::istringstream in(v);
  int i;
  if (!(in >> i) || !(in >> std::ws).eof()) parse_fail(line, "expected an integer, got '" + v + "'");
  return i;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  parse_fail(line, "expected true/false, got '" + v + "'");
}

Vec3 parse_vec3(const std::string& v, int line) {
  std::istringstream in(v);
  Vec3 r;
  if (!(in >> r.x >> r.y >> r.z) || !(in >> std::ws).eof()) {
    parse_fail(line, "expected three numbers, got '" + v + "'");
  }
  return r;
}

SymTensor3 parse_tensor(const std::string& v, int line) {
  std::istringstream in(v);
  SymTensor3 t;
  if (!(in >> t.xx >> t.yy >> t.zz >> t.xy >> t.xz >> t.yz) || !(in >> std::ws).eof()) {
    parse_fail(line, "expected six numbers (xx yy zz xy xz yz), got '" + v + "'");
  }
  return t;
}

bool species_key(SpeciesInit& init, const std::string& key, const std::string& value,
                 int line) {
  if (key == "kind") {
    if (value == "maxwellian") init.kind = SpeciesInit::Kind::maxwellian;
    else if (value == "gaussian") init.kind = SpeciesInit::Kind::gaussian;
    else if (value == "bimaxwellian") init.kind = SpeciesInit::Kind::bimaxwellian;
    else parse_fail(line, "unknown init kind '" + value + "'");
  } else if (key == "n") init.n = parse_double(value, line);
  else if (key == "u") init.u = parse_vec3(value, line);
  else if (key == "T") init.temp = parse_double(value, line);
  else if (key == "tau") init.tau = parse_tensor(value, line);
  else if (key == "n_b") init.n_b = parse_double(value, line);
  else if (key == "u_b") init.u_b = parse_vec3(value, line);
  else if (key == "T_b") init.temp_b = parse_double(value, line);
  else if (key == "sine_amp") init.sine_amp = parse_double(value, line);
  else if (key == "sine_mode") init.sine_mode = parse_int(value, line);
  else return false;
  return true;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

} // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  ScenarioConfig sc;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) parse_fail(line, "expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) parse_fail(line, "empty key");
    if (value.empty()) parse_fail(line, "empty value for '" + key + "'");

    MixtureConfig& mx = sc.mixture;
    if (key == "mixture.m1") mx.m1 = parse_double(value, line);
    else if (key == "mixture.m2") mx.m2 = parse_double(value, line);
    else if (key == "mixture.nu12") mx.nu12 = parse_double(value, line);
    else if (key == "mixture.eps") mx.eps = parse_double(value, line);
    else if (key == "mixture.beta1") mx.beta1 = parse_double(value, line);
    else if (key == "mixture.beta2") mx.beta2 = parse_double(value, line);
    else if (key == "mixture.delta") mx.delta = parse_double(value, line);
    else if (key == "mixture.alpha") mx.alpha = parse_double(value, line);
    else if (key == "mixture.gamma") mx.gamma = parse_double(value, line);
    else if (key == "mixture.mu1") mx.mu1 = parse_double(value, line);
    else if (key == "mixture.mu2") mx.mu2 = parse_double(value, line);
    else if (key == "mixture.mu12") mx.mu12 = parse_double(value, line);
    else if (key == "mixture.mu21") mx.mu21 = parse_double(value, line);
    else if (key == "mixture.variant") {
      if (value == "bgk") mx.variant = Variant::bgk;
      else if (value == "es_single") mx.variant = Variant::es_single;
      else if (value == "es_full_a") mx.variant = Variant::es_full_a;
      else if (value == "es_full_b") mx.variant = Variant::es_full_b;
      else parse_fail(line, "unknown variant '" + value + "'");
    } else if (key == "grid.points") sc.points = parse_int(value, line);
    else if (key == "grid.extent") sc.extent = parse_double(value, line);
    else if (key == "grid.safety") sc.safety = parse_double(value, line);
    else if (key.rfind("init1.", 0) == 0) {
      if (!species_key(sc.init1, key.substr(6), value, line)) {
        parse_fail(line, "unknown key '" + key + "'");
      }
    } else if (key.rfind("init2.", 0) == 0) {
      if (!species_key(sc.init2, key.substr(6), value, line)) {
        parse_fail(line, "unknown key '" + key + "'");
      }
    } else if (key == "run.mode") {
      if (value == "homogeneous") sc.mode = ScenarioConfig::Mode::homogeneous;
      else if (value == "transport") sc.mode = ScenarioConfig::Mode::transport;
      else parse_fail(line, "unknown mode '" + value + "'");
    } else if (key == "run.dt") sc.dt = parse_double(value, line);
    else if (key == "run.t_end") sc.t_end = parse_double(value, line);
    else if (key == "run.cadence") sc.cadence = parse_double(value, line);
    else if (key == "run.stability_factor") sc.stability_factor = parse_double(value, line);
    else if (key == "transport.nx") sc.nx = parse_int(value, line);
    else if (key == "transport.length") sc.length = parse_double(value, line);
    else if (key == "transport.cfl") sc.cfl = parse_double(value, line);
    else if (key == "output.dir") sc.output_dir = value;
    else if (key == "output.dump_every") sc.dump_every = parse_int(value, line);
    else if (key == "output.deterministic") sc.deterministic = parse_bool(value, line);
    else parse_fail(line, "unknown key '" + key + "'");
  }
  return sc;
}

namespace {

struct Builtin {
  const char* name;
  const char* description;
  const char* text;
};

const Builtin kBuiltins[] = {
    {"equilibrium-check",
     "both species start in the shared equilibrium; nothing should move",
     R"(mixture.m1 = 1.0
mixture.m2 = 1.5
mixture.nu12 = 1.0
mixture.eps = 1.0
mixture.beta1 = 1.0
mixture.beta2 = 1.0
mixture.delta = 0.5
mixture.alpha = 0.5
mixture.gamma = 0.0
mixture.mu1 = 0.2
mixture.mu2 = -0.1
mixture.variant = es_full_b
grid.points = 33
init1.kind = maxwellian
init1.n = 1.0
init1.u = 0.2 0.0 0.0
init1.T = 1.0
init2.kind = maxwellian
init2.n = 1.3
init2.u = 0.2 0.0 0.0
init2.T = 1.0
run.mode = homogeneous
run.t_end = 2.0
run.cadence = 0.25
output.dir = out/equilibrium-check
)"},
    {"cross-relaxation",
     "counter-streaming species with unequal temperatures relax to a common state",
     R"(mixture.m1 = 1.0
mixture.m2 = 1.5
mixture.nu12 = 1.0
mixture.eps = 1.0
mixture.beta1 = 1.0
mixture.beta2 = 1.0
mixture.delta = 0.5
mixture.alpha = 0.5
mixture.gamma = 0.05
mixture.variant = bgk
grid.points = 33
init1.kind = maxwellian
init1.n = 1.0
init1.u = 0.5 0.0 0.0
init1.T = 1.0
init2.kind = maxwellian
init2.n = 1.0
init2.u = -0.5 0.0 0.0
init2.T = 2.0
run.mode = homogeneous
run.t_end = 20.0
run.cadence = 0.5
output.dir = out/cross-relaxation
)"},
    {"decoupled-delta1-alpha1",
     "delta = alpha = 1 switches the mean-field coupling off; gaps persist",
     R"(mixture.m1 = 1.0
mixture.m2 = 1.5
mixture.nu12 = 1.0
mixture.eps = 1.0
mixture.beta1 = 1.0
mixture.beta2 = 1.0
mixture.delta = 1.0
mixture.alpha = 1.0
mixture.gamma = 0.0
mixture.variant = bgk
grid.points = 33
init1.kind = maxwellian
init1.n = 1.0
init1.u = 0.5 0.0 0.0
init1.T = 1.0
init2.kind = maxwellian
init2.n = 1.0
init2.u = -0.5 0.0 0.0
init2.T = 2.0
run.mode = homogeneous
run.t_end = 10.0
run.cadence = 0.5
output.dir = out/decoupled-delta1-alpha1
)"},
    {"anisotropic-relaxation",
     "species 1 starts with an anisotropic stress tensor; ES targets drain it",
     R"(mixture.m1 = 1.0
mixture.m2 = 1.0
mixture.nu12 = 1.0
mixture.eps = 1.0
mixture.beta1 = 1.0
mixture.beta2 = 1.0
mixture.delta = 0.5
mixture.alpha = 0.5
mixture.gamma = 0.0
mixture.mu1 = 0.5
mixture.mu2 = -0.25
mixture.variant = es_full_b
grid.points = 33
grid.safety = 8.5
init1.kind = gaussian
init1.n = 1.0
init1.u = 0.0 0.0 0.0
init1.tau = 1.2 2.0 2.8 0.3 0.0 0.0
init2.kind = maxwellian
init2.n = 1.2
init2.u = 0.0 0.0 0.0
init2.T = 1.5
run.mode = homogeneous
run.t_end = 15.0
run.cadence = 0.5
output.dir = out/anisotropic-relaxation
)"},
    {"transport-sine",
     "periodic 1-D density waves advect and relax collisionally",
     R"(mixture.m1 = 1.0
mixture.m2 = 1.0
mixture.nu12 = 1.0
mixture.eps = 1.0
mixture.beta1 = 1.0
mixture.beta2 = 1.0
mixture.delta = 0.5
mixture.alpha = 0.5
mixture.gamma = 0.0
mixture.variant = bgk
grid.points = 17
init1.kind = maxwellian
init1.n = 1.0
init1.u = 0.0 0.0 0.0
init1.T = 1.0
init1.sine_amp = 0.2
init1.sine_mode = 1
init2.kind = maxwellian
init2.n = 1.0
init2.u = 0.0 0.0 0.0
init2.T = 1.0
init2.sine_amp = 0.15
init2.sine_mode = 2
run.mode = transport
run.t_end = 2.0
run.cadence = 0.25
transport.nx = 32
transport.length = 10.0
transport.cfl = 0.9
output.dir = out/transport-sine
)"},
};

const Builtin* find_builtin(const std::string& name) {
  for (const Builtin& b : kBuiltins) {
    if (name == b.name) return &b;
  }
  return nullptr;
}

} // namespace

std::vector<std::string> builtin_scenarios() {
  std::vector<std::string> names;
  for (const Builtin& b : kBuiltins) names.push_back(b.name);
  return names;
}

std::string builtin_description(const std::string& name) {
  const Builtin* b = find_builtin(name);
  if (!b) throw ConfigParseError("unknown builtin scenario '" + name + "'");
  return b->description;
}

std::string builtin_text(const std::string& name) {
  const Builtin* b = find_builtin(name);
  if (!b) throw ConfigParseError("unknown builtin scenario '" + name + "'");
  return b->text;
}

std::string schema_text() {
  return R"(# Scenario file: one "key = value" per line, '#' comments.
# Vectors take three numbers, tensors six (xx yy zz xy xz yz).

mixture.m1, mixture.m2           particle masses (> 0)
mixture.nu12                     base interspecies collision frequency (> 0)
mixture.eps                      nu12/nu21, in (0, 1]
mixture.beta1, mixture.beta2     nu11 = beta1 nu12, nu22 = beta2 nu21 (> 0)
mixture.delta                    velocity mixing weight, in [(r-1)/(1+r), 1], r = (m1/m2) eps
mixture.alpha                    temperature mixing weight, in [0, 1]
mixture.gamma                    |u1-u2|^2 coefficient, in [0, (m1/3)(1-delta)((1+r)delta+1-r)]
mixture.mu1, mixture.mu2         self-target anisotropy, in [-1/2, 1] (ES variants)
mixture.mu12, mixture.mu21       explicit interspecies coefficients (es_full_a;
                                 omit to derive them from the conservation restrictions)
mixture.variant                  bgk | es_single | es_full_a | es_full_b

grid.points                      nodes per velocity axis, odd, >= 9 (default 33)
grid.extent                      half-width of the velocity cube; 0 = automatic
grid.safety                      sigmas covered by the automatic extent (default 7)

init1.* / init2.*                initial state per species:
  kind                           maxwellian | gaussian | bimaxwellian
  n, u, T                        density, mean velocity, temperature
  tau                            gaussian only: relaxation tensor
  n_b, u_b, T_b                  bimaxwellian only: second hump
  sine_amp, sine_mode            transport only: n(x) = n (1 + amp sin(2 pi mode x / L))

run.mode                         homogeneous | transport
run.dt                           fixed step; 0 = largest stable step (default)
run.t_end, run.cadence           final time and record spacing
run.stability_factor             dt * max relaxation rate bound (default 0.9)

transport.nx, transport.length   periodic cells and domain length
transport.cfl                    advection number bound, in (0, 1]

output.dir                       output directory (diagnostics.csv, summary.txt, dumps)
output.dump_every                write a field dump every k-th record; 0 = never
output.deterministic             bitwise-reproducible reductions (true/false)
)";
}

namespace {

void species_violations(const SpeciesInit& init, const char* prefix,
                        std::vector<Violation>& out) {
  auto bad = [&](const std::string& key, const std::string& msg) {
    out.push_back({std::string(prefix) + "." + key, msg});
  };
  if (!(init.n > 0.0)) bad("n", "density must be positive, got " + fmt(init.n));
  if (init.kind != SpeciesInit::Kind::gaussian && !(init.temp > 0.0)) {
    bad("T", "temperature must be positive, got " + fmt(init.temp));
  }
  if (init.kind == SpeciesInit::Kind::gaussian && !(eigenvalues(init.tau)[0] > 0.0)) {
    bad("tau", "relaxation tensor must be positive definite");
  }
  if (init.kind == SpeciesInit::Kind::bimaxwellian) {
    if (!(init.n_b > 0.0)) bad("n_b", "second hump density must be positive");
    if (!(init.temp_b > 0.0)) bad("T_b", "second hump temperature must be positive");
  }
  if (!(init.sine_amp >= 0.0 && init.sine_amp < 1.0)) {
    bad("sine_amp", "density modulation must lie in [0, 1), got " + fmt(init.sine_amp));
  }
  if (init.sine_mode < 1) bad("sine_mode", "mode number must be >= 1");
}

// Representative (n, u, T) entries used to size the grid before any field
// exists.
void pseudo_moments(const SpeciesInit& init, double mass, std::vector<Moments>& moms,
                    std::vector<double>& masses) {
  Moments a;
  a.n = init.n;
  a.u = init.u;
  a.T = init.kind == SpeciesInit::Kind::gaussian ? init.tau.trace() / 3.0 : init.temp;
  moms.push_back(a);
  masses.push_back(mass);
  if (init.kind == SpeciesInit::Kind::bimaxwellian) {
    Moments b;
    b.n = init.n_b;
    b.u = init.u_b;
    b.T = init.temp_b;
    moms.push_back(b);
    masses.push_back(mass);
  }
}

double resolve_extent(const ScenarioConfig& sc) {
  if (sc.extent > 0.0) return sc.extent;
  std::vector<Moments> moms;
  std::vector<double> masses;
  pseudo_moments(sc.init1, sc.mixture.m1, moms, masses);
  pseudo_moments(sc.init2, sc.mixture.m2, moms, masses);
  return auto_extent(moms, masses, sc.safety);
}

double peak_density(const SpeciesInit& init) {
  const double base = init.n + (init.kind == SpeciesInit::Kind::bimaxwellian ? init.n_b : 0.0);
  return base * (1.0 + init.sine_amp);
}

GridField build_species_field(const SpeciesInit& init, double mass, const VelocityGrid& g,
                              kernels::Reduce mode) {
  switch (init.kind) {
    case SpeciesInit::Kind::gaussian:
      return build_gaussian(init.n, init.u, init.tau, mass, g, /*mass_exact=*/true, mode);
    case SpeciesInit::Kind::bimaxwellian: {
      GridField f = build_maxwellian(init.n, init.u, init.temp, mass, g, true, mode);
      const GridField b = build_maxwellian(init.n_b, init.u_b, init.temp_b, mass, g, true, mode);
      for (std::size_t i = 0; i < f.size(); ++i) f[i] += b[i];
      return f;
    }
    case SpeciesInit::Kind::maxwellian:
    default:
      return build_maxwellian(init.n, init.u, init.temp, mass, g, true, mode);
  }
}

} // namespace

std::vector<Violation> validate_scenario(const ScenarioConfig& sc) {
  // Mixture violations are reported under their config keys.
  std::vector<Violation> out;
  for (Violation v : validate_config(sc.mixture)) {
    v.parameter.insert(0, "mixture.");
    out.push_back(std::move(v));
  }
  auto bad = [&](const char* key, const std::string& msg) { out.push_back({key, msg}); };
  if (sc.points < 9 || sc.points % 2 == 0) {
    bad("grid.points", "needs an odd value >= 9, got " + std::to_string(sc.points));
  }
  if (sc.extent < 0.0) bad("grid.extent", "must be >= 0 (0 = automatic)");
  if (!(sc.safety > 0.0)) bad("grid.safety", "must be positive");
  species_violations(sc.init1, "init1", out);
  species_violations(sc.init2, "init2", out);
  if (!(sc.t_end > 0.0)) bad("run.t_end", "must be positive");
  if (!(sc.cadence > 0.0)) bad("run.cadence", "must be positive");
  if (!(sc.stability_factor > 0.0)) bad("run.stability_factor", "must be positive");
  if (sc.dt < 0.0) bad("run.dt", "must be >= 0 (0 = automatic)");
  if (sc.dump_every < 0) bad("output.dump_every", "must be >= 0");
  if (sc.output_dir.empty()) bad("output.dir", "must not be empty");
  if (sc.mode == ScenarioConfig::Mode::transport) {
    if (sc.nx < 2) bad("transport.nx", "needs at least 2 cells");
    if (!(sc.length > 0.0)) bad("transport.length", "must be positive");
    if (!(sc.cfl > 0.0 && sc.cfl <= 1.0)) bad("transport.cfl", "must lie in (0, 1]");
  }
  // Checks that need the initial densities.
  const bool mixture_ok = validate_config(sc.mixture).empty();
  const bool inits_ok = sc.init1.n > 0.0 && sc.init2.n > 0.0;
  if (mixture_ok && inits_ok) {
    const double n1 = peak_density(sc.init1);
    const double n2 = peak_density(sc.init2);
    if (sc.dt > 0.0) {
      const double rate = stability_rate(sc.mixture, n1, n2);
      if (sc.dt * rate > sc.stability_factor * (1.0 + 1e-12)) {
        bad("run.dt", "dt = " + fmt(sc.dt) + " exceeds the stability bound " +
                          fmt(sc.stability_factor / rate));
      }
      if (sc.mode == ScenarioConfig::Mode::transport) {
        const double vmax = resolve_extent(sc);
        const double dx = sc.length / sc.nx;
        if (sc.dt * vmax / dx > sc.cfl * (1.0 + 1e-12)) {
          bad("run.dt", "dt = " + fmt(sc.dt) + " exceeds the advection bound " +
                            fmt(sc.cfl * dx / vmax));
        }
      }
    }
    if (sc.mixture.variant == Variant::es_full_a) {
      if (sc.mixture.mu21 && !(*sc.mixture.mu21 >= 0.0 && *sc.mixture.mu21 <= 1.0)) {
        bad("mixture.mu21", "explicit mu21 = " + fmt(*sc.mixture.mu21) +
                                " must lie in [0, 1]");
      } else if (!sc.mixture.mu21) {
        try {
          solve_mu21_restriction(sc.mixture, sc.init1.n, sc.init2.n);
        } catch (const NoAdmissibleMu21& e) {
          bad("mixture.mu21", e.what());
        }
      }
    }
  }
  return out;
}

std::string csv_header() {
  return "t,n1,u1x,u1y,u1z,T1,n2,u2x,u2y,u2z,T2,momX,momY,momZ,energy,H,S,"
         "gapU,gapT,aniso1,aniso2,lemma2_slack";
}

std::string csv_row(const DiagnosticsRecord& r) {
  const double cols[] = {r.time,   r.n1,     r.u1.x,  r.u1.y,
                         r.u1.z,   r.t1,     r.n2,    r.u2.x,
                         r.u2.y,   r.u2.z,   r.t2,    r.momentum.x,
                         r.momentum.y, r.momentum.z, r.energy, r.entropy,
                         r.entropy_production, r.gap_u, r.gap_t, r.aniso1,
                         r.aniso2, r.lemma2_slack};
  std::string row;
  for (std::size_t i = 0; i < std::size(cols); ++i) {
    if (i) row += ',';
    row += fmt17(cols[i]);
  }
  return row;
}

namespace {

void put_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

} // namespace

void write_dump(const std::string& path, const DumpData& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(kDumpMagic, 16);
  put_u64(out, d.points);
  put_u64(out, d.nx);
  put_u64(out, d.species);
  for (const std::vector<double>& f : d.fields) {
    for (double x : f) put_u64(out, std::bit_cast<std::uint64_t>(x));
  }
  if (!out) throw Error("short write to '" + path + "'");
}

DumpData read_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  char magic[16];
  in.read(magic, 16);
  if (!in || std::string(magic, 16) != std::string(kDumpMagic, 16)) {
    throw Error("'" + path + "' is not a field dump");
  }
  DumpData d;
  d.points = get_u64(in);
  d.nx = get_u64(in);
  d.species = get_u64(in);
  if (!in || d.points == 0 || d.nx == 0 || d.species == 0) {
    throw Error("'" + path + "' has a corrupt header");
  }
  const std::uint64_t per_field = d.points * d.points * d.points;
  d.fields.assign(d.nx * d.species, std::vector<double>(per_field));
  for (auto& f : d.fields) {
    for (double& x : f) x = std::bit_cast<double>(get_u64(in));
    if (!in) throw Error("'" + path + "' is truncated");
  }
  return d;
}

namespace {

std::string dump_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "dump_t%06zu.bin", index);
  return buf;
}

double rel_drift(double now, double start, double scale) {
  return std::abs(now - start) / std::max(std::abs(start), scale);
}

// Shared summary stats over the record series.
void write_summary_series(std::ostream& out, const std::vector<DiagnosticsRecord>& recs) {
  const DiagnosticsRecord& a = recs.front();
  const DiagnosticsRecord& b = recs.back();
  const double pscale =
      std::max(1e-300, std::sqrt(2.0 * a.energy * (a.mass1 + a.mass2)));
  const double mom_drift =
      std::sqrt(norm2(b.momentum - a.momentum)) /
      std::max(std::sqrt(norm2(a.momentum)), pscale);
  double h_increase = 0.0, s_max = -std::numeric_limits<double>::infinity();
  double slack_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (i) h_increase = std::max(h_increase, recs[i].entropy - recs[i - 1].entropy);
    s_max = std::max(s_max, recs[i].entropy_production);
    slack_min = std::min(slack_min, recs[i].lemma2_slack);
  }
  out << "records: " << recs.size() << "\n";
  out << "final time: " << fmt(b.time) << "\n";
  out << "mass drift (rel): species 1 " << fmt(rel_drift(b.mass1, a.mass1, 1e-300))
      << ", species 2 " << fmt(rel_drift(b.mass2, a.mass2, 1e-300)) << "\n";
  out << "momentum drift (rel): " << fmt(mom_drift) << "\n";
  out << "energy drift (rel): " << fmt(rel_drift(b.energy, a.energy, 1e-300)) << "\n";
  out << "entropy H: " << fmt(a.entropy) << " -> " << fmt(b.entropy)
      << ", max increase between records " << fmt(h_increase) << "\n";
  out << "entropy production S: max over records " << fmt(s_max) << "\n";
  out << "lemma2 slack: min over records " << fmt(slack_min) << "\n";
  out << "final gapU " << fmt(b.gap_u) << ", gapT " << fmt(b.gap_t) << ", aniso1 "
      << fmt(b.aniso1) << ", aniso2 " << fmt(b.aniso2) << "\n";
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::bgk: return "bgk";
    case Variant::es_single: return "es_single";
    case Variant::es_full_a: return "es_full_a";
    case Variant::es_full_b: return "es_full_b";
  }
  return "?";
}

int execute_scenario(const ScenarioConfig& sc, std::ostream& log) {
  namespace fs = std::filesystem;
  const EvalOptions opts{sc.deterministic, true};
  const kernels::Reduce mode = reduce_mode(opts);
  const VelocityGrid g = build_grid(resolve_extent(sc), sc.points);

  fs::create_directories(sc.output_dir);
  const std::string csv_path = sc.output_dir + "/diagnostics.csv";
  std::ofstream csv(csv_path);
  if (!csv) {
    log << "cannot write " << csv_path << "\n";
    return 4;
  }
  csv << csv_header() << "\n";

  std::vector<DiagnosticsRecord> recs;
  std::string extra_summary;
  long steps = -1;
  try {
    if (sc.mode == ScenarioConfig::Mode::homogeneous) {
      GridField f1 = build_species_field(sc.init1, sc.mixture.m1, g, mode);
      GridField f2 = build_species_field(sc.init2, sc.mixture.m2, g, mode);
      MixtureState state(g, sc.mixture.m1, sc.mixture.m2, std::move(f1), std::move(f2), mode);
      HomogeneousRun run;
      run.config = sc.mixture;
      run.t_end = sc.t_end;
      run.cadence = sc.cadence;
      run.stability_factor = sc.stability_factor;
      run.opts = opts;
      const double rate = stability_rate(sc.mixture, state.moments1().n, state.moments2().n);
      run.dt = sc.dt > 0.0 ? sc.dt : sc.stability_factor / rate;
      auto hook = [&](std::size_t idx, const DiagnosticsRecord& rec) {
        csv << csv_row(rec) << "\n";
        if (sc.dump_every > 0 && idx % static_cast<std::size_t>(sc.dump_every) == 0) {
          DumpData d;
          d.points = static_cast<std::uint64_t>(g.n);
          d.nx = 1;
          d.species = 2;
          d.fields = {state.f1(), state.f2()};
          write_dump(sc.output_dir + "/" + dump_name(idx), d);
        }
      };
      recs = run_homogeneous(state, run, hook);
      steps = std::lround(sc.t_end / run.dt + 0.49);
      std::ostringstream ex;
      ex << "dt: " << fmt(run.dt) << "\n";
      const EquilibriumDistance dist = equilibrium_distance(state, opts);
      ex << "final maxwellian residuals: " << fmt(dist.maxw_res1) << ", "
         << fmt(dist.maxw_res2) << "\n";
      if (sc.mixture.variant == Variant::es_full_a) {
        const TargetSet& ts = state.targets(sc.mixture, opts);
        ex << "mu12: " << fmt(ts.mu12) << ", mu21: " << fmt(ts.mu21);
        if (ts.mu21_solution) {
          ex << " (roots " << fmt17(ts.mu21_solution->roots[0]) << ", "
             << fmt17(ts.mu21_solution->roots[1]) << ")";
        }
        ex << "\n";
      }
      extra_summary = ex.str();
    } else {
      TransportState state(g, sc.mixture.m1, sc.mixture.m2, sc.nx, sc.length);
      const GridField base1 = build_species_field(sc.init1, sc.mixture.m1, g, mode);
      const GridField base2 = build_species_field(sc.init2, sc.mixture.m2, g, mode);
      for (int j = 0; j < sc.nx; ++j) {
        const double x = (j + 0.5) * state.dx();
        const double w1 = 1.0 + sc.init1.sine_amp *
                                    std::sin(2.0 * std::numbers::pi * sc.init1.sine_mode * x /
                                             sc.length);
        const double w2 = 1.0 + sc.init2.sine_amp *
                                    std::sin(2.0 * std::numbers::pi * sc.init2.sine_mode * x /
                                             sc.length);
        auto d1 = state.f1(j);
        auto d2 = state.f2(j);
        for (std::size_t i = 0; i < g.node_count(); ++i) {
          d1[i] = w1 * base1[i];
          d2[i] = w2 * base2[i];
        }
      }
      Transport1DRun run;
      run.config = sc.mixture;
      run.dt = sc.dt;
      run.t_end = sc.t_end;
      run.cadence = sc.cadence;
      run.cfl = sc.cfl;
      run.stability_factor = sc.stability_factor;
      run.opts = opts;
      auto hook = [&](std::size_t idx, const DiagnosticsRecord& rec) {
        csv << csv_row(rec) << "\n";
        if (sc.dump_every > 0 && idx % static_cast<std::size_t>(sc.dump_every) == 0) {
          DumpData d;
          d.points = static_cast<std::uint64_t>(g.n);
          d.nx = static_cast<std::uint64_t>(sc.nx);
          d.species = 2;
          d.fields.reserve(d.nx * 2);
          for (int j = 0; j < sc.nx; ++j) {
            const auto s1 = state.f1(j);
            const auto s2 = state.f2(j);
            d.fields.emplace_back(s1.begin(), s1.end());
            d.fields.emplace_back(s2.begin(), s2.end());
          }
          write_dump(sc.output_dir + "/" + dump_name(idx), d);
        }
      };
      recs = run_transport_1d(state, run, hook);
    }
  } catch (const StepRejected& e) {
    log << "step rejected: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    log << "run failed: " << e.what() << "\n";
    return 4;
  }

  std::ofstream summary(sc.output_dir + "/summary.txt");
  summary << "scenario: " << sc.name << "\n";
  summary << "variant: " << variant_name(sc.mixture.variant) << "\n";
  summary << "mode: "
          << (sc.mode == ScenarioConfig::Mode::homogeneous ? "homogeneous" : "transport")
          << "\n";
  summary << "grid: " << g.n << "^3, extent " << fmt(g.extent) << ", h " << fmt(g.h) << "\n";
  if (steps >= 0) summary << "steps: " << steps << "\n";
  summary << extra_summary;
  write_summary_series(summary, recs);

  log << "wrote " << csv_path << " (" << recs.size() << " records) and "
      << sc.output_dir << "/summary.txt\n";
  return 0;
}

} // namespace

int run_scenario(const std::string& source, const CliOverrides& overrides,
                 std::ostream& log) {
  try {
    std::string text;
    std::string name;
    if (find_builtin(source)) {
      text = builtin_text(source);
      name = source;
    } else {
      std::ifstream in(source);
      if (!in) throw ConfigParseError("cannot read scenario '" + source + "'");
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
      name = std::filesystem::path(source).stem().string();
    }
    ScenarioConfig sc = parse_scenario(text);
    sc.name = name;
    if (overrides.output_dir) sc.output_dir = *overrides.output_dir;
    if (overrides.deterministic) sc.deterministic = *overrides.deterministic;
    if (overrides.dump_every) sc.dump_every = *overrides.dump_every;
    const std::vector<Violation> bad = validate_scenario(sc);
    if (!bad.empty()) {
      for (const Violation& v : bad) {
        log << "invalid " << v.parameter << ": " << v.message << "\n";
      }
      return 3;
    }
    return execute_scenario(sc, log);
  } catch (const ConfigParseError& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  }
}

} // namespace mixkin
