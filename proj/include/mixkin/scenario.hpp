#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mixkin/closures.hpp"
#include "mixkin/diagnostics.hpp"
#include "mixkin/solver.hpp"

namespace mixkin {

// How one species starts out. Transport runs modulate the density with
// n(x) = n * (1 + sine_amp * sin(2 pi sine_mode x / length)).
struct SpeciesInit {
  enum class Kind { maxwellian, gaussian, bimaxwellian };
  Kind kind = Kind::maxwellian;
  double n = 1.0;
  Vec3 u;
  double temp = 1.0;
  SymTensor3 tau = SymTensor3::identity();  // gaussian only
  double n_b = 0.0;                         // bimaxwellian second hump
  Vec3 u_b;
  double temp_b = 1.0;
  double sine_amp = 0.0;
  int sine_mode = 1;
};

struct ScenarioConfig {
  std::string name = "custom";
  MixtureConfig mixture;
  // grid
  int points = 33;
  double extent = 0.0;  // 0 = size from the initial moments
  double safety = 7.0;
  SpeciesInit init1, init2;
  // run
  enum class Mode { homogeneous, transport };
  Mode mode = Mode::homogeneous;
  double dt = 0.0;  // 0 = largest stable step
  double t_end = 10.0;
  double cadence = 0.5;
  double stability_factor = 0.9;
  // transport
  int nx = 32;
  double length = 1.0;
  double cfl = 0.9;
  // output
  std::string output_dir = "out";
  int dump_every = 0;  // write field dumps every k-th record; 0 = never
  bool deterministic = false;
};

// Flat "section.key = value" format; '#' starts a comment. Unknown keys and
// malformed values throw ConfigParseError with the line number.
ScenarioConfig parse_scenario(const std::string& text);

std::vector<std::string> builtin_scenarios();
// Both throw ConfigParseError for names not in the list.
std::string builtin_description(const std::string& name);
std::string builtin_text(const std::string& name);
std::string schema_text();

// Everything out of range in the scenario, mixture bounds included.
std::vector<Violation> validate_scenario(const ScenarioConfig& sc);

struct CliOverrides {
  std::optional<std::string> output_dir;
  std::optional<bool> deterministic;
  std::optional<int> dump_every;
};

// Resolve (builtin name or file path), parse, validate, run, and write
// diagnostics.csv / summary.txt / dumps into the output directory.
// Returns the process exit code: 0 ok, 2 parse error, 3 validation error,
// 4 runtime failure.
int run_scenario(const std::string& source, const CliOverrides& overrides,
                 std::ostream& log);

// ---- output formats ----

// Header and rows of diagnostics.csv; floats are printed with %.17g so they
// round-trip exactly.
std::string csv_header();
std::string csv_row(const DiagnosticsRecord& r);

// Binary field dump: 16-byte magic, then point count per axis, cell count
// and species count as little-endian u64, then one field per (cell, species)
// pair, cells outer.
inline constexpr char kDumpMagic[17] = "MIXKIN-DUMP-0001";

struct DumpData {
  std::uint64_t points = 0;
  std::uint64_t nx = 1;
  std::uint64_t species = 2;
  std::vector<std::vector<double>> fields;  // nx * species entries
};

void write_dump(const std::string& path, const DumpData& d);
DumpData read_dump(const std::string& path);  // throws Error on a bad file

} // namespace mixkin
