#pragma once

// JSON project files. A project holds named systems of any doctrine, named
// lenses, charts and squares. Schema version 1:
//
//   {"version": 1,
//    "systems": [{"name", "doctrine": "det"|"stoch"|"ode", ...}],
//    "lenses":  [{"name", "doctrine": "det"|"ode", ...}],
//    "charts":  [{"name", ...}],
//    "squares": [{"name", "top", "bottom", "left", "right"}]}
//
// Every list is optional.

#include <json.hpp>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lensdyn/det.hpp"
#include "lensdyn/finset.hpp"
#include "lensdyn/ode.hpp"
#include "lensdyn/stoch.hpp"

namespace lensdyn::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

using AnySystem = std::variant<det::System, stoch::System, ode::System>;
using AnyLens = std::variant<det::Lens, ode::Lens>;

struct SystemEntry {
  std::string name;
  AnySystem system;
  // ODE only: initial state, one value per state var.
  std::optional<std::vector<double>> init;
};

struct LensEntry {
  std::string name;
  AnyLens lens;
  // ODE only: outer parameter values, one per outer param var.
  std::optional<std::vector<double>> params;
};

struct ChartEntry {
  std::string name;
  det::Chart chart;
};

struct SquareEntry {
  std::string name;
  std::string top, bottom, left, right;
};

struct Project {
  int version = kSchemaVersion;
  std::vector<SystemEntry> systems;
  std::vector<LensEntry> lenses;
  std::vector<ChartEntry> charts;
  std::vector<SquareEntry> squares;

  // Throw ValidationError when the name is missing.
  const SystemEntry& system(const std::string& name) const;
  const LensEntry& lens(const std::string& name) const;
  const det::Chart& chart(const std::string& name) const;
  det::Square square(const SquareEntry& entry) const;
};

const char* doctrine_name(const AnySystem& s);
const char* doctrine_name(const AnyLens& l);

Project parse_project(const std::string& text);
Project load_project(const std::string& path);
Json project_to_json(const Project& p);
std::string dump_project(const Project& p);

// Component encoders/decoders.
Json to_json(const FinSet& s);
Json to_json(const FinMap& m);
Json to_json(const Span& s);
Json to_json(const Family& f);
FinSet finset_from_json(const Json& j);
FinMap finmap_from_json(const Json& j);
Span span_from_json(const Json& j);
Family family_from_json(const Json& j);

Json to_json(const det::System& s);
Json to_json(const det::Lens& l);
Json to_json(const det::Chart& c);
Json to_json(const stoch::System& s);
Json to_json(const ode::System& s);
Json to_json(const ode::Lens& l);
det::System det_system_from_json(const Json& j);
det::Lens det_lens_from_json(const Json& j);
det::Chart det_chart_from_json(const Json& j);
stoch::System stoch_system_from_json(const Json& j);
ode::System ode_system_from_json(const Json& j);
ode::Lens ode_lens_from_json(const Json& j);

// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
std::string file_digest(const std::string& path);

}  // namespace lensdyn::io
