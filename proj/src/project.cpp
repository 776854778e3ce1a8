#include "lensdyn/project.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lensdyn/error.hpp"

namespace lensdyn::io {

namespace {

using LabelMap = std::map<std::string, std::string>;
using LabelTable = std::map<std::string, std::map<std::string, std::string>>;

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ValidationError("expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("missing field '") + key + "'");
  return *it;
}

std::vector<std::string> string_list(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_array()) throw ValidationError(std::string("'") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) throw ValidationError(std::string("'") + key + "' must hold strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

FinSet set_field(const Json& j, const char* key) {
  try {
    return FinSet(string_list(j, key));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("'") + key + "': " + e.what());
  }
}

LabelMap label_map(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_object()) throw ValidationError(std::string("'") + key + "' must be an object");
  LabelMap out;
  for (auto it = v.begin(); it != v.end(); ++it) {
    if (!it.value().is_string())
      throw ValidationError(std::string("'") + key + "' values must be strings");
    out[it.key()] = it.value().get<std::string>();
  }
  return out;
}

LabelTable label_table(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_object()) throw ValidationError(std::string("'") + key + "' must be an object");
  LabelTable out;
  for (auto it = v.begin(); it != v.end(); ++it) {
    if (!it.value().is_object())
      throw ValidationError(std::string("'") + key + "' rows must be objects");
    auto& row = out[it.key()];
    for (auto c = it.value().begin(); c != it.value().end(); ++c) {
      if (!c.value().is_string())
        throw ValidationError(std::string("'") + key + "' values must be strings");
      row[c.key()] = c.value().get<std::string>();
    }
  }
  return out;
}

Json map_json(const FinMap& m) {
  Json out = Json::object();
  for (std::size_t i = 0; i < m.dom().size(); ++i) out[m.dom()[i]] = m.cod()[m(i)];
  return out;
}

Json table_json(const BinaryMap& m) {
  Json out = Json::object();
  for (std::size_t i = 0; i < m.first().size(); ++i) {
    Json row = Json::object();
    for (std::size_t j = 0; j < m.second().size(); ++j) row[m.second()[j]] = m.cod()[m(i, j)];
    out[m.first()[i]] = std::move(row);
  }
  return out;
}

std::vector<expr::Expr> expr_list(const Json& j, const char* key,
                                  const std::vector<std::string>& order) {
  const auto& v = field(j, key);
  if (!v.is_object()) throw ValidationError(std::string("'") + key + "' must be an object");
  for (auto it = v.begin(); it != v.end(); ++it)
    if (std::find(order.begin(), order.end(), it.key()) == order.end())
      throw ValidationError(std::string("'") + key + "' has an entry for unknown variable '" +
                            it.key() + "'");
  std::vector<expr::Expr> out;
  for (const auto& name : order) {
    auto it = v.find(name);
    if (it == v.end())
      throw ValidationError(std::string("'") + key + "' has no expression for '" + name + "'");
    if (!it->is_string())
      throw ValidationError(std::string("'") + key + "' expressions must be strings");
    try {
      out.push_back(expr::parse(it->get<std::string>()));
    } catch (const ParseError& e) {
      throw ValidationError(std::string("'") + key + "' entry '" + name + "': " + e.what());
    }
  }
  return out;
}

Json expr_json(const std::vector<std::string>& names, const std::vector<expr::Expr>& exprs) {
  Json out = Json::object();
  for (std::size_t j = 0; j < names.size(); ++j) out[names[j]] = expr::to_string(exprs[j]);
  return out;
}

std::vector<double> value_list(const Json& v, const std::vector<std::string>& order,
                               const char* key) {
  if (!v.is_object()) throw ValidationError(std::string("'") + key + "' must be an object");
  std::vector<double> out;
  for (const auto& name : order) {
    auto it = v.find(name);
    if (it == v.end() || !it->is_number())
      throw ValidationError(std::string("'") + key + "' needs a number for '" + name + "'");
    out.push_back(it->get<double>());
  }
  if (v.size() != order.size())
    throw ValidationError(std::string("'") + key + "' has entries for unknown variables");
  return out;
}

Json values_json(const std::vector<std::string>& names, const std::vector<double>& values) {
  Json out = Json::object();
  for (std::size_t j = 0; j < names.size(); ++j) out[names[j]] = values[j];
  return out;
}

std::string entry_name(const Json& j) {
  const auto& n = field(j, "name");
  if (!n.is_string() || n.get<std::string>().empty())
    throw ValidationError("entry name must be a non-empty string");
  return n.get<std::string>();
}

std::string doctrine_of(const Json& j) {
  const auto& d = field(j, "doctrine");
  if (!d.is_string()) throw ValidationError("'doctrine' must be a string");
  return d.get<std::string>();
}

template <class F>
auto in_entry(const char* kind, const std::string& name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw ValidationError(std::string(kind) + " '" + name + "': " + e.what());
  }
}

const Json& optional_list(const Json& root, const char* key) {
  static const Json empty = Json::array();
  auto it = root.find(key);
  if (it == root.end()) return empty;
  if (!it->is_array()) throw ValidationError(std::string("'") + key + "' must be an array");
  return *it;
}

void require_unique(std::set<std::string>& seen, const std::string& name, const char* kind) {
  if (!seen.insert(name).second)
    throw ValidationError(std::string("duplicate ") + kind + " name '" + name + "'");
}

}  // namespace

Json to_json(const FinSet& s) { return Json(s.elements()); }

Json to_json(const FinMap& m) {
  return Json{{"dom", to_json(m.dom())}, {"cod", to_json(m.cod())}, {"table", map_json(m)}};
}

Json to_json(const Span& s) {
  return Json{{"source", to_json(s.source())},
              {"target", to_json(s.target())},
              {"apex", to_json(s.apex())},
              {"left", map_json(s.left())},
              {"right", map_json(s.right())}};
}

Json to_json(const Family& f) {
  return Json{{"base", to_json(f.base())}, {"total", to_json(f.total())}, {"proj", map_json(f.proj())}};
}

FinSet finset_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("a finite set must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw ValidationError("a finite set must be an array of strings");
    out.push_back(x.get<std::string>());
  }
  return FinSet(std::move(out));
}

FinMap finmap_from_json(const Json& j) {
  return FinMap::from_labels(set_field(j, "dom"), set_field(j, "cod"), label_map(j, "table"));
}

Span span_from_json(const Json& j) {
  auto apex = set_field(j, "apex");
  return Span(FinMap::from_labels(apex, set_field(j, "source"), label_map(j, "left")),
              FinMap::from_labels(apex, set_field(j, "target"), label_map(j, "right")));
}

Family family_from_json(const Json& j) {
  return Family(FinMap::from_labels(set_field(j, "total"), set_field(j, "base"), label_map(j, "proj")));
}

Json to_json(const det::System& s) {
  return Json{{"doctrine", "det"},
              {"states", to_json(s.states())},
              {"inputs", to_json(s.inputs())},
              {"outputs", to_json(s.outputs())},
              {"readout", map_json(s.readout())},
              {"update", table_json(s.update())}};
}

det::System det_system_from_json(const Json& j) {
  auto S = set_field(j, "states");
  auto I = set_field(j, "inputs");
  auto O = set_field(j, "outputs");
  return det::System(FinMap::from_labels(S, O, label_map(j, "readout")),
                     BinaryMap::from_labels(S, I, S, label_table(j, "update")));
}

Json to_json(const det::Lens& l) {
  const auto inner = l.inner();
  const auto outer = l.outer();
  return Json{{"doctrine", "det"},
              {"inputs", to_json(inner.inputs)},
              {"outputs", to_json(inner.outputs)},
              {"outerInputs", to_json(outer.inputs)},
              {"outerOutputs", to_json(outer.outputs)},
              {"fwd", map_json(l.fwd())},
              {"bwd", table_json(l.bwd())}};
}

det::Lens det_lens_from_json(const Json& j) {
  auto I = set_field(j, "inputs");
  auto O = set_field(j, "outputs");
  auto I2 = set_field(j, "outerInputs");
  auto O2 = set_field(j, "outerOutputs");
  return det::Lens(FinMap::from_labels(O, O2, label_map(j, "fwd")),
                   BinaryMap::from_labels(O, I2, I, label_table(j, "bwd")));
}

Json to_json(const det::Chart& c) {
  const auto src = c.source();
  const auto tgt = c.target();
  return Json{{"inputs", to_json(src.inputs)},
              {"outputs", to_json(src.outputs)},
              {"outerInputs", to_json(tgt.inputs)},
              {"outerOutputs", to_json(tgt.outputs)},
              {"fwd", map_json(c.fwd())},
              {"push", table_json(c.push())}};
}

det::Chart det_chart_from_json(const Json& j) {
  auto I = set_field(j, "inputs");
  auto O = set_field(j, "outputs");
  auto I2 = set_field(j, "outerInputs");
  auto O2 = set_field(j, "outerOutputs");
  return det::Chart(FinMap::from_labels(O, O2, label_map(j, "fwd")),
                    BinaryMap::from_labels(O, I, I2, label_table(j, "push")));
}

Json to_json(const stoch::System& s) {
  Json update = Json::object();
  for (std::size_t x = 0; x < s.states().size(); ++x) {
    Json row = Json::object();
    for (std::size_t i = 0; i < s.inputs().size(); ++i) {
      Json dist = Json::object();
      const auto& d = s.update(x, i);
      for (std::size_t t = 0; t < d.support().size(); ++t)
        if (d[t] != 0) dist[d.support()[t]] = stoch::format_rational(d[t]);
      row[s.inputs()[i]] = std::move(dist);
    }
    update[s.states()[x]] = std::move(row);
  }
  return Json{{"doctrine", "stoch"},
              {"states", to_json(s.states())},
              {"inputs", to_json(s.inputs())},
              {"outputs", to_json(s.outputs())},
              {"readout", map_json(s.readout())},
              {"update", std::move(update)}};
}

stoch::System stoch_system_from_json(const Json& j) {
  auto S = set_field(j, "states");
  auto I = set_field(j, "inputs");
  auto O = set_field(j, "outputs");
  const auto& table = field(j, "update");
  if (!table.is_object()) throw ValidationError("'update' must be an object");
  for (auto it = table.begin(); it != table.end(); ++it) S.index_of(it.key());
  std::vector<stoch::Dist> update;
  for (const auto& s : S) {
    auto row = table.find(s);
    if (row == table.end() || !row->is_object())
      throw ValidationError("'update' has no row for state '" + s + "'");
    for (auto it = row->begin(); it != row->end(); ++it) I.index_of(it.key());
    for (const auto& i : I) {
      auto cell = row->find(i);
      if (cell == row->end() || !cell->is_object())
        throw ValidationError("'update' has no distribution for ('" + s + "', '" + i + "')");
      std::vector<stoch::Rational> w(S.size(), stoch::Rational(0));
      for (auto it = cell->begin(); it != cell->end(); ++it) {
        if (!it.value().is_string())
          throw ValidationError("weights must be strings of the form \"p/q\"");
        w[S.index_of(it.key())] = stoch::parse_rational(it.value().get<std::string>());
      }
      try {
        update.emplace_back(S, std::move(w));
      } catch (const ValidationError& e) {
        throw ValidationError("distribution for ('" + s + "', '" + i + "'): " + e.what());
      }
    }
  }
  return stoch::System(FinMap::from_labels(S, O, label_map(j, "readout")), I, std::move(update));
}

Json to_json(const ode::System& s) {
  return Json{{"doctrine", "ode"},
              {"stateVars", s.state_vars()},
              {"outputVars", s.output_vars()},
              {"paramVars", s.param_vars()},
              {"readout", expr_json(s.output_vars(), s.readout())},
              {"field", expr_json(s.state_vars(), s.field())}};
}

ode::System ode_system_from_json(const Json& j) {
  auto states = string_list(j, "stateVars");
  auto outputs = string_list(j, "outputVars");
  auto params = string_list(j, "paramVars");
  auto readout = expr_list(j, "readout", outputs);
  auto fields = expr_list(j, "field", states);
  return ode::System(std::move(states), std::move(outputs), std::move(params), std::move(readout),
                     std::move(fields));
}

Json to_json(const ode::Lens& l) {
  return Json{{"doctrine", "ode"},
              {"outputVars", l.inner_outputs()},
              {"paramVars", l.inner_params()},
              {"outerOutputVars", l.outer_outputs()},
              {"outerParamVars", l.outer_params()},
              {"fwd", expr_json(l.outer_outputs(), l.fwd())},
              {"bwd", expr_json(l.inner_params(), l.bwd())}};
}

ode::Lens ode_lens_from_json(const Json& j) {
  auto outputs = string_list(j, "outputVars");
  auto params = string_list(j, "paramVars");
  auto outer_outputs = string_list(j, "outerOutputVars");
  auto outer_params = string_list(j, "outerParamVars");
  auto fwd = expr_list(j, "fwd", outer_outputs);
  auto bwd = expr_list(j, "bwd", params);
  return ode::Lens(std::move(outputs), std::move(params), std::move(outer_outputs),
                   std::move(outer_params), std::move(fwd), std::move(bwd));
}

const char* doctrine_name(const AnySystem& s) {
  switch (s.index()) {
    case 0: return "det";
    case 1: return "stoch";
    default: return "ode";
  }
}

const char* doctrine_name(const AnyLens& l) { return l.index() == 0 ? "det" : "ode"; }

const SystemEntry& Project::system(const std::string& name) const {
  for (const auto& e : systems)
    if (e.name == name) return e;
  throw ValidationError("no system named '" + name + "'");
}

const LensEntry& Project::lens(const std::string& name) const {
  for (const auto& e : lenses)
    if (e.name == name) return e;
  throw ValidationError("no lens named '" + name + "'");
}

const det::Chart& Project::chart(const std::string& name) const {
  for (const auto& e : charts)
    if (e.name == name) return e.chart;
  throw ValidationError("no chart named '" + name + "'");
}

det::Square Project::square(const SquareEntry& entry) const {
  auto det_lens = [&](const std::string& n) {
    const auto& l = lens(n).lens;
    if (l.index() != 0) throw ValidationError("lens '" + n + "' is not deterministic");
    return std::get<det::Lens>(l);
  };
  return det::Square{chart(entry.top), chart(entry.bottom), det_lens(entry.left),
                     det_lens(entry.right)};
}

Project parse_project(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto pos = e.byte == 0 ? 0 : e.byte - 1;
    std::size_t line = 1, col = 1;
    for (std::size_t j = 0; j < pos && j < text.size(); ++j) {
      if (text[j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("JSON syntax error (line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ")",
                     pos);
  }
  if (!root.is_object()) throw ValidationError("project must be a JSON object");
  const auto& version = field(root, "version");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
    throw ValidationError("unsupported project version (expected 1)");

  Project p;
  std::set<std::string> seen;
  for (const auto& j : optional_list(root, "systems")) {
    auto name = entry_name(j);
    require_unique(seen, name, "system");
    p.systems.push_back(in_entry("system", name, [&] {
      auto doctrine = doctrine_of(j);
      SystemEntry e{name, det::trivial_system(), std::nullopt};
      if (doctrine == "det") e.system = det_system_from_json(j);
      else if (doctrine == "stoch") e.system = stoch_system_from_json(j);
      else if (doctrine == "ode") {
        auto sys = ode_system_from_json(j);
        if (auto it = j.find("init"); it != j.end())
          e.init = value_list(*it, sys.state_vars(), "init");
        e.system = std::move(sys);
      } else {
        throw ValidationError("unknown doctrine '" + doctrine + "'");
      }
      return e;
    }));
  }
  seen.clear();
  for (const auto& j : optional_list(root, "lenses")) {
    auto name = entry_name(j);
    require_unique(seen, name, "lens");
    p.lenses.push_back(in_entry("lens", name, [&] {
      auto doctrine = doctrine_of(j);
      if (doctrine == "det") return LensEntry{name, det_lens_from_json(j), std::nullopt};
      if (doctrine != "ode") throw ValidationError("unknown lens doctrine '" + doctrine + "'");
      auto lens = ode_lens_from_json(j);
      std::optional<std::vector<double>> params;
      if (auto it = j.find("params"); it != j.end())
        params = value_list(*it, lens.outer_params(), "params");
      return LensEntry{name, std::move(lens), std::move(params)};
    }));
  }
  seen.clear();
  for (const auto& j : optional_list(root, "charts")) {
    auto name = entry_name(j);
    require_unique(seen, name, "chart");
    p.charts.push_back(in_entry("chart", name, [&] { return ChartEntry{name, det_chart_from_json(j)}; }));
  }
  seen.clear();
  for (const auto& j : optional_list(root, "squares")) {
    auto name = entry_name(j);
    require_unique(seen, name, "square");
    auto entry = in_entry("square", name, [&] {
      auto str = [&](const char* k) {
        const auto& v = field(j, k);
        if (!v.is_string()) throw ValidationError(std::string("'") + k + "' must name an entry");
        return v.get<std::string>();
      };
      SquareEntry e{name, str("top"), str("bottom"), str("left"), str("right")};
      p.square(e);
      return e;
    });
    p.squares.push_back(std::move(entry));
  }
  return p;
}

Project load_project(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open project file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_project(buf.str());
}

Json project_to_json(const Project& p) {
  Json root = Json::object();
  root["version"] = p.version;
  Json systems = Json::array();
  for (const auto& e : p.systems) {
    Json j{{"name", e.name}};
    std::visit([&](const auto& s) { j.update(to_json(s)); }, e.system);
    if (e.init) j["init"] = values_json(std::get<ode::System>(e.system).state_vars(), *e.init);
    systems.push_back(std::move(j));
  }
  Json lenses = Json::array();
  for (const auto& e : p.lenses) {
    Json j{{"name", e.name}};
    std::visit([&](const auto& l) { j.update(to_json(l)); }, e.lens);
    if (e.params) j["params"] = values_json(std::get<ode::Lens>(e.lens).outer_params(), *e.params);
    lenses.push_back(std::move(j));
  }
  Json charts = Json::array();
  for (const auto& e : p.charts) {
    Json j{{"name", e.name}};
    j.update(to_json(e.chart));
    charts.push_back(std::move(j));
  }
  Json squares = Json::array();
  for (const auto& e : p.squares)
    squares.push_back(
        Json{{"name", e.name}, {"top", e.top}, {"bottom", e.bottom}, {"left", e.left}, {"right", e.right}});
  root["systems"] = std::move(systems);
  root["lenses"] = std::move(lenses);
  root["charts"] = std::move(charts);
  root["squares"] = std::move(squares);
  return root;
}

std::string dump_project(const Project& p) { return project_to_json(p).dump(2) + "\n"; }

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lensdyn::io
