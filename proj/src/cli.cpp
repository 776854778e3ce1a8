#include "lensdyn/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <map>
#include <ostream>

#include "lensdyn/error.hpp"
#include "lensdyn/models.hpp"
#include "lensdyn/project.hpp"
#include "lensdyn/suites.hpp"

namespace lensdyn::cli {

namespace {

using io::Json;

// Failures printed per check before the rest are summarized.
constexpr std::size_t kShownFailures = 5;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class Report {
 public:
  Report(int argc, const char* const* argv) {
    Json cmd = Json::array();
    for (int j = 1; j < argc; ++j) cmd.push_back(argv[j]);
    json_["version"] = io::kSchemaVersion;
    json_["command"] = std::move(cmd);
    json_["inputs"] = Json::array();
    json_["outputs"] = Json::array();
  }

  void input(const std::string& path) {
    json_["inputs"].push_back(Json{{"path", path}, {"digest", io::file_digest(path)}});
  }
  void output(const std::string& path) {
    json_["outputs"].push_back(Json{{"path", path}, {"digest", io::file_digest(path)}});
  }
  Json& operator[](const char* key) { return json_[key]; }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write report '" + path + "'");
    f << json_.dump(2) << "\n";
  }

 private:
  Json json_ = Json::object();
};

// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out, Report& report) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    f << text;
  }
  report.output(path);
}

std::map<std::string, double> parse_assignments(const std::vector<std::string>& items,
                                                const char* flag) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ValidationError(std::string(flag) + " expects name=value, got '" + item + "'");
    const auto name = item.substr(0, eq);
    const auto text = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || text.empty())
      throw ValidationError(std::string(flag) + " value for '" + name + "' is not a number");
    out[name] = v;
  }
  return out;
}

// Values for `names`, from defaults overridden by assignments; all must be set.
std::vector<double> resolve(const std::vector<std::string>& names,
                            const std::optional<std::vector<double>>& defaults,
                            const std::map<std::string, double>& given, const char* what) {
  for (const auto& [name, v] : given)
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw ValidationError(std::string("unknown ") + what + " '" + name + "'");
  std::vector<double> out;
  std::string missing;
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (auto it = given.find(names[j]); it != given.end()) out.push_back(it->second);
    else if (defaults) out.push_back((*defaults)[j]);
    else missing += (missing.empty() ? "" : ", ") + names[j];
  }
  if (!missing.empty()) throw ValidationError(std::string("no value for ") + what + " " + missing);
  return out;
}

io::SystemEntry compose_entry(const io::LensEntry& lens, const io::SystemEntry& sys,
                              const std::string& name) {
  auto mismatch = [&] {
    return ValidationError(std::string("doctrine mismatch: lens '") + lens.name + "' is " +
                           io::doctrine_name(lens.lens) + ", system '" + sys.name + "' is " +
                           io::doctrine_name(sys.system));
  };
  if (const auto* dl = std::get_if<det::Lens>(&lens.lens)) {
    if (const auto* s = std::get_if<det::System>(&sys.system))
      return {name, det::compose_lens_system(*dl, *s), std::nullopt};
    if (const auto* s = std::get_if<stoch::System>(&sys.system))
      return {name, stoch::compose_lens_stoch(*dl, *s), std::nullopt};
    throw mismatch();
  }
  const auto* s = std::get_if<ode::System>(&sys.system);
  if (!s) throw mismatch();
  return {name, ode::compose_lens_ode(std::get<ode::Lens>(lens.lens), *s), sys.init};
}

io::SystemEntry tensor_entry(const io::SystemEntry& a, const io::SystemEntry& b,
                             const std::string& name) {
  if (a.system.index() != b.system.index())
    throw ValidationError("doctrine mismatch: system '" + a.name + "' is " +
                          io::doctrine_name(a.system) + ", system '" + b.name + "' is " +
                          io::doctrine_name(b.system));
  if (const auto* x = std::get_if<det::System>(&a.system))
    return {name, det::tensor_systems(*x, std::get<det::System>(b.system)), std::nullopt};
  if (const auto* x = std::get_if<stoch::System>(&a.system))
    return {name, stoch::tensor_stoch(*x, std::get<stoch::System>(b.system)), std::nullopt};
  std::optional<std::vector<double>> init;
  if (a.init && b.init) {
    init = *a.init;
    init->insert(init->end(), b.init->begin(), b.init->end());
  }
  return {name, ode::tensor_ode(std::get<ode::System>(a.system), std::get<ode::System>(b.system)),
          std::move(init)};
}

const det::System& require_det(const io::SystemEntry& e) {
  if (const auto* s = std::get_if<det::System>(&e.system)) return *s;
  throw ValidationError("system '" + e.name + "' is " + io::doctrine_name(e.system) +
                        "; this command needs a det system");
}

std::string steady_csv(const Family& fam) {
  std::string out = "chart,states\n";
  for (std::size_t z = 0; z < fam.total().size(); ++z) {
    const auto& label = fam.total()[z];
    const auto& chart = fam.base()[fam.proj()(z)];
    // Total labels end in "|<chart>".
    const auto states = label.substr(0, label.size() - chart.size() - 1);
    out += csv_field(chart) + "," + csv_field(states) + "\n";
  }
  return out;
}

std::string matrix_csv(const Span& span) {
  const auto m = span_to_matrix(span);
  std::string out = "source";
  for (const auto& t : span.target()) out += "," + csv_field(t);
  out += "\n";
  for (std::size_t r = 0; r < m.size(); ++r) {
    out += csv_field(span.source()[r]);
    for (auto c : m[r]) out += "," + std::to_string(c);
    out += "\n";
  }
  return out;
}

std::string path_csv(const std::vector<det::Step>& steps) {
  std::string out = "step,state,output\n";
  for (std::size_t j = 0; j < steps.size(); ++j)
    out += std::to_string(j) + "," + csv_field(steps[j].state) + "," + csv_field(steps[j].output) + "\n";
  return out;
}

std::string single_system_project(io::SystemEntry entry) {
  io::Project p;
  p.systems.push_back(std::move(entry));
  return io::dump_project(p);
}

// One line per check plus up to kShownFailures failure details.
void print_result(const suites::SuiteResult& r, std::ostream& out) {
  out << (r.ok() ? "ok   " : "FAIL ") << r.name << " " << r.passed << "/" << r.cases << "\n";
  for (std::size_t j = 0; j < r.failures.size() && j < kShownFailures; ++j) {
    const auto& f = r.failures[j];
    out << "       case " << f.index << ": " << f.law << ": " << f.detail << "\n";
  }
  if (r.failures.size() > kShownFailures)
    out << "       ... " << r.failures.size() - kShownFailures << " more\n";
}

Json result_json(const suites::SuiteResult& r) {
  Json failures = Json::array();
  for (const auto& f : r.failures)
    failures.push_back(Json{{"case", f.index}, {"law", f.law}, {"detail", f.detail}});
  return Json{{"name", r.name}, {"cases", r.cases}, {"passed", r.passed}, {"failures", std::move(failures)}};
}

suites::SuiteResult single(const std::string& name, std::optional<suites::Failure> failure) {
  suites::SuiteResult r{name, 1, failure ? 0u : 1u, {}};
  if (failure) r.failures.push_back(std::move(*failure));
  return r;
}

suites::SuiteResult functoriality_check(const std::string& name, const ode::Lens& lens,
                                        const ode::System& sys, const std::vector<double>& init,
                                        const std::vector<double>& params, double tol) {
  try {
    auto rep = ode::check_solve_functoriality(lens, sys, init, ode::ParamSignal::constant(params),
                                              0.0, 5.0, 1e-3, tol);
    if (rep) return single(name, std::nullopt);
    return single(name, suites::Failure{0, "solve-functoriality",
                                        "deviation " + ode::format_double(rep.max_deviation)});
  } catch (const std::exception& e) {
    return single(name, suites::Failure{0, "exception", e.what()});
  }
}

std::vector<suites::SuiteResult> project_checks(const io::Project& p, double tol) {
  std::vector<suites::SuiteResult> out;
  for (const auto& sq : p.squares) {
    auto r = det::check_square(p.square(sq));
    std::optional<suites::Failure> f;
    if (!r) {
      std::string at;
      for (const auto& w : r.witness) at += (at.empty() ? "" : ", ") + w;
      f = suites::Failure{0, "square-" + r.law, r.law + " condition fails at (" + at + ")"};
    }
    out.push_back(single("square '" + sq.name + "'", std::move(f)));
  }
  for (const auto& l : p.lenses)
    for (const auto& s : p.systems) {
      if (const auto* dl = std::get_if<det::Lens>(&l.lens)) {
        const auto* ds = std::get_if<det::System>(&s.system);
        if (!ds || !(dl->inner() == ds->interface())) continue;
        std::optional<suites::Failure> f;
        for (std::size_t k = 1; k <= 3 && !f; ++k) {
          auto r = det::check_matrix_theorem(*dl, *ds, k);
          if (!r)
            f = suites::Failure{k, "matrix-theorem",
                                "k=" + std::to_string(k) + ": fibers differ over " + r.mismatch.value_or("?")};
        }
        out.push_back(single("matrix-theorem '" + l.name + "' on '" + s.name + "'", std::move(f)));
      } else {
        const auto& ol = std::get<ode::Lens>(l.lens);
        const auto* os = std::get_if<ode::System>(&s.system);
        if (!os || !l.params || !s.init) continue;
        auto same = [](std::vector<std::string> a, std::vector<std::string> b) {
          std::sort(a.begin(), a.end());
          std::sort(b.begin(), b.end());
          return a == b;
        };
        if (!same(ol.inner_outputs(), os->output_vars()) || !same(ol.inner_params(), os->param_vars()))
          continue;
        out.push_back(functoriality_check("solve-functoriality '" + l.name + "' on '" + s.name + "'",
                                          ol, *os, *s.init, *l.params, tol));
      }
    }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compose, simulate and check open dynamical systems."};
  app.name("lensdyn");
  app.require_subcommand(1);

  std::string project_path, out_path, report_path, lens_name, system_name, name, left, right, start;
  std::uint64_t seed = 0;
  std::size_t cases = 200, k = 1;
  double tol = 1e-9, t0 = 0.0, t1 = 0.0, h = 1e-3;
  std::vector<std::string> inits, params, word;

  auto common = [&](CLI::App* sub, bool needs_project) {
    auto* opt = sub->add_option("--project,-p", project_path, "Project JSON file")->check(CLI::ExistingFile);
    if (needs_project) opt->required();
    sub->add_option("--out,-o", out_path, "Output file (default: stdout)");
    sub->add_option("--report", report_path, "Write a JSON run report");
    sub->add_option("--seed", seed, "Random seed")->capture_default_str();
  };

  auto* compose = app.add_subcommand("compose", "Wire a system through a lens");
  common(compose, true);
  compose->add_option("--lens,-l", lens_name, "Lens name")->required();
  compose->add_option("--system,-s", system_name, "System name")->required();
  compose->add_option("--name", name, "Name of the composed system (default: <lens>_<system>)");

  auto* tensor = app.add_subcommand("tensor", "Run two systems side by side");
  common(tensor, true);
  tensor->add_option("--left", left, "First system")->required();
  tensor->add_option("--right", right, "Second system")->required();
  tensor->add_option("--name", name, "Name of the product system (default: <left>_<right>)");

  auto* steady = app.add_subcommand("steady", "List period-k orbits of a det system (k=1: steady states)");
  common(steady, true);
  steady->add_option("--system,-s", system_name, "System name")->required();
  steady->add_option("--k", k, "Period")->capture_default_str()->check(CLI::PositiveNumber);

  auto* matrix = app.add_subcommand("matrix", "Dump a det lens's action on period-k orbits as a count matrix");
  common(matrix, true);
  matrix->add_option("--lens,-l", lens_name, "Lens name")->required();
  matrix->add_option("--k", k, "Period")->capture_default_str()->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Simulate a system, optionally wired through a lens");
  common(simulate, true);
  simulate->add_option("--system,-s", system_name, "System name")->required();
  simulate->add_option("--lens,-l", lens_name, "Wire the system through this lens first");
  simulate->add_option("--init", inits, "ODE initial value name=value (default: the system's init)");
  simulate->add_option("--param", params, "ODE parameter name=value (default: the lens's params)");
  simulate->add_option("--t0", t0, "ODE start time")->capture_default_str();
  simulate->add_option("--t1", t1, "ODE end time");
  simulate->add_option("--step", h, "ODE step size h")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--start", start, "Initial state of a det/stoch system (default: first state)");
  simulate->add_option("--word", word, "Comma-separated inputs for a det/stoch system")->delimiter(',');

  auto* check = app.add_subcommand("check", "Run the law and theorem suites");
  common(check, false);
  check->add_option("--cases", cases, "Randomized cases per suite")->capture_default_str();
  check->add_option("--tol", tol, "Tolerance for ODE checks")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    Report report(argc, argv);
    report["seed"] = seed;
    std::optional<io::Project> project;
    if (!project_path.empty()) {
      project = io::load_project(project_path);
      report.input(project_path);
    }
    int code = kOk;

    if (compose->parsed()) {
      const auto& l = project->lens(lens_name);
      const auto& s = project->system(system_name);
      auto entry = compose_entry(l, s, name.empty() ? lens_name + "_" + system_name : name);
      emit(out_path, single_system_project(std::move(entry)), out, report);
    } else if (tensor->parsed()) {
      auto entry = tensor_entry(project->system(left), project->system(right),
                                name.empty() ? left + "_" + right : name);
      emit(out_path, single_system_project(std::move(entry)), out, report);
    } else if (steady->parsed()) {
      const auto& sys = require_det(project->system(system_name));
      auto fam = det::representable_span(det::walking_cycle(k), sys);
      report["rows"] = fam.total().size();
      emit(out_path, steady_csv(fam), out, report);
    } else if (matrix->parsed()) {
      const auto* l = std::get_if<det::Lens>(&project->lens(lens_name).lens);
      if (!l) throw ValidationError("lens '" + lens_name + "' is not a det lens");
      emit(out_path, matrix_csv(det::lens_to_span(*l, det::walking_cycle(k).interface())), out, report);
    } else if (simulate->parsed()) {
      const auto& s = project->system(system_name);
      const io::LensEntry* l = lens_name.empty() ? nullptr : &project->lens(lens_name);
      auto wired = l ? compose_entry(*l, s, s.name) : s;
      if (const auto* os = std::get_if<ode::System>(&wired.system)) {
        if (!simulate->count("--t1")) throw ValidationError("ODE simulation needs --t1");
        auto s0 = resolve(os->state_vars(), s.init, parse_assignments(inits, "--init"), "state var");
        auto p = resolve(os->param_vars(), l ? l->params : std::nullopt,
                         parse_assignments(params, "--param"), "param");
        auto traj = ode::rk4_solve(*os, std::move(s0), ode::ParamSignal::constant(std::move(p)), t0, t1, h);
        report["rows"] = traj.times.size();
        emit(out_path, ode::trajectory_csv(traj), out, report);
      } else {
        if (!inits.empty() || !params.empty())
          throw ValidationError("--init/--param apply only to ODE systems");
        std::vector<det::Step> steps;
        if (const auto* ds = std::get_if<det::System>(&wired.system)) {
          steps = det::run_word(*ds, start.empty() ? ds->states()[0] : start, word);
        } else {
          const auto& ss = std::get<stoch::System>(wired.system);
          report["sampler"] = stoch::kSamplerName;
          for (const auto& st : stoch::simulate_stoch(ss, start.empty() ? ss.states()[0] : start, word, seed))
            steps.push_back({st, ss.outputs()[ss.readout()(ss.states().index_of(st))]});
        }
        emit(out_path, path_csv(steps), out, report);
      }
    } else if (check->parsed()) {
      suites::Options opts;
      opts.seed = seed;
      opts.cases = cases;
      report["cases"] = cases;
      report["tol"] = tol;
      std::vector<suites::SuiteResult> results{
          suites::lens_law_suite(opts),        suites::pasting_suite(opts),
          suites::mutation_suite(opts),        suites::matrix_theorem_suite(opts),
          suites::representability_suite(opts), suites::stochastic_suite(opts),
          functoriality_check("solve-functoriality lotka-volterra", models::lv_lens(),
                              ode::tensor_ode(models::rabbit(), models::fox()), {2.0, 1.0},
                              {1.0, 0.5, 0.2, 0.4}, tol)};
      if (project)
        for (auto& r : project_checks(*project, tol)) results.push_back(std::move(r));
      Json arr = Json::array();
      std::size_t failed = 0;
      for (const auto& r : results) {
        print_result(r, out);
        arr.push_back(result_json(r));
        if (!r.ok()) ++failed;
      }
      out << (failed ? std::to_string(failed) + " check(s) failed" : "all checks passed") << "\n";
      report["results"] = std::move(arr);
      report["ok"] = failed == 0;
      code = failed ? kCheckFailed : kOk;
    }
    if (!report_path.empty()) report.write(report_path);
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace lensdyn::cli
