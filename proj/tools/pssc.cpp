// Command-line front end: list, eval, verify and emit.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pssc/catalog.hpp"
#include "pssc/connections.hpp"
#include "pssc/evaluate.hpp"
#include "pssc/theorems.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::optional<std::string> manifold;
  std::optional<std::string> file;
  int samples = 200;
  std::uint64_t seed = 42;
  std::vector<std::string> tolerances;
  std::vector<std::string> checks;
  bool json = false;
  std::string format = "human";
  std::string out;
  std::string point;
  std::string tensor;
  std::string out_dir = "catalog";
};

bool want_json(const Config& c) { return c.json || c.format == "json"; }

void write_output(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + c.out + "'");
  f << text;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> p;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      p.push_back(std::stod(part, &used));
      if (part.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError("--point: '" + part + "' is not a number");
    }
  }
  if (p.empty()) throw UsageError("--point needs comma-separated coordinates");
  return p;
}

pssc::ManifoldSpec load(const Config& c) {
  try {
    return pssc::resolve_manifold(c.manifold, c.file);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int cmd_list(const Config& c) {
  std::string text;
  if (want_json(c)) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& name : pssc::catalog_names()) {
      pssc::CatalogEntry e = pssc::builtin(name);
      arr.push_back({{"name", e.name},
                     {"dim", e.spec.n},
                     {"coords", e.spec.coords},
                     {"parallel_xi_expected", e.spec.parallel_xi_expected},
                     {"almost_contact", e.spec.has_gssf_structure()},
                     {"provenance", e.provenance}});
    }
    text = arr.dump(2) + "\n";
  } else {
    for (const auto& name : pssc::catalog_names()) text += pssc::describe(pssc::builtin(name)) + "\n";
    text += "(euclidean_n also accepts a dimension: euclidean_n:<n>)\n";
  }
  write_output(c, text);
  return 0;
}

int cmd_eval(const Config& c) {
  pssc::Chart chart(load(c));
  std::vector<double> point = parse_point(c.point);
  pssc::NamedTensor t;
  try {
    t = pssc::evaluate_tensor(chart, c.tensor, point);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::string text;
  if (want_json(c)) {
    nlohmann::json j;
    j["manifold"] = chart.name();
    j["tensor"] = t.id;
    j["point"] = point;
    j["variance"] = t.value.variance();
    j["index_names"] = t.index_names;
    nlohmann::json comps = nlohmann::json::array();
    t.value.for_each_index([&](std::span<const int> idx, std::size_t flat) {
      std::vector<int> one_based(idx.begin(), idx.end());
      for (int& i : one_based) ++i;
      comps.push_back({{"index", one_based}, {"value", t.value.data()[flat]}});
    });
    j["components"] = comps;
    text = j.dump() + "\n";
  } else {
    text = t.id + " on " + chart.name() + " (variance " + t.value.variance() + ", indices 1-based)\n";
    t.value.for_each_index([&](std::span<const int> idx, std::size_t flat) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " = %.17g\n", t.value.data()[flat]);
      text += pssc::index_label(t.index_names, idx) + buf;
    });
  }
  write_output(c, text);
  return 0;
}

int cmd_verify(const Config& c) {
  pssc::RunOptions opts;
  for (const auto& item : c.tolerances) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects <check>=<value>, got '" + item + "'");
    std::string id = item.substr(0, eq);
    if (!pssc::find_check(id)) throw UsageError("unknown check id '" + id + "'");
    double v = 0.0;
    try {
      v = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("--tol value for '" + id + "' is not a number");
    }
    if (!(v > 0.0)) throw UsageError("--tol value for '" + id + "' must be positive");
    opts.tolerances[id] = v;
  }
  for (const auto& id : c.checks) {
    if (!pssc::find_check(id)) throw UsageError("unknown check id '" + id + "'");
    opts.only.push_back(id);
  }
  if (c.samples < 1) throw UsageError("--samples must be at least 1");

  pssc::ManifoldSpec spec = load(c);
  pssc::SampleSet samples = pssc::sample(spec, c.samples, c.seed);
  pssc::Chart chart(std::move(spec));
  std::vector<pssc::CheckReport> reports = pssc::run_checks(chart, samples, opts);

  std::string text;
  int passed = 0, failed = 0, skipped = 0;
  for (const auto& r : reports) {
    if (want_json(c))
      text += pssc::to_json(r).dump() + "\n";
    else
      text += pssc::to_human(r) + "\n";
    (r.status == pssc::CheckStatus::Pass ? passed : r.status == pssc::CheckStatus::Fail ? failed : skipped)++;
  }
  if (!want_json(c))
    text += std::to_string(reports.size()) + " checks: " + std::to_string(passed) + " passed, " +
            std::to_string(failed) + " failed, " + std::to_string(skipped) + " skipped\n";
  write_output(c, text);
  return failed == 0 ? 0 : kExitFail;
}

int cmd_emit(const Config& c) {
  std::filesystem::create_directories(c.out_dir);
  std::vector<std::string> names = c.manifold ? std::vector<std::string>{*c.manifold} : pssc::catalog_names();
  for (const auto& name : names) {
    pssc::CatalogEntry e = pssc::builtin(name);
    auto path = std::filesystem::path(c.out_dir) / (name + ".manifold");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << pssc::emit_catalog_document(e);
    std::cout << path.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projective semi-symmetric connection toolkit"};
  app.require_subcommand(1);
  Config c;

  auto add_source = [&](CLI::App* sub) {
    auto* m = sub->add_option("--manifold", c.manifold, "builtin catalog entry");
    auto* f = sub->add_option("--file", c.file, "manifold file (key/value or JSON)");
    m->excludes(f);
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_flag("--json", c.json, "JSON output");
    sub->add_option("--format", c.format, "human or json")->check(CLI::IsMember({"human", "json"}));
    sub->add_option("--out", c.out, "write output to this path");
  };

  auto* list = app.add_subcommand("list", "list catalog entries");
  add_output(list);

  auto* eval = app.add_subcommand("eval", "evaluate a tensor at a point");
  add_source(eval);
  eval->add_option("--tensor", c.tensor, "tensor id")->required();
  eval->add_option("--point", c.point, "comma-separated coordinates")->required();
  add_output(eval);

  auto* verify = app.add_subcommand("verify", "run verification checks");
  add_source(verify);
  verify->add_option("--samples", c.samples, "sample points")->capture_default_str();
  verify->add_option("--seed", c.seed, "sampling seed")->capture_default_str();
  verify->add_option("--tol", c.tolerances, "tolerance override <check>=<value>")->take_all();
  verify->add_option("--check", c.checks, "check ids")->delimiter(',');
  add_output(verify);

  auto* emit = app.add_subcommand("emit", "write catalog entries as manifold files");
  emit->add_option("--manifold", c.manifold, "single entry (default: all)");
  emit->add_option("--out-dir", c.out_dir, "target directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*list) return cmd_list(c);
    if (*eval) return cmd_eval(c);
    if (*verify) return cmd_verify(c);
    if (*emit) return cmd_emit(c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pssc::CatalogError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const pssc::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const pssc::GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const pssc::EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
