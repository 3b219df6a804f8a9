#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kundt/catalog.hpp"
#include "kundt/errors.hpp"
#include "kundt/metric_file.hpp"
#include "kundt/numeric.hpp"
#include "kundt/report.hpp"

namespace {

using namespace kundt;

struct CommonFlags {
  std::uint64_t seed = 0;
  std::vector<std::string> box_specs;
  bool json = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "seed for the sampling zero test");
  cmd->add_option("--box", flags.box_specs,
                  "sampling range override: 'lo,hi' for every coordinate or "
                  "'name=lo,hi' for one");
  cmd->add_flag("--json", flags.json, "emit the report as JSON");
}

std::pair<double, double> parse_range(const std::string& text) {
  std::size_t comma = text.find(',');
  if (comma == std::string::npos)
    throw BadParameter("--box wants 'lo,hi', got '" + text + "'");
  try {
    double lo = std::stod(text.substr(0, comma));
    double hi = std::stod(text.substr(comma + 1));
    if (!(lo < hi)) throw BadParameter("--box wants lo < hi, got '" + text + "'");
    return {lo, hi};
  } catch (const std::invalid_argument&) {
    throw BadParameter("--box wants numeric bounds, got '" + text + "'");
  } catch (const std::out_of_range&) {
    throw BadParameter("--box bounds out of range: '" + text + "'");
  }
}

ZeroTestOptions make_options(const CommonFlags& flags, const Chart* chart) {
  ZeroTestOptions opt;
  opt.seed = flags.seed;
  for (const std::string& spec : flags.box_specs) {
    std::size_t eq = spec.find('=');
    if (eq != std::string::npos) {
      std::string name = spec.substr(0, eq);
      if (chart && chart->index_of(name) < 0)
        throw BadParameter("--box names unknown coordinate '" + name + "'");
      opt.box.ranges[name] = parse_range(spec.substr(eq + 1));
    } else {
      if (!chart) throw BadParameter("--box without a chart document");
      auto range = parse_range(spec);
      for (const std::string& coord : chart->coords())
        opt.box.ranges[coord] = range;
    }
  }
  return opt;
}

std::string read_input(const std::string& path) {
  std::ostringstream buffer;
  if (path == "-") {
    buffer << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw BadParameter("cannot read file: " + path);
    buffer << in.rdbuf();
  }
  return buffer.str();
}

double ms_since(std::chrono::steady_clock::time_point start) {
  auto d = std::chrono::steady_clock::now() - start;
  return std::chrono::duration<double, std::milli>(d).count();
}

void emit(const ReportDocument& rep, bool json) {
  if (json)
    std::cout << report_json(rep).dump(2) << "\n";
  else
    std::cout << report_text(rep);
}

int run_check(const std::string& path, const std::string& field_name,
              const CommonFlags& flags) {
  auto t0 = std::chrono::steady_clock::now();
  std::string text = read_input(path);
  MetricFile doc = parse_metric_file(text);
  ReportDocument rep;
  rep.input_digest = fnv1a(text);
  rep.seed = flags.seed;
  rep.timings_ms.emplace_back("parse", ms_since(t0));
  int exit_code = 0;
  auto t1 = std::chrono::steady_clock::now();
  if (doc.metric) {
    Metric g = build_metric(doc, make_options(flags, &*doc.chart));
    const VectorField* field = doc.find_field(field_name);
    if (!field)
      throw BadParameter("document has no field named " + field_name);
    rep.field_name = field_name;
    rep.congruence = analyze(g, *field);
    exit_code = rep.congruence->kundt ? 0 : 1;
  } else if (doc.algebra) {
    if (!doc.ip) throw BadParameter("algebra document has no inner product");
    if (!doc.algebra_v) throw BadParameter("algebra document has no V line");
    rep.algebraic = analyze_algebraic(*doc.algebra, *doc.ip, *doc.algebra_v);
    rep.algebra_basis = doc.algebra->basis();
    exit_code = rep.algebraic->algebraic_kundt ? 0 : 1;
  } else {
    throw BadParameter("document has no [metric] or [algebra] section");
  }
  rep.timings_ms.emplace_back("analyze", ms_since(t1));
  emit(rep, flags.json);
  return exit_code;
}

int run_classify(const std::string& path, const CommonFlags& flags) {
  auto t0 = std::chrono::steady_clock::now();
  std::string text = read_input(path);
  MetricFile doc = parse_metric_file(text);
  if (!doc.roles)
    throw BadParameter("classify requires a [roles] section");
  ReportDocument rep;
  rep.input_digest = fnv1a(text);
  rep.seed = flags.seed;
  rep.timings_ms.emplace_back("parse", ms_since(t0));
  auto t1 = std::chrono::steady_clock::now();
  Metric g = build_metric(doc, make_options(flags, &*doc.chart));
  rep.classification = classify_metric(g, *doc.roles);
  rep.timings_ms.emplace_back("classify", ms_since(t1));
  emit(rep, flags.json);
  return rep.classification->most_specific == SpaceClass::NotAdapted ? 2 : 0;
}

int run_catalog_list(bool json) {
  const auto& roster = catalog_roster();
  if (json) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const CatalogInfo& info : roster) {
      nlohmann::ordered_json row;
      row["name"] = info.name;
      row["description"] = info.description;
      row["defaults"] = info.defaults;
      rows.push_back(row);
    }
    std::cout << rows.dump(2) << "\n";
    return 0;
  }
  for (const CatalogInfo& info : roster) {
    std::cout << info.name << ": " << info.description;
    if (!info.defaults.empty()) {
      std::cout << " (";
      bool first = true;
      for (const auto& [key, value] : info.defaults) {
        std::cout << (first ? "" : ", ") << key << "=" << value;
        first = false;
      }
      std::cout << ")";
    }
    std::cout << "\n";
  }
  return 0;
}

int run_catalog_show(const std::string& name, const CommonFlags& flags) {
  BuiltEntry entry = get(name, {}, flags.seed);
  MetricFile doc;
  if (entry.metric) {
    doc.chart = entry.metric->chart();
    doc.metric = entry.metric->components();
  }
  if (entry.field) doc.fields.emplace_back("V", *entry.field);
  doc.roles = entry.roles;
  if (entry.algebra) {
    doc.algebra = entry.algebra;
    doc.ip = entry.ip;
    doc.algebra_v = entry.algebra_v;
  }
  std::cout << serialize_metric_file(doc);
  return 0;
}

int run_catalog_run(const CommonFlags& flags) {
  RunSummary summary = run_all(flags.seed);
  if (flags.json) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const RunRow& row : summary.rows) {
      nlohmann::ordered_json r;
      r["name"] = row.name;
      r["pass"] = row.pass;
      r["detail"] = row.detail;
      rows.push_back(r);
    }
    j["rows"] = rows;
    j["all_pass"] = summary.all_pass;
    std::cout << j.dump(2) << "\n";
  } else {
    std::size_t width = 0;
    for (const RunRow& row : summary.rows)
      width = std::max(width, row.name.size());
    for (const RunRow& row : summary.rows) {
      std::cout << row.name << std::string(width + 2 - row.name.size(), ' ')
                << (row.pass ? "pass" : "FAIL") << "  " << row.detail << "\n";
    }
    std::cout << (summary.all_pass ? "all entries passed"
                                   : "some entries failed")
              << "\n";
  }
  return summary.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lorentzian metric analysis: kundt verification and "
               "classification"};
  app.require_subcommand(1);

  std::string check_file;
  std::string check_field = "V";
  CommonFlags check_flags;
  CLI::App* check = app.add_subcommand(
      "check", "analyze a lightlike field for the kundt conditions");
  check->add_option("file", check_file, "metric document ('-' for stdin)")
      ->required();
  check->add_option("--field", check_field, "field name to analyze");
  add_common(check, check_flags);

  std::string classify_file;
  CommonFlags classify_flags;
  CLI::App* classify = app.add_subcommand(
      "classify", "detect the adapted form and walk the hierarchy");
  classify->add_option("file", classify_file, "metric document ('-' for stdin)")
      ->required();
  add_common(classify, classify_flags);

  CLI::App* catalog = app.add_subcommand("catalog", "built-in example metrics");
  catalog->require_subcommand(1);
  bool list_json = false;
  CLI::App* list = catalog->add_subcommand("list", "print the roster");
  list->add_flag("--json", list_json, "emit JSON");
  std::string show_name;
  CommonFlags show_flags;
  CLI::App* show = catalog->add_subcommand(
      "show", "emit an entry as a metric document");
  show->add_option("name", show_name, "entry name")->required();
  add_common(show, show_flags);
  CommonFlags run_flags;
  CLI::App* run = catalog->add_subcommand("run", "analyze every entry");
  add_common(run, run_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (check->parsed()) return run_check(check_file, check_field, check_flags);
    if (classify->parsed()) return run_classify(classify_file, classify_flags);
    if (list->parsed()) return run_catalog_list(list_json);
    if (show->parsed()) return run_catalog_show(show_name, show_flags);
    if (run->parsed()) return run_catalog_run(run_flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
