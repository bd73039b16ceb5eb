#include "cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "testrisk/calibration.hpp"
#include "testrisk/io.hpp"
#include "testrisk/planning.hpp"
#include "testrisk/service.hpp"

namespace testrisk::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

io::Format to_format(const std::string& name) {
  auto format = io::parse_format(name);
  if (!format) throw UsageError("unknown format '" + name + "' (md|csv|json)");
  return *format;
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kParseError:
    case ErrorCode::kSchemaError:
    case ErrorCode::kBadOverridePath:
      return kExitUsage;
    default:
      return kExitFindings;
  }
}

int report_findings(const ValidationReport& report, std::ostream& err) {
  err << io::render_findings_text(report);
  return report.has_errors() ? kExitFindings : kExitOk;
}

// "Name=g1,g2,..." for activities; "Label@pos=g1,g2,..." for levels.
std::pair<std::string, std::vector<std::string>> split_spec(
    const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError("expected NAME=grade,grade,... got '" + spec + "'");
  }
  std::vector<std::string> grades;
  std::istringstream list(spec.substr(eq + 1));
  std::string g;
  while (std::getline(list, g, ',')) grades.push_back(g);
  return {spec.substr(0, eq), grades};
}

std::chrono::seconds parse_duration(const std::string& text) {
  if (text.empty()) throw UsageError("empty duration");
  char unit = text.back();
  std::string number = std::isdigit(static_cast<unsigned char>(unit))
                           ? text
                           : text.substr(0, text.size() - 1);
  long long value = 0;
  try {
    std::size_t used = 0;
    value = std::stoll(number, &used);
    if (used != number.size() || value <= 0) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw UsageError("bad duration '" + text + "' (e.g. 90s, 30m, 24h)");
  }
  switch (unit) {
    case 'h': return std::chrono::hours(value);
    case 'm': return std::chrono::minutes(value);
    case 's': return std::chrono::seconds(value);
    default:
      if (std::isdigit(static_cast<unsigned char>(unit))) {
        return std::chrono::seconds(value);
      }
      throw UsageError("bad duration unit in '" + text + "'");
  }
}

std::atomic<service::Server*> g_server{nullptr};

extern "C" void handle_signal(int) {
  if (auto* server = g_server.load()) server->stop();
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"Test risk planning: defect predictions, risk and scope "
               "matrices, what-if scenarios",
               "testrisk"};
  app.require_subcommand(1);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "predict defects at system-test entry");
  std::optional<double> loc, fp, defects_per_fp, defects_per_kloc;
  double loc_per_fp = 125.0, complexity = 1.0, adjust = 1.0;
  double range_low = RangeFactors{}.low, range_high = RangeFactors{}.high;
  std::string method;
  bool estimate_json = false;
  estimate->add_option("--loc", loc, "lines of code");
  estimate->add_option("--loc-per-fp", loc_per_fp, "gearing: source statements per function point")
      ->capture_default_str();
  estimate->add_option("--complexity", complexity, "complexity multiplier on the FP count")
      ->capture_default_str();
  estimate->add_option("--fp", fp, "function points (skips backfiring)");
  estimate->add_option("--defects-per-fp", defects_per_fp);
  estimate->add_option("--defects-per-kloc", defects_per_kloc);
  estimate->add_option("--adjust", adjust, "defect adjustment multiplier")->capture_default_str();
  estimate->add_option("--range-low", range_low)->capture_default_str();
  estimate->add_option("--range-high", range_high)->capture_default_str();
  estimate->add_option("--method", method, "fp or loc_density (inferred by default)")
      ->check(CLI::IsMember({"fp", "loc_density"}));
  estimate->add_flag("--json", estimate_json, "emit the /api/estimate JSON body");

  // matrix
  auto* matrix = app.add_subcommand("matrix", "render the risk and scope matrices of a plan");
  std::string config;
  std::string format = "md";
  bool strict = false;
  matrix->add_option("--config", config, "plan JSON file, - for stdin")->required();
  matrix->add_option("--format", format, "md|csv|json")->capture_default_str();
  matrix->add_flag("--strict", strict, "treat DRE ordering findings as errors");

  // scope
  auto* scope = app.add_subcommand("scope", "render (and extend) the scope matrix");
  std::vector<std::string> add_activity;
  std::string add_level;
  scope->add_option("--config", config, "plan JSON file, - for stdin")->required();
  scope->add_option("--add-activity", add_activity, "NAME=grade,grade,...");
  scope->add_option("--add-level", add_level, "LABEL@POSITION=grade,... (one grade per activity)");
  scope->add_option("--format", format, "md|csv|json")->capture_default_str();

  // whatif
  auto* whatif = app.add_subcommand("whatif", "apply overrides to a plan and show deltas");
  std::vector<std::string> sets;
  std::string scenario_name = "whatif";
  whatif->add_option("--config", config, "plan JSON file, - for stdin")->required();
  whatif->add_option("--set", sets, "PATH=VALUE, e.g. levels.HIGH.dre=0.8")->required();
  whatif->add_option("--name", scenario_name)->capture_default_str();
  whatif->add_option("--format", format, "md|csv|json")->capture_default_str();

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "derive DRE and densities from history");
  calibrate->require_subcommand(1);
  std::string history_path, sizes_path, phase, entry_phase;
  bool weighted = false;
  auto* dre = calibrate->add_subcommand("dre", "per-phase defect removal efficiency");
  dre->add_option("--history", history_path, "CSV: release,phase,order,defects")->required();
  dre->add_option("--phase", phase, "only this phase");
  dre->add_option("--format", format, "md|csv|json")->capture_default_str();
  auto* density = calibrate->add_subcommand("density", "defects per KLOC and per FP");
  density->add_option("--history", history_path, "CSV: release,phase,order,defects")->required();
  density->add_option("--sizes", sizes_path, "CSV: release,loc,loc_per_fp")->required();
  density->add_option("--entry-phase", entry_phase, "phase marking system-test entry");
  density->add_flag("--weighted", weighted, "size-weighted instead of plain mean");
  density->add_option("--format", format, "md|csv|json")->capture_default_str();

  // serve
  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  int port = 8080;
  if (const char* env = std::getenv("TESTRISK_PORT")) {
    try {
      port = std::stoi(env);
    } catch (const std::exception&) {
      err << "ignoring invalid TESTRISK_PORT=" << env << "\n";
    }
  }
  std::string host = "0.0.0.0";
  std::string ttl = "24h";
  std::string static_dir;
  serve->add_option("--port", port, "listen port (env TESTRISK_PORT)")->capture_default_str();
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--session-ttl", ttl, "idle session lifetime, e.g. 24h, 30m")
      ->capture_default_str();
  serve->add_option("--static-dir", static_dir, "directory of UI assets to serve at /");

  auto* defaults = app.add_subcommand("defaults", "print the default plan document");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*defaults) {
      out << io::save_plan(default_plan_document());
      return kExitOk;
    }

    if (*estimate) {
      io::EstimateRequest req;
      if (loc) req.size = SizeEstimate{*loc, loc_per_fp, complexity};
      req.function_points = fp;
      if (!loc && !fp) throw UsageError("estimate needs --loc or --fp");
      if (!method.empty()) {
        req.method = method == "fp" ? PredictionMethod::kFunctionPoints
                                    : PredictionMethod::kLocDensity;
      }
      req.has_defects_per_fp = defects_per_fp.has_value();
      req.has_defects_per_kloc = defects_per_kloc.has_value();
      if (defects_per_fp) req.density.defects_per_fp = *defects_per_fp;
      if (defects_per_kloc) req.density.defects_per_kloc = *defects_per_kloc;
      req.density.adjustment = adjust;
      req.range = {range_low, range_high};
      out << io::render_estimate(io::run_estimate(req),
                                 estimate_json ? io::Format::kJson
                                               : io::Format::kMarkdown);
      return kExitOk;
    }

    if (*matrix) {
      const io::Format f = to_format(format);
      PlanDocument doc = io::load_plan(read_input(config, in));
      if (strict) doc.options.strict_validation = true;
      try {
        const EvaluatedPlan plan = evaluate_plan(doc);
        out << io::render_plan(plan, f);
        return report_findings(plan.matrix.report, err);
      } catch (const ValidationFailure& v) {
        report_findings(v.report(), err);
        return kExitFindings;
      }
    }

    if (*scope) {
      const io::Format f = to_format(format);
      PlanDocument doc = io::load_plan(read_input(config, in));
      ScopeMatrix grid = doc.scope_matrix;
      if (!add_level.empty()) {
        auto [head, grades] = split_spec(add_level);
        auto at = head.rfind('@');
        if (at == std::string::npos) {
          throw UsageError("--add-level expects LABEL@POSITION=grades");
        }
        std::size_t position = 0;
        try {
          position = std::stoul(head.substr(at + 1));
        } catch (const std::exception&) {
          throw UsageError("bad position in --add-level '" + add_level + "'");
        }
        grid = extend_scope_matrix(
            grid, std::nullopt, NewLevel{head.substr(0, at), position, grades});
      }
      for (const auto& spec : add_activity) {
        auto [name, grades] = split_spec(spec);
        grid = extend_scope_matrix(grid, NewActivity{name, grades, std::nullopt},
                                   std::nullopt);
      }
      out << io::render_scope(grid, f);
      return kExitOk;
    }

    if (*whatif) {
      const io::Format f = to_format(format);
      auto base = std::make_shared<const PlanDocument>(
          io::load_plan(read_input(config, in)));
      Overrides overrides;
      for (const auto& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw UsageError("--set expects PATH=VALUE, got '" + s + "'");
        }
        overrides[s.substr(0, eq)] = parse_override_value(s.substr(eq + 1));
      }
      try {
        const ScenarioResult result =
            apply_scenario({scenario_name, base, std::move(overrides)});
        out << io::render_scenario(result, f);
        return report_findings(result.matrix.report, err);
      } catch (const ValidationFailure& v) {
        report_findings(v.report(), err);
        return kExitFindings;
      }
    }

    if (*dre) {
      const io::Format f = to_format(format);
      auto histories = io::load_history_csv(read_input(history_path, in));
      std::vector<std::pair<std::string, DreProfile>> profiles;
      for (const auto& h : histories) {
        DreProfile profile;
        if (phase.empty()) {
          profile = dre_profile(h);
        } else {
          profile.phases.push_back(dre_of_phase(h, phase));
        }
        for (const auto& note : profile.notes) {
          err << "note: " << h.release_name << ": " << note << "\n";
        }
        profiles.emplace_back(h.release_name, std::move(profile));
      }
      out << io::render_dre_profiles(profiles, f);
      return kExitOk;
    }

    if (*density) {
      const io::Format f = to_format(format);
      auto histories = io::load_history_csv(read_input(history_path, in));
      io::attach_sizes(histories, io::load_sizes_csv(read_input(sizes_path, in)));
      CalibrationOptions options;
      if (!entry_phase.empty()) options.entry_phase = entry_phase;
      options.size_weighted = weighted;
      const Calibration result = calibrate_density(histories, options);
      for (const auto& note : result.notes) err << "note: " << note << "\n";
      out << io::render_calibration(result, f);
      return kExitOk;
    }

    if (*serve) {
      service::ServerConfig cfg;
      cfg.host = host;
      cfg.port = port;
      cfg.session_ttl = parse_duration(ttl);
      if (!static_dir.empty()) cfg.static_dir = static_dir;
      service::Server server(cfg);
      const int bound = server.bind();
      err << "testrisk " << service::version() << " listening on " << host
          << ":" << bound << "\n";
      g_server = &server;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      server.run();
      g_server = nullptr;
      return kExitOk;
    }
  } catch (const ValidationFailure& v) {
    report_findings(v.report(), err);
    return kExitFindings;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code());
    if (!e.location().empty()) err << " at " << e.location();
    err << ": " << e.what() << "\n";
    return exit_for(e);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace testrisk::cli
