// acwa-twin: command-line front end for the water-testbed digital twin.
//
// Subcommands:
//   validate  check a scenario file and print the findings
//   run       simulate a scenario (or a built-in layout) to CSV + manifest
//   generate  map a finished run onto sensor records, optionally poisoned,
//             as labeled clean/poisoned dataset files or a live TCP stream
//   compare   column-wise numeric diff of two run CSVs
//
// Exit codes: 0 success; 1 validation/domain/runtime-input error; 2 command
// line usage error; 3 internal invariant violation. Artifacts are written
// to a temporary name and renamed into place, so a failed invocation never
// leaves a partial file behind.

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "acwa/attacks.hpp"
#include "acwa/datasets.hpp"
#include "acwa/engine.hpp"
#include "acwa/errors.hpp"
#include "acwa/recording.hpp"
#include "acwa/scenario_io.hpp"
#include "acwa/sensors.hpp"
#include "acwa/stream_server.hpp"
#include "acwa/topology.hpp"
#include "acwa/validate.hpp"

namespace {

bool debug_log_enabled() {
  const char* v = std::getenv("ACWA_TWIN_LOG");
  return v && std::string(v) == "debug";
}

void debug_log(const std::string& msg) {
  if (debug_log_enabled()) std::fprintf(stderr, "[debug] %s\n", msg.c_str());
}

acwa::Scenario load_run_input(const std::string& scenario_path,
                              const std::string& tmpl) {
  if (!tmpl.empty()) return acwa::topology_template(acwa::topology_from_name(tmpl));
  return acwa::load_scenario(scenario_path);
}

int cmd_validate(const std::string& path) {
  const acwa::Scenario s = acwa::load_scenario(path);
  const acwa::ValidationReport report = acwa::validate(s);
  std::fputs(acwa::format_report(report).c_str(), stdout);
  if (report.ok()) {
    std::printf("OK: '%s' is runnable (%d warning%s)\n", s.unique_id.c_str(),
                report.warning_count(),
                report.warning_count() == 1 ? "" : "s");
    return 0;
  }
  std::printf("INVALID: %d error%s, %d warning%s\n", report.error_count(),
              report.error_count() == 1 ? "" : "s", report.warning_count(),
              report.warning_count() == 1 ? "" : "s");
  return 1;
}

int cmd_run(const std::string& scenario_path, const std::string& tmpl,
            std::string out_stem, const std::string& schema, bool strict) {
  acwa::Scenario s = load_run_input(scenario_path, tmpl);
  if (!schema.empty()) {
    s.output_schema =
        schema == "si" ? acwa::OutputSchema::SI : acwa::OutputSchema::Table4;
  }

  const acwa::ValidationReport report = acwa::validate(s);
  if (!report.ok()) {
    std::fputs(acwa::format_report(report).c_str(), stderr);
    std::fprintf(stderr, "scenario '%s' is invalid; nothing written\n",
                 s.unique_id.c_str());
    return 1;
  }
  for (const acwa::Violation& v : report.violations) {
    std::fprintf(stderr, "WARNING [%s] %s: %s\n", v.code.c_str(),
                 v.subject.c_str(), v.message.c_str());
  }

  if (out_stem.empty()) out_stem = s.unique_id;
  acwa::RunOptions options;
  options.policy =
      strict ? acwa::RegimePolicy::Strict : acwa::RegimePolicy::Lenient;

  const acwa::RecordWriter writer(s);
  std::string csv = writer.header();
  const acwa::RunSummary summary =
      acwa::run(s, options, [&](const acwa::SimRecord& r) {
        csv += writer.format(r);
      });

  const std::string csv_path = out_stem + ".csv";
  const std::string manifest_path = out_stem + ".manifest.json";
  acwa::atomic_write(csv_path, csv);
  acwa::atomic_write(
      manifest_path,
      acwa::run_manifest(s, summary, csv_path).dump(2) + "\n");

  std::printf("run '%s': %ld records, %zu event%s, volume residual %.3g m^3, "
              "%.3f s\n",
              s.unique_id.c_str(), summary.records, summary.events.size(),
              summary.events.size() == 1 ? "" : "s", summary.volume_residual,
              summary.runtime_seconds);
  for (const acwa::Event& e : summary.events) {
    debug_log("event t=" + acwa::detail_validate::num(e.time) + " s " +
              e.link + " " + acwa::to_string(e.kind) + ": " + e.detail);
  }
  std::printf("wrote %s\n", csv_path.c_str());
  std::printf("wrote %s\n", manifest_path.c_str());
  return 0;
}

int cmd_generate(const std::string& manifest_path,
                 const std::string& bindings_path,
                 const std::string& attacks_path, std::string out_stem,
                 const std::string& format, std::uint64_t seed,
                 const std::string& serve, double pace, int max_clients) {
  const acwa::ojson manifest = acwa::detail_io::read_json_file(manifest_path);
  if (!manifest.contains("scenario") || !manifest.contains("csv")) {
    throw acwa::ValidationError(
        manifest_path + ": not a run manifest (needs 'scenario' and 'csv')");
  }
  const acwa::Scenario s = acwa::parse_scenario(manifest["scenario"]);

  // The manifest must point at a run that actually exists on disk.
  std::filesystem::path csv_ref(manifest["csv"].get<std::string>());
  if (csv_ref.is_relative()) {
    csv_ref = std::filesystem::path(manifest_path).parent_path() / csv_ref;
  }
  if (!std::filesystem::exists(csv_ref)) {
    throw acwa::ValidationError(manifest_path +
                                ": referenced run output '" +
                                csv_ref.string() + "' does not exist");
  }

  const acwa::BindingSet bindings = acwa::load_bindings(bindings_path);
  // Collect every binding problem before giving up.
  {
    std::string problems;
    for (const acwa::SensorBinding& b : bindings.sensors) {
      try {
        acwa::resolve_binding(s, b);
      } catch (const acwa::ValidationError& e) {
        problems += std::string("  ") + e.what() + "\n";
      }
    }
    if (!problems.empty()) {
      throw acwa::ValidationError("bindings do not fit run '" + s.unique_id +
                                  "':\n" + problems);
    }
  }

  std::vector<acwa::AttackSpec> attacks;
  if (!attacks_path.empty()) {
    attacks = acwa::load_attacks(attacks_path);
    acwa::check_attack_windows(attacks, s.duration);
  }

  // Re-derive the simulation records; runs are deterministic, so this
  // reproduces exactly the stream behind the manifest's CSV.
  std::vector<acwa::SimRecord> records;
  records.reserve(static_cast<std::size_t>(s.duration / s.time_step) + 1);
  acwa::run(s, acwa::RunOptions{}, [&](const acwa::SimRecord& r) {
    records.push_back(r);
  });

  const std::vector<acwa::SensorRecord> clean =
      acwa::emit(s, records, bindings, seed);
  std::vector<acwa::SensorRecord> poisoned;
  if (!attacks.empty()) poisoned = acwa::apply_attacks(clean, attacks, bindings);

  if (out_stem.empty()) out_stem = s.unique_id + "_dataset";
  const std::string ext = format == "csv" ? ".csv" : ".jsonl";
  const auto render = [&](const std::vector<acwa::SensorRecord>& recs) {
    std::ostringstream os;
    if (format == "csv") {
      acwa::write_csv(os, recs, bindings);
    } else {
      acwa::write_jsonl(os, recs);
    }
    return os.str();
  };

  const std::string clean_path = out_stem + "_clean" + ext;
  const std::string poisoned_path =
      attacks.empty() ? "" : out_stem + "_poisoned" + ext;
  acwa::atomic_write(clean_path, render(clean));
  if (!attacks.empty()) acwa::atomic_write(poisoned_path, render(poisoned));
  const std::string dataset_manifest_path = out_stem + ".manifest.json";
  acwa::atomic_write(dataset_manifest_path,
                     acwa::dataset_manifest(s, bindings, attacks, clean_path,
                                            poisoned_path, clean.size(),
                                            poisoned.size(), seed,
                                            format == "csv" ? "csv" : "jsonl")
                             .dump(2) +
                         "\n");

  std::printf("dataset '%s': %zu clean record%s", s.unique_id.c_str(),
              clean.size(), clean.size() == 1 ? "" : "s");
  if (!attacks.empty()) {
    std::printf(", %zu poisoned record%s (%zu attack%s)", poisoned.size(),
                poisoned.size() == 1 ? "" : "s", attacks.size(),
                attacks.size() == 1 ? "" : "s");
  }
  std::printf("\n");
  std::printf("wrote %s\n", clean_path.c_str());
  if (!attacks.empty()) std::printf("wrote %s\n", poisoned_path.c_str());
  std::printf("wrote %s\n", dataset_manifest_path.c_str());

  if (!serve.empty()) {
    const std::size_t colon = serve.rfind(':');
    if (colon == std::string::npos) {
      throw acwa::ValidationError("--serve needs HOST:PORT, got '" + serve +
                                  "'");
    }
    const std::string host = serve.substr(0, colon);
    int port = 0;
    const std::string port_text = serve.substr(colon + 1);
    const auto res = std::from_chars(
        port_text.data(), port_text.data() + port_text.size(), port);
    if (res.ec != std::errc() ||
        res.ptr != port_text.data() + port_text.size() || port < 0 ||
        port > 65535) {
      throw acwa::ValidationError("--serve: bad port '" + port_text + "'");
    }
    const std::vector<acwa::SensorRecord>& live =
        attacks.empty() ? clean : poisoned;
    std::vector<std::string> lines;
    std::vector<long long> stamps;
    lines.reserve(live.size());
    stamps.reserve(live.size());
    for (const acwa::SensorRecord& r : live) {
      lines.push_back(acwa::jsonl_line(r));
      stamps.push_back(r.timestamp_ms);
    }
    acwa::StreamServer server(host, port);
    std::printf("serving on %s:%d (pace factor %g, %d client%s)\n",
                host.c_str(), server.port(), pace, max_clients,
                max_clients == 1 ? "" : "s");
    std::fflush(stdout);
    const acwa::StreamServer::ServeStats stats =
        server.serve(lines, stamps, pace, max_clients);
    std::printf("stream done: %d completed, %d dropped\n", stats.completed,
                stats.dropped);
  }
  return 0;
}

// ---- compare --------------------------------------------------------------

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw acwa::ValidationError("cannot read CSV file '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.eof()) break;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw acwa::ValidationError("'" + path + "' is empty");
  return rows;
}

bool parse_cell(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && !s.empty();
}

int cmd_compare(const std::string& path_a, const std::string& path_b,
                double tolerance) {
  const auto a = read_csv(path_a);
  const auto b = read_csv(path_b);
  if (a[0] != b[0]) {
    std::fprintf(stderr, "schemas differ:\n");
    const std::size_t n = std::max(a[0].size(), b[0].size());
    for (std::size_t i = 0; i < n; ++i) {
      const std::string ca = i < a[0].size() ? a[0][i] : "(absent)";
      const std::string cb = i < b[0].size() ? b[0][i] : "(absent)";
      if (ca != cb) {
        std::fprintf(stderr, "  column %zu: '%s' vs '%s'\n", i + 1, ca.c_str(),
                     cb.c_str());
      }
    }
    return 1;
  }
  if (a.size() != b.size()) {
    std::fprintf(stderr, "row counts differ: %zu vs %zu\n", a.size() - 1,
                 b.size() - 1);
    return 1;
  }

  const std::size_t cols = a[0].size();
  std::vector<double> max_abs(cols, 0.0);
  std::vector<double> sum_sq(cols, 0.0);
  std::vector<long> mismatched(cols, 0);
  const std::size_t rows = a.size() - 1;
  for (std::size_t r = 1; r < a.size(); ++r) {
    if (a[r].size() != cols || b[r].size() != cols) {
      std::fprintf(stderr, "row %zu: ragged line\n", r);
      return 1;
    }
    for (std::size_t c = 0; c < cols; ++c) {
      double va = 0.0;
      double vb = 0.0;
      const bool na = parse_cell(a[r][c], va);
      const bool nb = parse_cell(b[r][c], vb);
      if (na && nb) {
        const double d = std::fabs(va - vb);
        max_abs[c] = std::fmax(max_abs[c], d);
        sum_sq[c] += d * d;
      } else if (a[r][c] != b[r][c]) {
        ++mismatched[c];
      }
    }
  }

  bool ok = true;
  std::printf("%-40s %14s %14s\n", "column", "max_abs", "rms");
  for (std::size_t c = 0; c < cols; ++c) {
    const double rms = rows ? std::sqrt(sum_sq[c] / rows) : 0.0;
    std::printf("%-40s %14.6g %14.6g", a[0][c].c_str(), max_abs[c], rms);
    if (mismatched[c] > 0) {
      std::printf("  (%ld non-numeric mismatch%s)", mismatched[c],
                  mismatched[c] == 1 ? "" : "es");
      ok = false;
    }
    std::printf("\n");
    if (max_abs[c] > tolerance) ok = false;
  }
  std::printf(ok ? "MATCH within tolerance %g\n" : "DIFFER beyond tolerance %g\n",
              tolerance);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "acwa-twin: deterministic digital twin of a laboratory water "
      "distribution testbed (hydraulics, water quality, sensor datasets)"};
  app.require_subcommand(1);

  // validate
  auto* v = app.add_subcommand("validate", "Check a scenario file; exit 0 when runnable");
  std::string v_path;
  v->add_option("scenario", v_path, "scenario JSON file (flat or extended form)")
      ->required();

  // run
  auto* r = app.add_subcommand("run", "Simulate a scenario; write <out>.csv and <out>.manifest.json");
  std::string r_path;
  std::string r_template;
  std::string r_out;
  std::string r_schema;
  bool r_strict = false;
  r->add_option("scenario", r_path, "scenario JSON file (flat or extended form)");
  r->add_option("--template", r_template,
                "built-in layout instead of a file: twotank, line, bus, star")
      ->check(CLI::IsMember({"twotank", "line", "bus", "star"}));
  r->add_option("--out", r_out,
                "output stem (default: the scenario's unique_id)");
  r->add_option("--schema", r_schema,
                "output schema override: table4 (HH:MM:SS, psi) or si (seconds, Pa)")
      ->check(CLI::IsMember({"table4", "si"}));
  r->add_flag("--strict-regime", r_strict,
              "refuse transitional-regime flows instead of running through them (default: off)");

  // generate
  auto* g = app.add_subcommand("generate", "Turn a finished run into labeled sensor datasets");
  std::string g_manifest;
  std::string g_bindings;
  std::string g_attacks;
  std::string g_out;
  std::string g_format = "jsonl";
  std::uint64_t g_seed = 0;
  std::string g_serve;
  double g_pace = 0.0;
  int g_clients = 1;
  g->add_option("manifest", g_manifest, "run manifest JSON written by 'run'")
      ->required();
  g->add_option("bindings", g_bindings, "sensor bindings JSON")->required();
  g->add_option("--attacks", g_attacks,
                "attack specification JSON; adds the poisoned dataset");
  g->add_option("--out", g_out,
                "output stem (default: <unique_id>_dataset)");
  g->add_option("--format", g_format, "dataset format (default: jsonl)")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  g->add_option("--seed", g_seed,
                "noise/attack random seed (default: 0; same seed = identical bytes)")
      ->capture_default_str();
  g->add_option("--serve", g_serve,
                "after writing, stream the dataset as newline JSON on HOST:PORT (port 0 = ephemeral)");
  g->add_option("--pace", g_pace,
                "stream pacing factor: 0 = full speed, 1 = real time, 2 = twice real time (default: 0)")
      ->capture_default_str();
  g->add_option("--serve-max-clients", g_clients,
                "serve this many consumers, then exit (default: 1)")
      ->capture_default_str();

  // compare
  auto* c = app.add_subcommand("compare", "Column-wise numeric diff of two run CSVs");
  std::string c_a;
  std::string c_b;
  double c_tol = 0.0;
  c->add_option("a", c_a, "first CSV file")->required();
  c->add_option("b", c_b, "second CSV file")->required();
  c->add_option("--tolerance", c_tol,
                "largest acceptable per-column |a-b| (same units as the column; default: 0)")
      ->capture_default_str();

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
    if (app.got_subcommand(v)) return cmd_validate(v_path);
    if (app.got_subcommand(r)) {
      if (r_path.empty() == r_template.empty()) {
        std::fprintf(stderr,
                     "run: give exactly one of a scenario file or --template\n");
        return 2;
      }
      return cmd_run(r_path, r_template, r_out, r_schema, r_strict);
    }
    if (app.got_subcommand(g)) {
      return cmd_generate(g_manifest, g_bindings, g_attacks, g_out, g_format,
                          g_seed, g_serve, g_pace, g_clients);
    }
    if (app.got_subcommand(c)) return cmd_compare(c_a, c_b, c_tol);
    std::fprintf(stderr, "no subcommand selected\n");
    return 2;
  } catch (const acwa::DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const acwa::ContractViolation& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  } catch (const std::logic_error& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  } catch (const acwa::SolverFailure& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  } catch (const acwa::InvariantBreach& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  } catch (const acwa::RegimeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const acwa::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}
