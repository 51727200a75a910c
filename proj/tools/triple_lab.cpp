// Command-line front end. Exit codes: 0 pass, 1 check failure, 2 usage error.

#include <CLI11.hpp>

#include <triple_lab/commands.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

namespace {

using namespace triple_lab;

constexpr int exit_pass = 0;
constexpr int exit_check_failure = 1;
constexpr int exit_usage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output path: " + path);
  return f;
}

/// Calls write(stream) on --out, or on stdout when no path was given.
template <class Write>
void emit(const RunConfig& cfg, Write&& write) {
  if (cfg.out) {
    std::ofstream f = open_output(*cfg.out);
    write(f);
    f.flush();
    if (!f) throw UsageError("failed writing output path: " + *cfg.out);
  } else {
    write(std::cout);
    std::cout.flush();
  }
}

void emit_table(const RunConfig& cfg, const Table& t, const std::string& command) {
  emit(cfg, [&](std::ostream& os) {
    if (cfg.format == OutputFormat::csv) {
      write_csv(os, t);
    } else {
      Json j = report_header(cfg, command);
      j["rows"] = table_json(t);
      os << j.dump(2) << '\n';
    }
  });
}

/// CSV rows plus a JSON summary. The summary goes next to --out as
/// <out>.summary.json, or to stderr when writing to stdout.
void emit_table_with_summary(const RunConfig& cfg, const Table& t, Json summary) {
  if (cfg.format == OutputFormat::json) {
    summary["rows"] = table_json(t);
    emit(cfg, [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
    return;
  }
  emit(cfg, [&](std::ostream& os) { write_csv(os, t); });
  if (cfg.out) {
    const std::string path = *cfg.out + ".summary.json";
    std::ofstream f = open_output(path);
    f << summary.dump(2) << '\n';
    if (!f) throw UsageError("failed writing output path: " + path);
  } else {
    std::cerr << summary.dump(2) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the triple uncertainty relation of q, p and r = -q - p"};
  app.set_version_flag("--version", std::string(tool_version));
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string format = "csv";
  std::string profile = "fast";
  std::string out;
  app.add_option("--hbar", cfg.hbar, "Value of hbar")->capture_default_str();
  app.add_option("--truncation", cfg.truncation, "Number-basis truncation N")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for every random stream")->capture_default_str();
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", out, "Output path (default: stdout)");
  app.add_option("--tol-profile", profile, "Problem sizes for verify")
      ->check(CLI::IsMember({"fast", "strict"}))
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run every invariant check and report pass or fail");

  WignerOptions wopt;
  auto* wigner = app.add_subcommand("wigner", "Wigner functions of Xi0 and the vacuum on a grid");
  wigner->add_option("--q-min", wopt.q_min)->capture_default_str();
  wigner->add_option("--q-max", wopt.q_max)->capture_default_str();
  wigner->add_option("--p-min", wopt.p_min)->capture_default_str();
  wigner->add_option("--p-max", wopt.p_max)->capture_default_str();
  wigner->add_option("--step", wopt.step)->capture_default_str();

  ScanOptions sopt;
  auto* scan = app.add_subcommand("scan", "Pair and triple products along the rotated squeezed family");
  scan->add_option("--gamma", sopt.gamma, "Squeeze parameter")->capture_default_str();
  scan->add_option("--points", sopt.points, "Grid points over [0, pi]")->capture_default_str();

  MinimizeOptions mopt;
  std::string objective = "product";
  std::string engine = "gaussian";
  auto* minimize = app.add_subcommand("minimize", "Search for the minimal triple product or variance sum");
  minimize->add_option("--objective", objective)->check(CLI::IsMember({"product", "sum"}))->capture_default_str();
  minimize->add_option("--engine", engine)->check(CLI::IsMember({"gaussian", "fock"}))->capture_default_str();
  minimize->add_option("--restarts", mopt.restarts, "Random starts for the fock engine")->capture_default_str();
  minimize->add_option("--tol", mopt.tol, "Target accuracy for the gaussian engine")->capture_default_str();

  HomodyneOptions hopt;
  std::string homodyne_engine = "gaussian";
  auto* homodyne = app.add_subcommand("homodyne", "Simulated homodyne estimate of the triple product");
  homodyne->add_option("--state", hopt.state)->check(CLI::IsMember({"xi0", "vacuum"}))->capture_default_str();
  homodyne->add_option("--samples", hopt.samples, "Samples per phase")->capture_default_str();
  homodyne->add_option("--engine", homodyne_engine)->check(CLI::IsMember({"gaussian", "fock"}))->capture_default_str();
  homodyne->add_option("--bootstrap", hopt.bootstrap_resamples, "Bootstrap resamples")->capture_default_str();

  EntropyOptions eopt;
  std::string family = "gaussian";
  auto* entropy = app.add_subcommand("entropy", "Entropy sums over random states");
  entropy->add_option("--family", family)->check(CLI::IsMember({"gaussian", "fock"}))->capture_default_str();
  entropy->add_option("--samples", eopt.samples)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    cfg.format = parse_format(format);
    cfg.profile = parse_profile(profile);
    if (!out.empty()) cfg.out = out;
    cfg.validate();

    if (verify->parsed()) {
      const VerificationReport rep = cmd_verify(cfg);
      emit(cfg, [&](std::ostream& os) {
        if (cfg.format == OutputFormat::csv)
          write_csv(os, rep);
        else
          os << report_json(rep, cfg).dump(2) << '\n';
      });
      return rep.overall() ? exit_pass : exit_check_failure;
    }
    if (wigner->parsed()) {
      emit_table(cfg, cmd_wigner(cfg, wopt), "wigner");
      return exit_pass;
    }
    if (scan->parsed()) {
      emit_table(cfg, cmd_scan(cfg, sopt), "scan");
      return exit_pass;
    }
    if (minimize->parsed()) {
      mopt.objective = parse_objective(objective);
      mopt.engine = parse_engine(engine);
      SearchResult r;
      const Json j = cmd_minimize(cfg, mopt, &r);
      emit(cfg, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
      return r.converged ? exit_pass : exit_check_failure;
    }
    if (homodyne->parsed()) {
      hopt.engine = parse_engine(homodyne_engine);
      auto [table, summary] = cmd_homodyne(cfg, hopt);
      emit_table_with_summary(cfg, table, std::move(summary));
      return exit_pass;
    }
    if (entropy->parsed()) {
      eopt.family = parse_entropy_family(family);
      EntropyScanReport rep;
      auto [table, summary] = cmd_entropy(cfg, eopt, &rep);
      emit_table_with_summary(cfg, table, std::move(summary));
      return rep.violations == 0 && rep.failed == 0 ? exit_pass : exit_check_failure;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return exit_check_failure;
  }
  return exit_usage;
}
