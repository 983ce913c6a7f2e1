#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "petz/channel_io.hpp"
#include "petz/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;

using namespace petz;

int run_sweep_cmd(const std::string& channel, const std::string& config_path, const std::string& backend,
                  const std::string& out_dir) {
  const DampingKind kind = parse_damping_kind(channel);
  harness::SweepConfig cfg = harness::default_config(kind);
  if (!config_path.empty()) cfg = harness::load_config(config_path, cfg);
  // the command line wins over the file
  cfg.channel = kind;
  if (!backend.empty()) cfg.backend = harness::parse_backend(backend);

  const auto records = harness::run_sweep(cfg);
  const std::filesystem::path dir(out_dir);
  const std::string stem = "sweep_" + std::string(short_name(kind));
  harness::emit_csv(records, dir / (stem + ".csv"));
  harness::emit_plot(records, dir / (stem + ".svg"));
  std::cout << records.size() << " records -> " << (dir / (stem + ".csv")).string() << ", "
            << (dir / (stem + ".svg")).string() << "\n";
  return kExitOk;
}

int run_compile_cmd(const std::string& channel, double p, double eps, bool dump, const std::string& emit,
                    const std::string& json_path) {
  const DampingKind kind = parse_damping_kind(channel);
  if (!emit.empty() && emit != "pulses") throw Error(ErrorKind::ConfigError, "--emit accepts only 'pulses'");

  const KrausChannel ch = damping_channel(kind, p);
  const KrausChannel rec = closed_form_petz(kind, p, eps);

  if (!json_path.empty()) {
    nlohmann::json j{{"channel", channel_to_json(ch)}, {"recovery", channel_to_json(rec)}};
    std::ofstream out(json_path);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + json_path);
    out << j.dump(2) << "\n";
  }

  if (emit == "pulses") {
    const auto seq = kind == DampingKind::AmplitudeDamping ? nmr::compile_ad_sequence(p, eps)
                                                           : nmr::compile_pd_sequence(p, eps);
    std::cout << seq.to_text();
    return kExitOk;
  }

  const DqcProgram channel_prog = plan_dqc(ch);
  const DqcProgram recovery_prog = plan_dqc(rec);
  if (dump) {
    std::cout << dump_program(channel_prog) << "\n" << dump_program(recovery_prog);
    return kExitOk;
  }
  const double d1 = verify(channel_prog, ch), d2 = verify(recovery_prog, rec);
  std::printf("%s: choi distance %.3e\n%s: choi distance %.3e\n", channel_prog.label.c_str(), d1,
              recovery_prog.label.c_str(), d2);
  return (d1 < 1e-8 && d2 < 1e-8) ? kExitOk : kExitVerifyFailed;
}

int run_verify_cmd(std::optional<double> tol) {
  harness::VerifyOptions options;
  options.tolerance = tol;
  const auto report = harness::verify_all(options);
  std::cout << report.to_text();
  return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Petz recovery maps: channel simulation, DQC lowering and NMR pulse compilation"};
  app.require_subcommand(1);

  std::string channel, config_path, backend, out_dir;
  auto* sweep = app.add_subcommand("sweep", "fidelity sweep, writes CSV and SVG");
  sweep->add_option("--channel", channel, "ad | pd")->required();
  sweep->add_option("--config", config_path, "key=value config file");
  sweep->add_option("--backend", backend, "kraus | dqc | pulses");
  sweep->add_option("--out", out_dir, "output directory")->required();

  double p = 0, eps = 0;
  bool dump = false;
  std::string emit, json_path;
  auto* compile = app.add_subcommand("compile", "lower channel and recovery to DQC programs or pulses");
  compile->add_option("--channel", channel, "ad | pd")->required();
  compile->add_option("--p", p, "damping strength")->required();
  compile->add_option("--eps", eps, "reference-state parameter")->required();
  auto* dump_flag = compile->add_flag("--dump", dump, "print V, W, U_j, Ut_m");
  compile->add_option("--emit", emit, "pulses")->excludes(dump_flag);
  compile->add_option("--json", json_path, "also write both Kraus lists as JSON");

  std::optional<double> tol;
  auto* verify_cmd = app.add_subcommand("verify", "run the invariant suites");
  verify_cmd->add_option("--tol", tol, "override every residual threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sweep) return run_sweep_cmd(channel, config_path, backend, out_dir);
    if (*compile) return run_compile_cmd(channel, p, eps, dump, emit, json_path);
    return run_verify_cmd(tol);
  } catch (const petz::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::ConfigError:
      case ErrorKind::OutOfRange:
      case ErrorKind::BadAxis:
      case ErrorKind::IoError:
        return kExitConfig;
      default:
        return kExitVerifyFailed;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
}
