// xxzchain: phase scans, concurrence curves and channel sizing for open
// Heisenberg XXZ / XX chains.
//
//   xxzchain phase-scan --config scan.json [--out rows.csv] [--format csv|jsonl]
//   xxzchain curve      --config curve.json
//   xxzchain channel    --config channel.json
//   xxzchain design     --config design.json | --n 20 --target 0.99
//   xxzchain table1     [--config table1.json] [--format text|csv|jsonl]
//
// Exit codes: 0 success, 2 config error, 3 resource cap exceeded, 4 numeric failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "xxz/xxz.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitNumeric = 4;

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw xxz::ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw xxz::ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

xxz::SweepOptions sweep_options(const json& cfg) {
  xxz::SweepOptions opt;
  if (cfg.contains("limits")) {
    const auto& l = cfg["limits"];
    opt.limits.full_space_sites = l.value("full_space_sites", opt.limits.full_space_sites);
    opt.limits.sector_dimension = l.value("sector_dimension", opt.limits.sector_dimension);
    opt.limits.grid_points = l.value("grid_points", opt.limits.grid_points);
  }
  opt.threads = cfg.value("threads", 0u);
  return opt;
}

xxz::PhaseScanConfig phase_config(const json& cfg) {
  if (!cfg.contains("chain")) throw xxz::ConfigError("config needs a 'chain' object");
  if (!cfg.contains("grid")) throw xxz::ConfigError("config needs a 'grid' object");
  xxz::PhaseScanConfig pc;
  pc.chain = cfg.at("chain").get<xxz::ChainSpec>();
  pc.grid = xxz::ScanGrid::from_json(cfg.at("grid"));
  for (const auto& a : pc.grid.axes()) {
    if (a.name != "B" && a.name != "delta") {
      throw xxz::ConfigError("unknown grid axis '" + a.name + "' (expected B, delta)");
    }
  }
  if (cfg.contains("pair")) {
    const auto pair = cfg.at("pair").get<std::vector<int>>();
    if (pair.size() != 2) throw xxz::ConfigError("'pair' must hold two site indices");
    pc.pair_i = pair[0];
    pc.pair_j = pair[1];
  }
  return pc;
}

std::vector<double> beta_values(const json& cfg) {
  if (cfg.contains("grid")) {
    const auto grid = xxz::ScanGrid::from_json(cfg.at("grid"));
    if (const auto* a = grid.find("beta")) return a->values;
    throw xxz::ConfigError("channel grid needs a 'beta' axis");
  }
  // default: B/J in [0, 10]
  return xxz::Axis::range("beta", 0.0, 20.0, 0.1).values;
}

struct Output {
  std::string path;
  std::string format = "csv";

  template <typename Writer>
  void write(Writer&& writer) const {
    if (path.empty() || path == "-") {
      writer(std::cout);
      return;
    }
    std::ofstream file(path);
    if (!file) throw xxz::ConfigError("cannot open output file '" + path + "'");
    writer(file);
  }

  void emit(const xxz::Table& t) const {
    write([&](std::ostream& os) {
      if (format == "jsonl") xxz::write_jsonl(t, os);
      else xxz::write_csv(t, os);
    });
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact diagonalization and boundary entanglement of open XXZ chains"};
  app.require_subcommand(1);

  std::string config_path;
  Output out;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "JSON config (ChainSpec + ScanGrid)");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out.path, "output path (default: standard output)");
  };

  auto* phase = app.add_subcommand("phase-scan", "ground-state sector map over (delta, B)");
  add_common(phase, true);
  phase->add_option("--format", out.format)->check(CLI::IsMember({"csv", "jsonl"}));

  auto* curve = app.add_subcommand("curve", "pair concurrence of the ground state along B for several delta");
  add_common(curve, true);
  curve->add_option("--format", out.format)->check(CLI::IsMember({"csv", "jsonl"}));

  auto* channel = app.add_subcommand("channel", "boundary concurrence of the bulk-field channel vs beta");
  add_common(channel, true);
  channel->add_option("--format", out.format)->check(CLI::IsMember({"csv", "jsonl"}));

  int design_n = 0;
  double design_target = 0.0;
  auto* design = app.add_subcommand("design", "smallest bulk field reaching a target C_1N");
  add_common(design, false);
  design->add_option("--format", out.format)->check(CLI::IsMember({"csv", "jsonl"}));
  design->add_option("--n", design_n, "even chain length (overrides config)");
  design->add_option("--target", design_target, "target concurrence (overrides config)");

  auto* t1 = app.add_subcommand("table1", "four-site ground-state regimes beside the published table");
  add_common(t1, false);
  out.format = "csv";
  std::string t1_format = "text";
  t1->add_option("--format", t1_format)->check(CLI::IsMember({"text", "csv", "jsonl"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    const json cfg = load_config(config_path);
    const auto opt = sweep_options(cfg);

    if (phase->parsed()) {
      out.emit(xxz::phase_table(xxz::phase_scan(phase_config(cfg), opt)));
    } else if (curve->parsed()) {
      const auto pc = phase_config(cfg);
      const int pj = pc.pair_j < 0 ? pc.chain.n_sites : pc.pair_j;
      out.emit(xxz::curve_table(xxz::concurrence_curve(pc, opt), pc.pair_i, pj));
    } else if (channel->parsed()) {
      if (!cfg.contains("n_sites")) throw xxz::ConfigError("channel config needs 'n_sites'");
      const auto ns = cfg.at("n_sites").is_array() ? cfg.at("n_sites").get<std::vector<int>>()
                                                   : std::vector<int>{cfg.at("n_sites").get<int>()};
      out.emit(xxz::channel_table(xxz::channel_curve(ns, beta_values(cfg), cfg.value("coupling", 1.0), opt)));
    } else if (design->parsed()) {
      const int n = design_n ? design_n : cfg.value("n_sites", 0);
      const double target = design_target > 0.0 ? design_target : cfg.value("target", 0.0);
      if (n == 0) throw xxz::ConfigError("design needs --n or 'n_sites'");
      out.emit(xxz::design_table(xxz::design_for_target(n, target, cfg.value("coupling", 1.0))));
    } else if (t1->parsed()) {
      const auto deltas = cfg.value("deltas", std::vector<double>{0.0, 0.5, 1.0, 2.0});
      const auto entries = xxz::table1(deltas, cfg.value("crossing_tol", 1e-9));
      if (t1_format == "text") {
        out.write([&](std::ostream& os) { xxz::write_table1_text(entries, os); });
      } else {
        out.format = t1_format;
        out.emit(xxz::table1_table(entries));
      }
    }
  } catch (const xxz::ResourceError& e) {
    std::cerr << "resource cap exceeded: " << e.what() << '\n';
    return kExitResource;
  } catch (const xxz::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const xxz::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
