// Command-line front end: run experiments, validate configs, check the solver against the oracle.

#include <rd2d/io.hpp>
#include <rd2d/rd2d.hpp>
#include <rd2d/report.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

enum exit_code { ok = 0, failure = 1, bad_config = 2, bad_io = 3, check_failed = 4 };

// A manifest written by `run` carries the config text it was produced from.
rd2d::kv_config load_config(const std::string& path)
{
  if (std::filesystem::path(path).extension() == ".json") {
    rd2d::json m;
    try {
      m = rd2d::json::parse(rd2d::read_text(path));
    } catch (const rd2d::json::exception& ex) {
      throw rd2d::config_error("manifest '" + path + "': " + ex.what());
    }
    if (!m.contains("config") || !m["config"].is_string())
      throw rd2d::config_error("manifest '" + path + "' has no config text");
    return rd2d::kv_config::parse_string(m["config"].get<std::string>());
  }
  return rd2d::kv_config::load(path);
}

void apply_overrides(rd2d::kv_config& cfg, std::optional<int> seeds, std::optional<int> threads)
{
  if (seeds)
    cfg.set("seeds", std::to_string(*seeds));
  if (threads)
    cfg.set("threads", std::to_string(*threads));
}

int cmd_run(const std::string& path, std::optional<int> seeds, std::optional<int> threads, const std::string& out_dir)
{
  auto cfg = load_config(path);
  apply_overrides(cfg, seeds, threads);
  const auto e = rd2d::experiment_from_config(cfg);
  const auto out = rd2d::build_outputs(e, cfg);
  rd2d::write_outputs(out, out_dir);
  std::cout << "wrote " << out.files.size() << " CSV files and manifest.json to " << out_dir << '\n';
  std::cout << "config_hash " << out.manifest["config_hash"].get<std::string>() << '\n';
  return ok;
}

int cmd_validate(const std::string& path, std::optional<int> seeds)
{
  auto cfg = load_config(path);
  apply_overrides(cfg, seeds, std::nullopt);
  const auto e = rd2d::experiment_from_config(cfg);
  std::size_t bad = 0;
  for (int k = 0; k < e.seeds; ++k) {
    const auto seed = e.seed_base + static_cast<std::uint64_t>(k);
    const auto s = rd2d::generate_scenario(e.params, e.n_cues, e.n_d2d_pairs, seed);
    for (const auto& v : rd2d::validate_scenario(s, e.params)) {
      std::cout << "seed " << seed << " ue " << v.ue << ": " << v.what << '\n';
      ++bad;
    }
  }
  std::cout << "config ok; " << e.seeds << " scenarios generated, " << bad << " violations\n";
  return bad ? check_failed : ok;
}

int cmd_oracle(const std::string& path, std::optional<int> threads, const std::string& out_dir)
{
  auto cfg = load_config(path);
  apply_overrides(cfg, std::nullopt, threads);
  const auto e = rd2d::experiment_from_config(cfg);
  const auto recs = rd2d::oracle_study(e);
  rd2d::csv_table t({"instance", "n_ues", "n_rbs", "converged", "iterations", "mp_objective_bps", "mp_qos_ok",
                     "oracle_objective_bps", "oracle_qos_feasible", "best_effort_objective_bps", "dominance_ok",
                     "exact"});
  for (const auto& r : recs)
    t.row().add(r.instance).add(r.n_ues).add(r.n_rbs).add(static_cast<int>(r.converged)).add(r.iterations)
      .add(r.mp_objective).add(static_cast<int>(r.mp_qos_ok)).add(r.oracle_objective)
      .add(static_cast<int>(r.oracle_qos_feasible)).add(r.best_effort_objective).add(static_cast<int>(r.dominance_ok))
      .add(static_cast<int>(r.exact));
  rd2d::write_text(std::filesystem::path(out_dir) / "oracle_check.csv", t.str());
  const auto s = rd2d::summarize(recs);
  std::cout << "instances " << s.instances << ", converged " << s.converged << ", exact among converged "
            << s.exact_converged << " (" << s.exact_fraction() * 100 << "%), dominance holds in " << s.dominance_ok
            << "/" << s.instances << '\n';
  return s.dominance_ok == s.instances ? ok : check_failed;
}

int cmd_dump(const std::string& path, std::uint64_t seed, const std::string& out_dir)
{
  const auto cfg = load_config(path);
  const auto e = rd2d::experiment_from_config(cfg);
  const auto s = rd2d::generate_scenario(e.params, e.n_cues, e.n_d2d_pairs, seed);
  const auto ch = rd2d::draw_channel(s, e.params, seed);
  const std::filesystem::path dir(out_dir);
  rd2d::write_text(dir / ("scenario_" + std::to_string(seed) + ".json"), rd2d::scenario_to_json(s).dump(2) + "\n");
  rd2d::write_text(dir / ("channel_" + std::to_string(seed) + ".json"), rd2d::channel_to_json(ch).dump() + "\n");
  std::cout << "wrote scenario and channel for seed " << seed << " to " << out_dir << '\n';
  return ok;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Relay-aided D2D resource allocation simulator"};
  app.require_subcommand(1);

  std::string config;
  std::optional<int> seeds, threads;
  std::string out_dir = "out";
  std::uint64_t dump_seed = 1;

  auto* run = app.add_subcommand("run", "Run the experiment suite and write one CSV per figure plus a manifest");
  run->add_option("config", config, "key=value config file or a manifest.json")->required();
  run->add_option("--seeds", seeds, "Seeds per grid point (overrides config)")->check(CLI::PositiveNumber);
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out-dir", out_dir, "Output directory");

  auto* validate = app.add_subcommand("validate", "Parse a config and check generated scenarios");
  validate->add_option("config", config, "key=value config file")->required();
  validate->add_option("--seeds", seeds, "Scenarios to generate")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle-check", "Compare the message-passing solver with exhaustive search");
  oracle->add_option("config", config, "key=value config file")->required();
  oracle->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  oracle->add_option("--out-dir", out_dir, "Output directory");

  auto* dump = app.add_subcommand("dump", "Write one scenario and its channel realization as JSON");
  dump->add_option("config", config, "key=value config file")->required();
  dump->add_option("--seed", dump_seed, "Snapshot seed");
  dump->add_option("--out-dir", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : bad_config;
  }

  try {
    if (*run)
      return cmd_run(config, seeds, threads, out_dir);
    if (*validate)
      return cmd_validate(config, seeds);
    if (*oracle)
      return cmd_oracle(config, threads, out_dir);
    if (*dump)
      return cmd_dump(config, dump_seed, out_dir);
  } catch (const rd2d::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return bad_config;
  } catch (const rd2d::scenario_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return bad_config;
  } catch (const rd2d::io_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return bad_io;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return bad_io;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failure;
  }
  return ok;
}
