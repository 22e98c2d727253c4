#include "rwc/counting.hpp"
#include "rwc/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"rwcone: random walks killed at the boundary of a cone"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
  std::string config_path, out_path, format = "json";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
  run_cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
  run_cmd->add_option("--seed", seed, "override the config seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run_cmd->add_option("--workers", workers, "worker threads (results are worker-invariant)");
  run_cmd->add_option("--out", out_path, "write the report here instead of stdout");
  run_cmd->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  // count
  auto* count_cmd = app.add_subcommand("count", "exact cone-confined path counts");
  std::string steps_path, cone_spec;
  std::vector<int> from_pt, to_pt;
  int n_max = 0;
  count_cmd->add_option("--steps", steps_path, "step multiset file")->required();
  count_cmd->add_option("--cone", cone_spec, "cone spec string")->required();
  count_cmd->add_option("--from", from_pt, "start point")->required();
  count_cmd->add_option("--to", to_pt, "end point")->required();
  count_cmd->add_option("--n", n_max, "horizon")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run_cmd)) {
      rwc::ExperimentConfig config = rwc::load_config(config_path);
      if (seed_set) config.seed = seed;
      if (workers > 0) config.workers = workers;
      if (!out_path.empty()) config.out_path = out_path;
      rwc::ExperimentReport report = rwc::run(config);
      std::string text = rwc::emit(report, format);
      if (!config.out_path.empty()) {
        std::ofstream out(config.out_path);
        if (!out) throw rwc::IoFailure("cannot open output file: " + config.out_path);
        out << text;
      } else {
        std::cout << text;
      }
      return report.all_pass() ? 0 : 1;
    }
    if (app.got_subcommand(count_cmd)) {
      std::vector<rwc::IVec> steps = rwc::parse_step_multiset(steps_path);
      rwc::Cone cone = rwc::parse_cone(cone_spec);
      auto to_ivec = [](const std::vector<int>& v) {
        rwc::IVec out(static_cast<int>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<int>(i)) = v[i];
        return out;
      };
      auto counts = rwc::count_paths_profile(steps, cone, to_ivec(from_pt), to_ivec(to_pt), n_max);
      for (std::size_t n = 0; n < counts.size(); ++n)
        std::cout << n << " " << counts[n].get_str() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
