#include <iostream>

#include <CLI11.hpp>

#include "plab/harness.hpp"

namespace {

int execute(const plab::harness::ExperimentSpec& spec, const plab::harness::RunOverrides& ov) {
  const auto result = plab::harness::run_experiment(spec, ov);
  for (const auto& w : result.summary["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
  for (const auto& c : result.summary["certificates"])
    std::cout << c["theorem"].get<std::string>() << " run " << c["run"].get<std::size_t>() << " ("
              << c["algorithm"].get<std::string>() << "): " << c["verdict"].get<std::string>() << "\n";
  if (!result.summary["chain"].is_null())
    std::cout << "chain: " << (result.summary["chain"].get<bool>() ? "pass" : "fail") << "\n";
  std::cout << "results in " << result.output_dir.string() << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-certification laboratory for first-order methods"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string demo_name;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t trials = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Override solver and cloud seeds");
    sub->add_option("--trials", trials, "Override trial counts of stochastic solvers")
        ->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Run an experiment spec (JSON)");
  run->add_option("spec", spec_path, "Path to the spec")->required();
  add_common(run);
  auto* demo = app.add_subcommand("demo", "Run a built-in demo");
  demo->add_option("name", demo_name, "Demo name (see list)")->required();
  add_common(demo);
  auto* list = app.add_subcommand("list", "List built-in demos");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    for (const auto& name : plab::harness::list_demos()) std::cout << name << "\n";
    return 0;
  }

  plab::harness::RunOverrides ov;
  auto* active = run->parsed() ? run : demo;
  if (active->count("--out")) ov.out = out_dir;
  if (active->count("--seed")) ov.seed = seed;
  if (active->count("--trials")) ov.trials = trials;

  try {
    const auto spec = run->parsed() ? plab::harness::load_spec(spec_path)
                                    : plab::harness::parse_spec(plab::harness::demo_spec(demo_name));
    return execute(spec, ov);
  } catch (const plab::harness::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
