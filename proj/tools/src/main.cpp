#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "fountain/errors.hpp"

using namespace fountain;

namespace {

nlohmann::json read_document(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fountain-theorem critical point pipeline"};
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::vector<std::string> overrides;
  app.add_option("command", command, "geometry | solve | degree-demo | deform-check")
      ->required()
      ->check(CLI::IsMember({"geometry", "solve", "degree-demo", "deform-check"}));
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--set", overrides, "override a config key, e.g. --set minimax.mesh_n=1024");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const cli::Command cmd = cli::parse_command(command);
    nlohmann::json doc = nlohmann::json::object();
    if (!config_path.empty()) {
      doc = read_document(config_path);
    } else if (cmd != cli::Command::degree_demo) {
      throw ConfigError("--config is required for " + command);
    }
    for (const std::string& o : overrides) cli::apply_override(doc, o);
    if (seed) doc["seed"] = *seed;
    if (out_dir) doc["output_dir"] = *out_dir;
    const cli::RunConfig cfg = cli::load_config(doc, cmd);

    cli::Emitter out;
    int code = 0;
    switch (cmd) {
      case cli::Command::geometry: code = cli::run_geometry(cfg, out, std::cout); break;
      case cli::Command::solve: code = cli::run_solve(cfg, out, std::cout); break;
      case cli::Command::degree_demo: code = cli::run_degree_demo(cfg, out, std::cout); break;
      case cli::Command::deform_check: code = cli::run_deform_check(cfg, out, std::cout); break;
    }
    for (const auto& p : out.flush(cfg.output_dir)) std::cerr << "wrote " << p.string() << "\n";
    return code;
  } catch (const HypothesisViolation& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const LevelOutOfRange& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
