#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vacns/driver.hpp"
#include "vacns/io.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw vacns::ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrangian solver and estimate auditor for spherically "
               "symmetric viscous flow around a solid core with a vacuum "
               "free boundary"};
  std::string config_path;
  std::string mode_name = "run";
  std::string out_dir = ".";
  bool quiet = false;
  bool print_template = false;
  app.add_option("--config", config_path, "Path to the INI configuration");
  app.add_option("--mode", mode_name, "run | converge | perturb | audit")
      ->capture_default_str();
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_flag("--quiet", quiet, "Suppress progress output");
  app.add_flag("--template", print_template,
               "Print the documented configuration template and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? vacns::kExitOk : vacns::kExitUsage;
  }

  if (print_template) {
    std::cout << vacns::config_template();
    return vacns::kExitOk;
  }

  try {
    const vacns::RunMode mode = vacns::run_mode_from_string(mode_name);
    const std::string text = config_path.empty() ? "" : read_file(config_path);
    const vacns::RunSpec spec = vacns::parse_config(text, mode, out_dir, quiet);
    return vacns::dispatch(spec);
  } catch (const vacns::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return vacns::kExitUsage;
  } catch (const vacns::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return vacns::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return vacns::kExitUsage;
  }
}
