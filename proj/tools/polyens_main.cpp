#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "cli_commands.hpp"

namespace {

nlohmann::json load_config(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  } else {
    std::ifstream in(path);
    if (!in) {
      throw polyens::cli::ConfigError("cannot open config file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw polyens::cli::ConfigError("config is not valid JSON");
  }
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "polyens: characteristic-polynomial averages, Schur expectations and "
      "correlation kernels for polynomial ensembles"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;  // empty = defer to config, then stdout
  std::string format;    // empty = defer to config, then json
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  bool verbose = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path,
                    "JSON configuration file, or - for stdin")
        ->required();
    sub->add_option("--out", out_path, "output path (- for stdout)");
    sub->add_option("--format", format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed_override, "override numerics.seed")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_flag("-v,--verbose", verbose, "progress notes on stderr");
  };

  for (const char* name :
       {"zcheck", "giambelli", "ratio", "kernel", "oracle"}) {
    add_common(app.add_subcommand(name));
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    nlohmann::json config = load_config(config_path);
    if (seed_set) {
      config["numerics"]["seed"] = seed_override;
    }
    return polyens::cli::run_command(command, config, out_path, format,
                                     verbose);
  } catch (const polyens::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return polyens::cli::kConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return polyens::cli::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
