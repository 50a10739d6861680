#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  std::vector<std::string> sets;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic delayed two-prey/one-predator simulator"};
  app.require_subcommand(0, 1);
  bool list_presets = false;
  app.add_flag("--list-presets", list_presets, "Print the shipped presets and exit");

  Options opts;
  std::vector<std::pair<sdpp::cli::Command, CLI::App*>> subcommands;
  const std::pair<const char*, const char*> names[] = {
      {"simulate", "Write one trajectory as CSV"},
      {"ensemble", "Run replicates, write band statistics and a verification summary"},
      {"classify", "Print the regime classification and threshold trace"},
      {"convergence", "Compare the noise-free engine against the reference solver"},
      {"sweep", "Repeat simulate or ensemble over the values of one key"},
  };
  CLI::Option* seed_options[5] = {};
  int i = 0;
  for (const auto& [name, help] : names) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config_path, "key = value configuration file");
    seed_options[i++] = sub->add_option("--seed", opts.seed, "Base seed (overrides the config)");
    sub->add_option("--out", opts.out_path, "Output path ('-' for stdout; prefix for sweep)");
    sub->add_option("--set", opts.sets, "Extra key=value assignment, applied last (repeatable)");
    subcommands.emplace_back(*sdpp::cli::parse_command(name), sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sdpp::cli::kExitUsage;
  }

  if (list_presets) {
    for (const auto& name : sdpp::cli::preset_names()) std::cout << name << "\n";
    return sdpp::cli::kExitOk;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << "A subcommand is required\n" << app.help();
    return sdpp::cli::kExitUsage;
  }

  std::string text;
  try {
    if (!opts.config_path.empty()) text = read_text(opts.config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return sdpp::cli::kExitUsage;
  }
  if (!text.empty() && text.back() != '\n') text += '\n';
  for (const auto& assignment : opts.sets) text += assignment + "\n";
  for (auto* seed_option : seed_options) {
    if (seed_option && seed_option->count() > 0) text += "seed = " + std::to_string(opts.seed) + "\n";
  }
  if (!opts.out_path.empty()) text += "output = " + opts.out_path + "\n";

  sdpp::cli::RunConfig config;
  try {
    config = sdpp::cli::parse_config(text);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return sdpp::cli::kExitUsage;
  }

  for (const auto& [command, sub] : subcommands) {
    if (sub->parsed()) return sdpp::cli::run_subcommand(command, config, std::cout, std::cerr);
  }
  return sdpp::cli::kExitUsage;
}
