#include "suregp/commands.hpp"
#include "suregp/config.hpp"
#include "suregp/error.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Drift estimation for Gaussian processes by SURE-minimizing shrinkage"};
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> command;
  app.add_option("--config", config_file, "Key-value config file with [sections]");
  app.add_option("--seed", seed, "Seed override (else SURE_SEED, else the config)");
  app.add_option("--out", out_dir, "Output directory override (else SURE_OUT, else the config)");
  app.add_option("--command", command, "simulate | sweep | optimize | denoise | validate");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto entries = config_file.empty() ? suregp::ConfigEntries{} : suregp::read_config_file(config_file);
    const auto cfg = suregp::resolve_config(entries, suregp::with_environment({seed, out_dir, command}));
    const auto result = suregp::run_command(cfg);
    std::cout << result.summary;
    if (!result.summary.empty() && result.summary.back() != '\n') std::cout << '\n';
    for (const auto& f : result.files) std::cout << "wrote " << f << '\n';
    return result.exit_code;
  } catch (const suregp::IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n%s", e.what(), app.help().c_str());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n%s", e.what(), app.help().c_str());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}
