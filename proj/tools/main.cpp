#include <cstdio>
#include <exception>

#include "cli_common.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spdt: build, fit, simulate and protect dynamic contact networks\n"
               "with direct and delayed-indirect transmission links"};
  app.set_version_flag("--version", spdt::kToolVersion);
  app.set_config("--config", "", "read options from a sectioned key=value file");
  app.require_subcommand(1);

  cli::register_ingest(app);
  cli::register_generate(app);
  cli::register_fit(app);
  cli::register_simulate(app);
  cli::register_metrics(app);
  cli::register_vaccinate(app);
  cli::register_pipeline(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Error& e) {
    return app.exit(e);  // usage errors print help; RuntimeError is silent
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
