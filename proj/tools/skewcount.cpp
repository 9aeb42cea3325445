// skewcount command line: count, orbits, verify, series, repelling, selftest.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skewcount/skewcount.h"

namespace {

// Used by selftest when no config is given: two copies of z^2.
const char* kReferenceConfig = R"({"maps": [{"num": [0, 0, 1]}, {"num": [0, 0, 1]}], "selftest_n": 4})";

int report_failure(skc_status status) {
  std::cerr << skc_last_error() << "\n";
  return status == SKC_INTERNAL_ERROR || status == SKC_BUFFER_TOO_SMALL ? 3 : static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic orbit counting for skew products of rational semigroups"};
  app.set_version_flag("--version", std::string(skc_version()));
  app.require_subcommand(1, 1);

  std::string config_path;
  std::vector<std::string> sets;
  int threads = 0;
  std::string out_dir;
  bool quiet = false;

  const std::vector<std::pair<const char*, const char*>> commands{
      {"count", "Build the E, D, C table up to n_max"},
      {"orbits", "List closed orbits of length orbits_n"},
      {"verify", "Check the comparability claims; exit 1 if any fails"},
      {"series", "Evaluate the Mertens, Meissel, Dirichlet and rho sums"},
      {"repelling", "Repelling periodic point census for a single map"},
      {"selftest", "Closed formula against enumeration plus numeric checks"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    auto* cfg = sub->add_option("-c,--config", config_path, "JSON experiment file");
    if (std::string(name) != "selftest") cfg->required();
    sub->add_option("-s,--set", sets, "Override a key: key.path=value (repeatable)");
    sub->add_option("-t,--threads", threads, "Worker threads (does not change outputs)")->check(CLI::PositiveNumber);
    sub->add_option("-o,--out", out_dir, "Output directory (default: output.directory)");
    sub->add_flag("-q,--quiet", quiet, "Do not print the summary");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  skc_config* config = nullptr;
  skc_status status = config_path.empty() ? skc_config_parse(kReferenceConfig, &config)
                                          : skc_config_load(config_path.c_str(), &config);
  if (status != SKC_OK) return report_failure(status);
  if (threads > 0) sets.push_back("threads=" + std::to_string(threads));
  if (!out_dir.empty()) sets.push_back("output.directory=\"" + out_dir + "\"");
  for (const auto& s : sets) {
    status = skc_config_set(config, s.c_str());
    if (status != SKC_OK) {
      skc_config_free(config);
      return report_failure(status);
    }
  }
  for (size_t i = 0; i < skc_config_warning_count(config); ++i)
    std::cerr << "warning: " << skc_config_warning(config, i) << "\n";

  skc_result* result = nullptr;
  status = skc_run(config, subcommand.c_str(), &result);
  if (status != SKC_OK) {
    skc_config_free(config);
    return report_failure(status);
  }
  const std::string directory = skc_config_output_directory(config);
  skc_config_free(config);

  if (!quiet) std::cout << skc_result_summary(result);
  if (skc_result_file_count(result) > 0) {
    status = skc_result_write(result, directory.c_str());
    if (status != SKC_OK) {
      skc_result_free(result);
      return report_failure(status);
    }
    if (!quiet) std::cout << "wrote " << skc_result_file_count(result) << " files to " << directory << "\n";
  }
  const int code = skc_result_exit_code(result);
  skc_result_free(result);
  return code;
}
