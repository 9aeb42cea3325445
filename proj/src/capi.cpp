#include "skewcount/skewcount.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "skewcount/experiment.hpp"
#include "skewcount/numtheory.hpp"

struct skc_config {
  std::string text;
  std::vector<std::string> overrides;
  skewcount::ExperimentConfig parsed;
};

struct skc_table {
  skewcount::CountTable table;
};

struct skc_result {
  skewcount::RunResult run;
};

namespace {

thread_local std::string last_error;

skc_status record(skewcount::ErrorKind kind, const std::string& message) {
  last_error = skewcount::error_record(kind, message);
  return static_cast<skc_status>(skewcount::exit_code_for(kind));
}

template <class F>
skc_status guarded(F&& body) {
  last_error.clear();
  try {
    return body();
  } catch (const skewcount::Error& e) {
    return record(e.kind(), e.what());
  } catch (const std::bad_alloc&) {
    last_error = skewcount::error_record(skewcount::ErrorKind::Inconsistent, "allocation failed");
    return SKC_NUMERICAL_ERROR;
  } catch (const std::exception& e) {
    last_error = skewcount::error_record(skewcount::ErrorKind::Inconsistent, std::string("internal: ") + e.what());
    return SKC_INTERNAL_ERROR;
  }
}

skc_status invalid(const char* what) { return record(skewcount::ErrorKind::InvalidArgument, what); }

skc_status copy_text(const std::string& s, char* buffer, size_t size, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buffer || size < s.size() + 1) return SKC_BUFFER_TOO_SMALL;
  std::memcpy(buffer, s.c_str(), s.size() + 1);
  return SKC_OK;
}

}  // namespace

extern "C" {

const char* skc_version(void) { return SKEWCOUNT_VERSION; }

const char* skc_last_error(void) { return last_error.c_str(); }

skc_status skc_config_parse(const char* json_text, skc_config** out) {
  if (!json_text || !out) return invalid("skc_config_parse: null argument");
  return guarded([&] {
    auto c = std::make_unique<skc_config>();
    c->text = json_text;
    c->parsed = skewcount::parse_config(c->text);
    *out = c.release();
    return SKC_OK;
  });
}

skc_status skc_config_load(const char* path, skc_config** out) {
  if (!path || !out) return invalid("skc_config_load: null argument");
  std::ifstream in(path, std::ios::binary);
  if (!in) return record(skewcount::ErrorKind::Config, std::string("cannot read config ") + path);
  std::ostringstream text;
  text << in.rdbuf();
  return skc_config_parse(text.str().c_str(), out);
}

skc_status skc_config_set(skc_config* config, const char* assignment) {
  if (!config || !assignment) return invalid("skc_config_set: null argument");
  return guarded([&] {
    auto overrides = config->overrides;
    overrides.emplace_back(assignment);
    config->parsed = skewcount::parse_config(config->text, overrides);
    config->overrides = std::move(overrides);
    return SKC_OK;
  });
}

skc_status skc_config_digest(skc_config* config, char* buffer, size_t size) {
  if (!config) return invalid("skc_config_digest: null config");
  return copy_text(config->parsed.digest, buffer, size, nullptr);
}

const char* skc_config_output_directory(skc_config* config) {
  return config ? config->parsed.output_directory.c_str() : "";
}

size_t skc_config_warning_count(skc_config* config) { return config ? config->parsed.warnings.size() : 0; }

const char* skc_config_warning(skc_config* config, size_t index) {
  if (!config || index >= config->parsed.warnings.size()) return "";
  return config->parsed.warnings[index].c_str();
}

void skc_config_free(skc_config* config) { delete config; }

skc_status skc_run(skc_config* config, const char* subcommand, skc_result** out) {
  if (!config || !subcommand || !out) return invalid("skc_run: null argument");
  return guarded([&] {
    auto r = std::make_unique<skc_result>();
    r->run = skewcount::run_experiment(subcommand, config->parsed);
    *out = r.release();
    return SKC_OK;
  });
}

int skc_result_exit_code(const skc_result* result) { return result ? result->run.exit_code : SKC_INTERNAL_ERROR; }

const char* skc_result_summary(const skc_result* result) { return result ? result->run.summary.c_str() : ""; }

size_t skc_result_file_count(const skc_result* result) { return result ? result->run.files.size() : 0; }

const char* skc_result_file_name(const skc_result* result, size_t index) {
  if (!result || index >= result->run.files.size()) return "";
  return result->run.files[index].name.c_str();
}

const char* skc_result_file_content(const skc_result* result, size_t index) {
  if (!result || index >= result->run.files.size()) return "";
  return result->run.files[index].content.c_str();
}

skc_status skc_result_write(const skc_result* result, const char* directory) {
  if (!result || !directory) return invalid("skc_result_write: null argument");
  return guarded([&] {
    skewcount::write_outputs(result->run, directory);
    return SKC_OK;
  });
}

void skc_result_free(skc_result* result) { delete result; }

skc_status skc_table_build(skc_config* config, int n_max, skc_table** out) {
  if (!config || !out) return invalid("skc_table_build: null argument");
  if (n_max < 1) return invalid("skc_table_build: n_max must be >= 1");
  return guarded([&] {
    *out = new skc_table{skewcount::build_table(config->parsed, n_max)};
    return SKC_OK;
  });
}

int skc_table_n_max(const skc_table* table) { return table ? table->table.n_max() : 0; }

skc_status skc_table_text(const skc_table* table, char column, int n, char* buffer, size_t size, size_t* needed) {
  if (!table) return invalid("skc_table_text: null table");
  std::string text;
  const skc_status s = guarded([&] {
    switch (column) {
      case 'E': text = table->table.E_text(n); break;
      case 'D': text = table->table.D_text(n); break;
      case 'C': text = table->table.C_text(n); break;
      default: return invalid("skc_table_text: column must be E, D or C");
    }
    return SKC_OK;
  });
  if (s != SKC_OK) return s;
  return copy_text(text, buffer, size, needed);
}

skc_status skc_table_value(const skc_table* table, char column, int n, double* out) {
  if (!table || !out) return invalid("skc_table_value: null argument");
  return guarded([&] {
    switch (column) {
      case 'E': *out = table->table.E(n); break;
      case 'D': *out = table->table.D(n); break;
      case 'C': *out = table->table.C(n); break;
      default: return invalid("skc_table_value: column must be E, D or C");
    }
    return SKC_OK;
  });
}

void skc_table_free(skc_table* table) { delete table; }

skc_status skc_mobius(int64_t n, int* out) {
  if (!out) return invalid("skc_mobius: null argument");
  return guarded([&] {
    *out = skewcount::mobius(n);
    return SKC_OK;
  });
}

skc_status skc_periodic_count(const int* degrees, size_t count, int n, char* buffer, size_t size, size_t* needed) {
  if (!degrees || count == 0) return invalid("skc_periodic_count: need at least one degree");
  std::string text;
  const skc_status s = guarded([&] {
    skewcount::require(n >= 0, "skc_periodic_count: n must be >= 0");
    text = skewcount::E_exact_zero(n, std::vector<int>(degrees, degrees + count)).str();
    return SKC_OK;
  });
  if (s != SKC_OK) return s;
  return copy_text(text, buffer, size, needed);
}

}  // extern "C"
