#include <cstring>
#include <string>

#include "doctest.h"
#include "skewcount/skewcount.h"

namespace {

const char* kTwin = R"({"maps": [{"num": [0, 0, 1]}, {"num": [0, 0, 1]}]})";

}  // namespace

TEST_CASE("config handle lifecycle") {
  skc_config* c = nullptr;
  REQUIRE(skc_config_parse(kTwin, &c) == SKC_OK);
  char digest[17];
  CHECK(skc_config_digest(c, digest, sizeof digest) == SKC_OK);
  CHECK(std::strlen(digest) == 16);
  char small[4];
  CHECK(skc_config_digest(c, small, sizeof small) == SKC_BUFFER_TOO_SMALL);
  CHECK(skc_config_set(c, "threads=3") == SKC_OK);
  char again[17];
  skc_config_digest(c, again, sizeof again);
  CHECK(std::string(digest) == again);
  CHECK(std::string(skc_config_output_directory(c)) == "out");
  CHECK(skc_config_warning_count(c) == 0);
  CHECK(std::string(skc_config_warning(c, 5)).empty());
  skc_config_free(c);
  skc_config_free(nullptr);
}

TEST_CASE("errors carry a JSON record") {
  skc_config* c = nullptr;
  CHECK(skc_config_parse(R"({"maps": []})", &c) == SKC_CONFIG_ERROR);
  CHECK(c == nullptr);
  const std::string err = skc_last_error();
  CHECK(err.find("\"exit_code\":2") != std::string::npos);
  CHECK(skc_config_parse(nullptr, &c) == SKC_CONFIG_ERROR);
  CHECK(skc_config_load("/nonexistent/file.json", &c) == SKC_CONFIG_ERROR);

  REQUIRE(skc_config_parse(kTwin, &c) == SKC_OK);
  CHECK(std::string(skc_last_error()).empty());
  // a failed override leaves the previous state in place
  CHECK(skc_config_set(c, "n_max=\"x\"") == SKC_CONFIG_ERROR);
  CHECK(skc_config_set(c, "n_max=5") == SKC_OK);
  skc_result* r = nullptr;
  CHECK(skc_run(c, "nonsense", &r) == SKC_CONFIG_ERROR);
  CHECK(r == nullptr);
  skc_config_free(c);
}

TEST_CASE("run and inspect a result") {
  skc_config* c = nullptr;
  REQUIRE(skc_config_parse(kTwin, &c) == SKC_OK);
  REQUIRE(skc_config_set(c, "n_max=4") == SKC_OK);
  skc_result* r = nullptr;
  REQUIRE(skc_run(c, "count", &r) == SKC_OK);
  CHECK(skc_result_exit_code(r) == 0);
  REQUIRE(skc_result_file_count(r) == 2);
  CHECK(std::string(skc_result_file_name(r, 0)) == "table.csv");
  CHECK(std::string(skc_result_file_content(r, 0)).find("4,272,252,63,exact") != std::string::npos);
  CHECK(std::string(skc_result_file_name(r, 9)).empty());
  CHECK(std::string(skc_result_summary(r)).size() > 0);
  skc_result_free(r);
  skc_config_free(c);
}

TEST_CASE("tables") {
  skc_config* c = nullptr;
  REQUIRE(skc_config_parse(kTwin, &c) == SKC_OK);
  skc_table* t = nullptr;
  CHECK(skc_table_build(c, 0, &t) == SKC_CONFIG_ERROR);
  REQUIRE(skc_table_build(c, 100, &t) == SKC_OK);
  CHECK(skc_table_n_max(t) == 100);
  size_t needed = 0;
  CHECK(skc_table_text(t, 'E', 100, nullptr, 0, &needed) == SKC_BUFFER_TOO_SMALL);
  std::string buf(needed, '\0');
  CHECK(skc_table_text(t, 'E', 100, buf.data(), buf.size(), &needed) == SKC_OK);
  // 4^100 + 2^100
  CHECK(std::string(buf.c_str()) == "1606938044258990275541962092342430253122431223184289538506752");
  double v = 0;
  CHECK(skc_table_value(t, 'C', 3, &v) == SKC_OK);
  CHECK(v == 22.0);
  CHECK(skc_table_value(t, 'Q', 3, &v) == SKC_CONFIG_ERROR);
  CHECK(skc_table_value(t, 'E', 101, &v) != SKC_OK);
  skc_table_free(t);
  skc_config_free(c);
}

TEST_CASE("utilities") {
  int mu = 9;
  CHECK(skc_mobius(30, &mu) == SKC_OK);
  CHECK(mu == -1);
  CHECK(skc_mobius(0, &mu) == SKC_CONFIG_ERROR);
  const int degrees[] = {2, 3};
  char buf[64];
  size_t needed = 0;
  CHECK(skc_periodic_count(degrees, 2, 4, buf, sizeof buf, &needed) == SKC_OK);
  CHECK(std::string(buf) == "641");
  CHECK(needed == 4);
  CHECK(skc_periodic_count(degrees, 0, 4, buf, sizeof buf, &needed) == SKC_CONFIG_ERROR);
  CHECK(std::string(skc_version()).size() > 0);
}
