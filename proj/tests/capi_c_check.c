/* Compiled as C: the public header must stay valid C. */
#include <stdio.h>
#include <string.h>

#include "skewcount/skewcount.h"

int main(void) {
  skc_config* config = NULL;
  skc_result* result = NULL;
  const int degrees[2] = {2, 2};
  char buf[32];
  size_t needed = 0;
  int failures = 0;

  if (skc_config_parse("{\"maps\": [{\"num\": [0, 0, 1]}], \"selftest_n\": 3}", &config) != SKC_OK) return 1;
  if (skc_run(config, "selftest", &result) != SKC_OK) return 1;
  if (skc_result_exit_code(result) != 0) ++failures;
  skc_result_free(result);
  skc_config_free(config);

  if (skc_periodic_count(degrees, 2, 3, buf, sizeof buf, &needed) != SKC_OK || strcmp(buf, "72") != 0) ++failures;
  if (skc_config_parse("{", &config) != SKC_CONFIG_ERROR || strlen(skc_last_error()) == 0) ++failures;
  if (failures) fprintf(stderr, "%d checks failed\n", failures);
  return failures ? 1 : 0;
}
