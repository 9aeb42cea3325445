#include <string>

#include "doctest.h"
#include "skewcount/experiment.hpp"

using namespace skewcount;

namespace {

const std::string kTwin = R"({"maps": [{"num": [0, 0, 1]}, {"num": [0, 0, 1]}]})";

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

const OutputFile* find(const RunResult& r, const std::string& name) {
  for (const auto& f : r.files)
    if (f.name == name) return &f;
  return nullptr;
}

}  // namespace

TEST_CASE("config defaults and typed fields") {
  const auto c = parse_config(kTwin);
  CHECK(c.maps.size() == 2);
  CHECK(c.maps[0].degree() == 2);
  CHECK(c.potential.kind() == Potential::Kind::Zero);
  CHECK(c.mode == TableMode::Auto);
  CHECK(c.n_max == 12);
  CHECK(c.N_max == 12);
  CHECK(!c.lambda);
  CHECK(c.burn_in == 5.0);
  CHECK(c.band_ceiling == 4.0);
  CHECK(c.skew.period_closure == 1e-7);
  CHECK(c.digest.size() == 16);
  CHECK(c.warnings.empty());
}

TEST_CASE("complex coefficients and denominators") {
  const auto c = parse_config(R"({"maps": [{"num": [[0, 1], 0, 1], "den": [1, [0.5, 0]]}]})");
  CHECK(c.maps[0].numerator().vec()[0] == Complex(0.0, 1.0));
  CHECK(c.maps[0].denominator().degree() == 1);
}

TEST_CASE("overrides") {
  const auto c = parse_config(kTwin, {"n_max=30", "potential.name=\"constant\"", "potential.c=0.25", "series.k_grid=[1,2,3,4,5]",
                                      "output.directory=elsewhere"});
  CHECK(c.n_max == 30);
  CHECK(c.potential.kind() == Potential::Kind::Constant);
  CHECK(c.potential.c() == 0.25);
  CHECK(c.k_grid.size() == 5);
  CHECK(c.output_directory == "elsewhere");
  CHECK(kind_of([] { parse_config(kTwin, {"nonsense"}); }) == ErrorKind::Config);
  CHECK(kind_of([] { parse_config(kTwin, {"n_max.x=3"}); }) == ErrorKind::Config);
}

TEST_CASE("digest ignores threads and output directory only") {
  const auto a = parse_config(kTwin);
  CHECK(parse_config(kTwin, {"threads=8"}).digest == a.digest);
  CHECK(parse_config(kTwin, {"output.directory=\"x\""}).digest == a.digest);
  CHECK(parse_config(kTwin, {"n_max=13"}).digest != a.digest);
  // defaults written out explicitly hash the same
  CHECK(parse_config(kTwin, {"burn_in=5", "mode=\"auto\""}).digest == a.digest);
}

TEST_CASE("configuration errors") {
  CHECK(kind_of([] { parse_config("{"); }) == ErrorKind::Config);
  CHECK(kind_of([] { parse_config(R"({"maps": []})"); }) == ErrorKind::Config);
  CHECK(kind_of([] { parse_config(R"({"maps": [{"num": [0, 1]}], "mystery": 1})"); }) == ErrorKind::Config);
  CHECK(kind_of([] { parse_config(kTwin, {"mode=\"exact\"", "potential.name=\"constant\""}); }) == ErrorKind::Config);
  CHECK(kind_of([] { parse_config(kTwin, {"potential={\"name\":\"symbol_weight\",\"beta\":[1]}"}); }) ==
        ErrorKind::Config);
  CHECK(kind_of([] { parse_config(kTwin, {"series.z_grid=[[1,0]]"}); }) == ErrorKind::Config);
  CHECK(kind_of([] { parse_config(kTwin, {"n_max=\"ten\""}); }) == ErrorKind::Config);
  // z/z shares a root between numerator and denominator
  CHECK(kind_of([] { parse_config(R"({"maps": [{"num": [0, 1], "den": [0, 1]}]})"); }) == ErrorKind::Config);
  const auto low = parse_config(R"({"maps": [{"num": [1, 2]}]})");
  CHECK(low.warnings.size() == 1);
}

TEST_CASE("table pipeline choice") {
  CHECK(build_table(parse_config(kTwin), 5).mode() == CountMode::Exact);
  const auto w = build_table(parse_config(kTwin, {"potential={\"name\":\"constant\",\"c\":0.1}"}), 5);
  CHECK(w.mode() == CountMode::Floating);
  CHECK(w.source.find("enumeration") == std::string::npos);
  const auto e = build_table(parse_config(kTwin, {"mode=\"numeric\""}), 3);
  CHECK(e.source == "root-finding enumeration");
  CHECK(e.E(3) == 72.0);
}

TEST_CASE("count output") {
  const auto r = run_experiment("count", parse_config(kTwin, {"n_max=4"}));
  CHECK(r.exit_code == 0);
  const auto* csv = find(r, "table.csv");
  REQUIRE(csv);
  CHECK(csv->content.find("n,E,D,C,mode\n1,6,6,6,exact\n2,20,14,7,exact\n3,72,66,22,exact\n4,272,252,63,exact\n") !=
        std::string::npos);
  CHECK(csv->content.rfind("# skewcount " + tool_version() + " config fnv1a:", 0) == 0);
  const auto* json = find(r, "table.json");
  REQUIRE(json);
  CHECK(json->content.find("\"schema\": 1") != std::string::npos);
}

TEST_CASE("verify on the reference system") {
  const auto c = parse_config(kTwin, {"lambda=4", "N_max=1000", "windows={\"thm1\":[10,25],\"thm2\":[100,1000]}",
                                      "series.lambda_fit=[5,20]", "series.rho_z=[0.05,0.1,0.125,0.175,0.225,0.2475]"});
  const auto r = run_experiment("verify", c);
  // the Meissel band cannot meet a ceiling of 4 for k up to 5
  CHECK(r.exit_code == 1);
  CHECK(r.summary.find("thm1    N 10..25") != std::string::npos);
  CHECK(r.summary.find("thm3") != std::string::npos);
  REQUIRE(find(r, "verify.json"));
  REQUIRE(find(r, "plot_thm1.dat"));
  const auto tight = run_experiment("verify", parse_config(kTwin, {"band_ceiling=1.0", "series.k_grid=[1,1.1,1.2,1.3,1.4]"}));
  CHECK(tight.exit_code == 1);
  const auto narrow =
      run_experiment("verify", parse_config(kTwin, {"lambda=4", "N_max=40", "series.k_grid=[1,1.1,1.2,1.3,1.4]"}));
  CHECK(narrow.exit_code == 0);
}

TEST_CASE("outputs do not depend on the thread count") {
  const std::vector<std::string> base{"lambda=4", "mode=\"numeric\"", "n_max=6", "N_max=6", "burn_in=1",
                                      "series.dirichlet_N=6", "series.lambda_fit=[2,6]", "series.k_grid=[5,6,7,8,9]"};
  auto with = [&](int threads) {
    auto o = base;
    o.push_back("threads=" + std::to_string(threads));
    return run_experiment("count", parse_config(kTwin, o));
  };
  const auto one = with(1);
  const auto four = with(4);
  REQUIRE(one.files.size() == four.files.size());
  for (std::size_t i = 0; i < one.files.size(); ++i) {
    CHECK(one.files[i].name == four.files[i].name);
    CHECK(one.files[i].content == four.files[i].content);
  }
}

TEST_CASE("other subcommands") {
  const auto orbits = run_experiment("orbits", parse_config(kTwin, {"orbits_n=3"}));
  CHECK(orbits.summary.rfind("22 closed orbits of length 3", 0) == 0);
  const auto series = run_experiment("series", parse_config(kTwin, {"lambda=4", "n_max=40"}));
  REQUIRE(find(series, "series.csv"));
  CHECK(find(series, "series.csv")->content.find("mertens,") != std::string::npos);
  const auto self = run_experiment("selftest", parse_config(kTwin));
  CHECK(self.exit_code == 0);
  CHECK(self.summary.find("ok   E(4): formula 272, enumeration 272") != std::string::npos);
  const auto rep = run_experiment("repelling", parse_config(R"({"maps": [{"num": [0, 0, 1]}], "n_max": 6})"));
  CHECK(rep.exit_code == 0);
  CHECK(kind_of([] { run_experiment("repelling", parse_config(kTwin)); }) == ErrorKind::Config);
  CHECK(kind_of([] { run_experiment("dance", parse_config(kTwin)); }) == ErrorKind::Config);
}

TEST_CASE("exit codes and error records") {
  CHECK(exit_code_for(ErrorKind::Config) == 2);
  CHECK(exit_code_for(ErrorKind::NoConvergence) == 3);
  CHECK(exit_code_for(ErrorKind::EnumerationCapExceeded) == 3);
  CHECK(exit_code_for(ErrorKind::HypothesisImplausible) == 1);
  const auto rec = error_record(ErrorKind::Config, "bad \"thing\"");
  CHECK(rec.find("\"exit_code\":2") != std::string::npos);
  CHECK(rec.find("bad \\\"thing\\\"") != std::string::npos);
}
