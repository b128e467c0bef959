#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "cli_helpers.hpp"

using nlohmann::json;

TEST_CASE("muub-check reports the overlap constants") {
  const auto r = cli::run("muub-check");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["pairs"] == 4);
  CHECK(j["constant"] == 2.0);
  CHECK(j["identity_overlap"].get<double>() == doctest::Approx(4.0));
  CHECK(j["max_deviation"].get<double>() < 1e-12);
}

TEST_CASE("threshold-area emits the resolved parameters and the area") {
  const auto r = cli::run("threshold-area --protocol muub2 --resolution 500");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["protocol"] == "muub2");
  CHECK(j["resolution"] == 500);
  CHECK(j["area"].get<double>() == doctest::Approx(0.037).epsilon(0.06));

  const auto lm = cli::run("threshold-area --protocol lm05 --resolution 500");
  REQUIRE(lm.exit_code == 0);
  CHECK(json::parse(lm.out)["area"].get<double>() ==
        doctest::Approx(0.017).epsilon(0.08));
}

TEST_CASE("qab-bound") {
  const auto r = cli::run("qab-bound");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["bound"].get<double>() == doctest::Approx(0.0791350033).epsilon(1e-6));
  CHECK(j["max_eve_information"].get<double>() ==
        doctest::Approx(0.6008760367).epsilon(1e-8));
}

TEST_CASE("ie-curve CSV schema") {
  const auto r = cli::run("ie-curve --protocol lm05 --steps 5");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("q,i_e\n", 0) == 0);
  CHECK(r.out.back() == '\n');
  // 1 header + 5 data rows
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 6);
  // endpoint rows are exact
  CHECK(r.out.find("\n0,0\n") != std::string::npos);
  CHECK(r.out.find("\n0.25,1\n") != std::string::npos);
}

TEST_CASE("keyrate-grid CSV schema") {
  const auto r = cli::run("keyrate-grid --protocol muub2 --q-cells 4 --qab-cells 3");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("q,q_ab,i_e,rate\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 13);
  // first midpoint: q = 0.25/8, q_ab = 0.5/6
  CHECK(r.out.find("\n0.03125,0.0833333333,") != std::string::npos);
}

TEST_CASE("gram-eigs on the optimal line") {
  const auto r = cli::run("gram-eigs --Q 0.25");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["cos_x"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(j["cos_y"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["alpha"].get<double>() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(j["lambda_plus"].get<double>() == doctest::Approx(0.4267766953).epsilon(1e-9));
  CHECK(j["lambda_minus"].get<double>() == doctest::Approx(0.0732233047).epsilon(1e-9));
  CHECK(j["entropy"].get<double>() == doctest::Approx(1.6008760367).epsilon(1e-9));
  CHECK(j["i_e"].get<double>() == doctest::Approx(0.6008760367).epsilon(1e-9));
  CHECK(j["closed_vs_numeric_delta"].get<double>() < 1e-9);
}

TEST_CASE("gram-eigs with explicit overlaps") {
  const auto r = cli::run("gram-eigs --Q 0.1 --cos-x 0.2 --cos-y -0.5");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  // alpha = F cos x - Q cos y = 0.9*0.2 + 0.1*0.5
  CHECK(j["alpha"].get<double>() == doctest::Approx(0.23).epsilon(1e-12));
}

TEST_CASE("simulate JSON is self-consistent") {
  const auto r = cli::run(
      "simulate --pulses 20000 --control-prob 0.5 --seed 11 "
      "--attack 0.2,0.5,1.0");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["pulses"] == 20000);
  CHECK(j["seed"] == 11);
  CHECK(j["protocol"] == "muub2");
  CHECK(j["attack"]["q"] == 0.2);

  const auto& s = j["stats"];
  CHECK(s["cm_rounds"].get<std::uint64_t>() + s["em_rounds"].get<std::uint64_t>() ==
        20000);
  CHECK(s["em_conclusive"].get<std::uint64_t>() +
            s["em_inconclusive"].get<std::uint64_t>() ==
        s["em_rounds"].get<std::uint64_t>());
  CHECK(s["q_hat"].get<double>() == doctest::Approx(0.2).epsilon(0.1));

  // q_hat ~ 0.2 and q_ab_hat ~ 2Q/(1+2Q) ~ 0.29: inside the analysis region
  // but far beyond the positive-rate boundary
  CHECK(j["classification"]["in_range"] == true);
  CHECK(j["classification"]["region"] == "non-distillable");
  CHECK(j["classification"]["rate"].get<double>() < 0.0);
}

TEST_CASE("simulate output is byte-identical for a fixed seed") {
  const auto log_a = cli::temp_path("rounds_a.csv");
  const auto log_b = cli::temp_path("rounds_b.csv");
  const std::string base =
      "simulate --pulses 5000 --control-prob 0.5 --seed 7 --noise-fwd rot:0.3 "
      "--noise-bwd depol:0.1 --log ";
  const auto a = cli::run(base + log_a.string());
  const auto b = cli::run(base + log_b.string());
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());

  const std::string csv_a = cli::read_file(log_a);
  const std::string csv_b = cli::read_file(log_b);
  CHECK(csv_a == csv_b);
  CHECK(csv_a.rfind(
            "round,mode,theta,prep_bit,encoding,meas_choice,outcome,verdict,"
            "correct\n",
            0) == 0);
  CHECK(csv_a.back() == '\n');
  std::filesystem::remove(log_a);
  std::filesystem::remove(log_b);
}

TEST_CASE("simulate lm05 per-round log uses the iY encoding label") {
  const auto log = cli::temp_path("rounds_lm05.csv");
  const auto r = cli::run("simulate --protocol lm05 --pulses 300 --seed 3 --log " +
                          log.string());
  REQUIRE(r.exit_code == 0);
  const std::string csv = cli::read_file(log);
  CHECK(csv.find(",iY,") != std::string::npos);
  CHECK(csv.find(",R,") == std::string::npos);
  const json j = json::parse(r.out);
  CHECK(j["stats"]["sift_rate"] == 1.0);
  std::filesystem::remove(log);
}

TEST_CASE("compare emits both areas and the dominance check") {
  const auto r = cli::run("compare --resolution 200 --q-cells 50 --qab-cells 50");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["areas"]["muub2"].get<double>() > j["areas"]["lm05"].get<double>());
  CHECK(j["areas_ordered"] == true);
  CHECK(j["dominance"]["holds"] == true);
  CHECK(j["dominance"]["min_margin"].get<double>() >= 0.0);
}

TEST_CASE("--out writes the data file; --manifest records its checksum") {
  const auto out = cli::temp_path("area.json");
  const auto manifest = cli::temp_path("manifest.json");
  const auto r = cli::run("threshold-area --resolution 200 --out " +
                          out.string() + " --manifest " + manifest.string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());

  const std::string data = cli::read_file(out);
  CHECK(!data.empty());
  const json m = json::parse(cli::read_file(manifest));
  CHECK(m["subcommand"] == "threshold-area");
  CHECK(m["parameters"]["resolution"] == 200);
  char expected[20];
  std::snprintf(expected, sizeof expected, "0x%016llx",
                static_cast<unsigned long long>(cli::fnv1a64(data)));
  CHECK(m["outputs"]["data"]["fnv1a64"] == expected);
  CHECK(m["outputs"]["data"]["bytes"] == data.size());
  std::filesystem::remove(out);
  std::filesystem::remove(manifest);
}

TEST_CASE("config file values are overridden by flags") {
  const auto cfg = cli::temp_path("muubqkd.cfg");
  {
    std::ofstream f(cfg);
    f << "[simulate]\npulses=4321\nseed=5\n";
  }
  const auto from_cfg = cli::run("simulate --config " + cfg.string());
  REQUIRE(from_cfg.exit_code == 0);
  const json a = json::parse(from_cfg.out);
  CHECK(a["pulses"] == 4321);
  CHECK(a["seed"] == 5);

  const auto overridden =
      cli::run("simulate --config " + cfg.string() + " --pulses 1000");
  REQUIRE(overridden.exit_code == 0);
  const json b = json::parse(overridden.out);
  CHECK(b["pulses"] == 1000);
  CHECK(b["seed"] == 5);
  std::filesystem::remove(cfg);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli::run("no-such-subcommand").exit_code == 2);
  CHECK(cli::run("simulate --control-prob 1.5").exit_code == 2);
  CHECK(cli::run("threshold-area --resolution 10").exit_code == 2);
  CHECK(cli::run("simulate --attack 0.25,0.5").exit_code == 2);
  CHECK(cli::run("simulate --noise-fwd wiggle:3").exit_code == 2);
}

TEST_CASE("domain errors exit with 1") {
  // flip probability beyond 0.5 is structurally meaningless
  CHECK(cli::run("gram-eigs --Q 0.7").exit_code == 1);
  CHECK(cli::run("gram-eigs --Q 0.1 --cos-x 1.7").exit_code == 1);
}

TEST_CASE("help exits cleanly") {
  CHECK(cli::run("--help").exit_code == 0);
  CHECK(cli::run("simulate --help").exit_code == 0);
}
