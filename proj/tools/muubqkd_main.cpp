// Command-line front end: curve/grid/area emission and Monte Carlo protocol
// sessions. Data goes to stdout (or --out); diagnostics go to stderr. All
// data outputs are byte-deterministic for a fixed parameter set and seed.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "muubqkd/attack.hpp"
#include "muubqkd/linalg.hpp"
#include "muubqkd/protocol.hpp"
#include "muubqkd/qstate.hpp"
#include "muubqkd/security.hpp"
#include "muubqkd/version.hpp"

namespace {

using muubqkd::Protocol;
using ordered_json = nlohmann::ordered_json;

std::string fmt_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << data;
}

// Output destinations shared by every subcommand.
struct IoOptions {
  std::string out_path;       // empty = stdout
  std::string manifest_path;  // empty = no manifest
};

void add_io_options(CLI::App* sub, IoOptions& io) {
  sub->add_option("--out", io.out_path, "Write data to this file instead of stdout");
  sub->add_option("--manifest", io.manifest_path,
                  "Write a reproducibility manifest (JSON) to this file");
  // lets --config (a top-level option) appear after the subcommand name
  sub->fallthrough();
}

// Resolved invocation record; re-running with the same manifest reproduces
// the data bytes (and therefore the checksum).
struct RunManifest {
  std::string subcommand;
  ordered_json parameters;
  std::vector<std::pair<std::string, std::string>> outputs;  // name -> bytes

  void add_output(const std::string& name, const std::string& bytes) {
    outputs.emplace_back(name, bytes);
  }

  ordered_json to_json(const IoOptions& io) const {
    ordered_json j;
    j["subcommand"] = subcommand;
    j["version"] = muubqkd::kVersion;
    j["parameters"] = parameters;
    ordered_json outs;
    for (const auto& [name, bytes] : outputs) {
      outs[name] = {{"path", name == "data" && io.out_path.empty()
                                 ? "-"
                                 : (name == "data" ? io.out_path : name)},
                    {"bytes", bytes.size()},
                    {"fnv1a64", hex64(fnv1a64(bytes))}};
    }
    j["outputs"] = outs;
    return j;
  }
};

void emit(const IoOptions& io, RunManifest& manifest,
          const std::string& data) {
  manifest.add_output("data", data);
  if (!io.manifest_path.empty())
    write_file(io.manifest_path, manifest.to_json(io).dump(2) + "\n");
  if (io.out_path.empty())
    std::cout << data;
  else
    write_file(io.out_path, data);
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

Protocol parse_protocol(const std::string& name) {
  return name == "lm05" ? Protocol::kLm05 : Protocol::kMuub2;
}

muubqkd::NoiseSpec parse_noise(const std::string& text) {
  if (text == "none") return muubqkd::NoiseSpec::none();
  if (text.rfind("rot:", 0) == 0)
    return muubqkd::NoiseSpec::rotation(std::stod(text.substr(4)));
  if (text.rfind("depol:", 0) == 0)
    return muubqkd::NoiseSpec::depolarize(std::stod(text.substr(6)));
  throw std::invalid_argument("noise spec must be none, rot:<radians> or depol:<p>: " + text);
}

ordered_json noise_json(const muubqkd::NoiseSpec& spec) {
  switch (spec.kind) {
    case muubqkd::NoiseSpec::Kind::kRotation:
      return {{"kind", "rotation"}, {"value", spec.value}};
    case muubqkd::NoiseSpec::Kind::kDepolarize:
      return {{"kind", "depolarize"}, {"value", spec.value}};
    default:
      return {{"kind", "none"}};
  }
}

// ---- subcommand payloads ----

std::string run_muub_check(RunManifest& manifest) {
  using muubqkd::muub_overlap;
  const auto identity = muubqkd::identity();
  const auto y = muubqkd::pauli_y();
  const std::array<muubqkd::Unitary2, 2> first_basis{identity, y};
  const std::array<muubqkd::Unitary2, 2> second_basis{
      muubqkd::ry(muubqkd::kHalfPi), muubqkd::ry(-muubqkd::kHalfPi)};

  int pairs = 0;
  double max_deviation = 0.0;
  for (const auto& u : first_basis) {
    for (const auto& v : second_basis) {
      max_deviation =
          std::max(max_deviation, std::abs(muub_overlap(u, v) - 2.0));
      ++pairs;
    }
  }
  if (max_deviation > 1e-12)
    throw std::domain_error("muub-check: overlap constant violated");
  const double identity_overlap = muub_overlap(identity, identity);

  manifest.parameters = ordered_json::object();
  ordered_json j;
  j["pairs"] = pairs;
  j["constant"] = 2.0;
  j["max_deviation"] = max_deviation;
  j["identity_overlap"] = identity_overlap;
  return dump_json(j);
}

std::string run_ie_curve(RunManifest& manifest, const std::string& protocol,
                         std::size_t steps) {
  manifest.parameters = {{"protocol", protocol}, {"steps", steps}};
  std::string csv = "q,i_e\n";
  for (const auto& p : muubqkd::ie_curve(parse_protocol(protocol), steps))
    csv += fmt_g9(p.q) + "," + fmt_g9(p.i_e) + "\n";
  return csv;
}

std::string run_keyrate_grid(RunManifest& manifest, const std::string& protocol,
                             std::size_t q_cells, std::size_t qab_cells) {
  manifest.parameters = {{"protocol", protocol},
                         {"q_cells", q_cells},
                         {"qab_cells", qab_cells}};
  const auto grid =
      muubqkd::keyrate_grid(parse_protocol(protocol), q_cells, qab_cells);
  std::string csv = "q,q_ab,i_e,rate\n";
  for (const auto& p : grid.points)
    csv += fmt_g9(p.q) + "," + fmt_g9(p.q_ab) + "," + fmt_g9(p.i_e) + "," +
           fmt_g9(p.rate) + "\n";
  return csv;
}

std::string run_threshold_area(RunManifest& manifest,
                               const std::string& protocol,
                               std::size_t resolution) {
  manifest.parameters = {{"protocol", protocol}, {"resolution", resolution}};
  ordered_json j;
  j["protocol"] = protocol;
  j["resolution"] = resolution;
  j["area"] = muubqkd::threshold_area(parse_protocol(protocol), resolution);
  return dump_json(j);
}

std::string run_qab_bound(RunManifest& manifest) {
  manifest.parameters = ordered_json::object();
  ordered_json j;
  j["bound"] = muubqkd::qab_bound();
  j["max_eve_information"] = muubqkd::eve_information_optimal(muubqkd::kMaxQ);
  return dump_json(j);
}

std::string run_gram_eigs(RunManifest& manifest, double q, double cos_x,
                          double cos_y, bool cos_x_given) {
  const muubqkd::AttackParams params =
      cos_x_given ? muubqkd::AttackParams::from_overlaps(q, cos_x, cos_y)
                  : muubqkd::AttackParams::from_disturbance(q, cos_y);
  manifest.parameters = {{"q", q},
                         {"cos_x", std::cos(params.x)},
                         {"cos_y", std::cos(params.y)}};

  const auto spectrum = muubqkd::lambda_closed(params.alpha());
  const auto gram = muubqkd::gram_matrix(params);
  const auto numeric = muubqkd::symmetric_eigenvalues(gram);
  const double entropy = muubqkd::von_neumann_entropy(gram);
  // numeric is ascending: two copies of lambda_minus then two of lambda_plus
  const double delta = std::max(
      {std::abs(numeric[0] - spectrum.lambda_minus),
       std::abs(numeric[1] - spectrum.lambda_minus),
       std::abs(numeric[2] - spectrum.lambda_plus),
       std::abs(numeric[3] - spectrum.lambda_plus)});

  ordered_json j;
  j["q"] = q;
  j["cos_x"] = std::cos(params.x);
  j["cos_y"] = std::cos(params.y);
  j["alpha"] = spectrum.alpha;
  j["lambda_plus"] = spectrum.lambda_plus;
  j["lambda_minus"] = spectrum.lambda_minus;
  j["entropy"] = entropy;
  j["i_e"] = entropy - 1.0;
  j["closed_vs_numeric_delta"] = delta;
  return dump_json(j);
}

struct SimulateOptions {
  std::uint64_t pulses = 100000;
  double control_prob = 0.5;
  std::vector<double> bases{0.0, muubqkd::kHalfPi};
  std::string noise_fwd = "none";
  std::string noise_bwd = "none";
  std::vector<double> attack;  // Q, cos x, cos y
  std::string protocol = "muub2";
  std::uint64_t seed = 1;
  bool random_cm_basis = false;
  bool sift_rate_per_pulse = false;
  std::string log_path;
};

const char* mode_name(muubqkd::Mode mode) {
  return mode == muubqkd::Mode::kControl ? "cm" : "em";
}

std::string verdict_name(const muubqkd::SiftRecord& rec) {
  if (rec.mode == muubqkd::Mode::kControl)
    return rec.discarded ? "discarded" : "-";
  if (!rec.verdict.conclusive) return "inconclusive";
  return rec.verdict.bit == 0 ? "conclusive-0" : "conclusive-1";
}

std::string rounds_csv(const std::vector<muubqkd::SiftRecord>& records,
                       bool lm05) {
  std::string csv =
      "round,mode,theta,prep_bit,encoding,meas_choice,outcome,verdict,correct\n";
  for (const auto& rec : records) {
    const char* encoding =
        rec.encoding_bit < 0 ? "-" : (rec.encoding_bit == 0 ? "I" : (lm05 ? "iY" : "R"));
    const char* meas =
        rec.mode == muubqkd::Mode::kControl
            ? (rec.discarded ? "other" : "same")
            : (rec.meas_choice == muubqkd::MeasChoice::kSame ? "same" : "rotated");
    csv += std::to_string(rec.round);
    csv += ",";
    csv += mode_name(rec.mode);
    csv += ",";
    csv += fmt_g9(rec.theta);
    csv += ",";
    csv += std::to_string(rec.prep_bit);
    csv += ",";
    csv += encoding;
    csv += ",";
    csv += meas;
    csv += ",";
    csv += std::to_string(rec.outcome_bit);
    csv += ",";
    csv += verdict_name(rec);
    csv += ",";
    csv += rec.correct ? "1" : "0";
    csv += "\n";
  }
  return csv;
}

std::string run_simulate(RunManifest& manifest, const SimulateOptions& opt) {
  muubqkd::SessionConfig config;
  config.n_pulses = opt.pulses;
  config.control_prob = opt.control_prob;
  config.bases = opt.bases;
  config.noise_forward = parse_noise(opt.noise_fwd);
  config.noise_backward = parse_noise(opt.noise_bwd);
  config.seed = opt.seed;
  config.random_cm_basis = opt.random_cm_basis;
  config.sift_rate_per_pulse = opt.sift_rate_per_pulse;
  if (!opt.attack.empty()) {
    if (opt.attack.size() != 3)
      throw std::invalid_argument("--attack expects Q,cosx,cosy");
    config.attack = muubqkd::AttackParams::from_overlaps(
        opt.attack[0], opt.attack[1], opt.attack[2]);
  }

  const bool lm05 = opt.protocol == "lm05";
  std::vector<muubqkd::SiftRecord> records;
  std::vector<muubqkd::SiftRecord>* log_ptr =
      opt.log_path.empty() ? nullptr : &records;
  const muubqkd::SessionStats stats =
      lm05 ? muubqkd::run_lm05_session(config, log_ptr)
           : muubqkd::run_session(config, log_ptr);

  ordered_json params;
  params["protocol"] = opt.protocol;
  params["pulses"] = opt.pulses;
  params["control_prob"] = opt.control_prob;
  params["bases"] = opt.bases;
  params["noise_forward"] = noise_json(config.noise_forward);
  params["noise_backward"] = noise_json(config.noise_backward);
  if (config.attack) {
    params["attack"] = ordered_json{{"q", config.attack->q},
                                    {"cos_x", std::cos(config.attack->x)},
                                    {"cos_y", std::cos(config.attack->y)}};
  } else {
    params["attack"] = nullptr;
  }
  params["seed"] = opt.seed;
  params["random_cm_basis"] = opt.random_cm_basis;
  params["sift_rate_per_pulse"] = opt.sift_rate_per_pulse;
  manifest.parameters = params;

  ordered_json j = params;
  ordered_json s;
  s["cm_rounds"] = stats.cm_rounds;
  s["cm_used"] = stats.cm_used;
  s["cm_discarded"] = stats.cm_discarded;
  s["cm_errors"] = stats.cm_errors;
  s["q_hat"] = stats.q_hat;
  s["em_rounds"] = stats.em_rounds;
  s["em_conclusive"] = stats.em_conclusive;
  s["em_inconclusive"] = stats.em_inconclusive;
  s["em_errors"] = stats.em_errors;
  s["q_ab_hat"] = stats.q_ab_hat;
  s["sift_rate"] = stats.sift_rate;
  j["stats"] = s;

  ordered_json cls;
  const Protocol protocol = parse_protocol(opt.protocol);
  const bool in_range =
      stats.q_hat <= muubqkd::kMaxQ && stats.q_ab_hat <= muubqkd::kMaxQab;
  cls["in_range"] = in_range;
  if (in_range) {
    const auto c =
        muubqkd::classify_point(protocol, stats.q_hat, stats.q_ab_hat);
    cls["rate"] = c.rate;
    cls["region"] = c.region == muubqkd::Region::kDistillable
                        ? "distillable"
                        : "non-distillable";
  } else {
    cls["rate"] = nullptr;
    cls["region"] = nullptr;
  }
  j["classification"] = cls;

  if (!opt.log_path.empty()) {
    const std::string csv = rounds_csv(records, lm05);
    manifest.add_output(opt.log_path, csv);
    write_file(opt.log_path, csv);
  }
  return dump_json(j);
}

std::string run_compare(RunManifest& manifest, std::size_t resolution,
                        std::size_t q_cells, std::size_t qab_cells) {
  manifest.parameters = {{"resolution", resolution},
                         {"q_cells", q_cells},
                         {"qab_cells", qab_cells}};

  const double area_muub2 =
      muubqkd::threshold_area(Protocol::kMuub2, resolution);
  const double area_lm05 = muubqkd::threshold_area(Protocol::kLm05, resolution);

  // Pointwise rate dominance of the two-MUUB protocol over the baseline on
  // matching grid midpoints.
  const auto grid_a = muubqkd::keyrate_grid(Protocol::kMuub2, q_cells, qab_cells);
  const auto grid_b = muubqkd::keyrate_grid(Protocol::kLm05, q_cells, qab_cells);
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_a.points.size(); ++i)
    min_margin =
        std::min(min_margin, grid_a.points[i].rate - grid_b.points[i].rate);

  ordered_json j;
  j["resolution"] = resolution;
  j["areas"] = {{"muub2", area_muub2}, {"lm05", area_lm05}};
  j["areas_ordered"] = area_muub2 > area_lm05;
  j["dominance"] = ordered_json{{"q_cells", q_cells},
                                {"qab_cells", qab_cells},
                                {"holds", min_margin >= 0.0},
                                {"min_margin", min_margin}};
  return dump_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-MUUB bidirectional QKD simulator and security analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", muubqkd::kVersion);
  app.set_config("--config", "",
                 "key=value config file with [subcommand] sections; "
                 "flags take precedence");

  // muub-check
  IoOptions io_check;
  auto* sc_check = app.add_subcommand(
      "muub-check", "Verify the mutual-unbiasedness constants of the encoding bases");
  add_io_options(sc_check, io_check);

  // ie-curve
  IoOptions io_curve;
  std::string curve_protocol = "muub2";
  std::size_t curve_steps = 100;
  auto* sc_curve =
      app.add_subcommand("ie-curve", "Eavesdropper information curve (CSV q,i_e)");
  sc_curve->add_option("--protocol", curve_protocol, "muub2 or lm05")
      ->check(CLI::IsMember({"muub2", "lm05"}))
      ->capture_default_str();
  sc_curve->add_option("--steps", curve_steps, "Samples on [0, 0.25]")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
      ->capture_default_str();
  add_io_options(sc_curve, io_curve);

  // keyrate-grid
  IoOptions io_grid;
  std::string grid_protocol = "muub2";
  std::size_t grid_q_cells = 200, grid_qab_cells = 200;
  auto* sc_grid = app.add_subcommand(
      "keyrate-grid", "Key-rate grid over (Q, Q_AB) midpoints (CSV q,q_ab,i_e,rate)");
  sc_grid->add_option("--protocol", grid_protocol, "muub2 or lm05")
      ->check(CLI::IsMember({"muub2", "lm05"}))
      ->capture_default_str();
  sc_grid->add_option("--q-cells", grid_q_cells, "Cells on the Q axis")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sc_grid->add_option("--qab-cells", grid_qab_cells, "Cells on the Q_AB axis")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_io_options(sc_grid, io_grid);

  // threshold-area
  IoOptions io_area;
  std::string area_protocol = "muub2";
  std::size_t area_resolution = 2000;
  auto* sc_area = app.add_subcommand(
      "threshold-area", "Area of the positive-key-rate region (JSON)");
  sc_area->add_option("--protocol", area_protocol, "muub2 or lm05")
      ->check(CLI::IsMember({"muub2", "lm05"}))
      ->capture_default_str();
  sc_area->add_option("--resolution", area_resolution, "Cells per axis (>= 100)")
      ->check(CLI::Range(std::size_t{100}, std::size_t{100000}))
      ->capture_default_str();
  add_io_options(sc_area, io_area);

  // qab-bound
  IoOptions io_bound;
  auto* sc_bound = app.add_subcommand(
      "qab-bound",
      "Largest Q_AB with positive rate under maximal eavesdropper information (JSON)");
  add_io_options(sc_bound, io_bound);

  // gram-eigs
  IoOptions io_gram;
  double gram_q = 0.0, gram_cos_x = 1.0, gram_cos_y = 1.0;
  auto* sc_gram = app.add_subcommand(
      "gram-eigs", "Gram spectrum, entropy and information for attack parameters (JSON)");
  sc_gram->add_option("--Q", gram_q, "Flip probability, [0, 0.5]")->required();
  auto* opt_cos_x =
      sc_gram->add_option("--cos-x", gram_cos_x,
                          "No-flip ancilla overlap; default solves the "
                          "symmetric-disturbance constraint");
  sc_gram->add_option("--cos-y", gram_cos_y, "Flip ancilla overlap")
      ->capture_default_str();
  add_io_options(sc_gram, io_gram);

  // simulate
  IoOptions io_sim;
  SimulateOptions sim;
  auto* sc_sim = app.add_subcommand(
      "simulate", "Monte Carlo protocol session (JSON stats, optional per-round CSV)");
  sc_sim->add_option("--pulses", sim.pulses, "Number of pulses")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sc_sim->add_option("--control-prob", sim.control_prob, "Control-mode probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sc_sim->add_option("--bases", sim.bases, "Preparation basis angles (radians)")
      ->delimiter(',')
      ->capture_default_str();
  sc_sim->add_option("--noise-fwd", sim.noise_fwd, "none, rot:<radians> or depol:<p>")
      ->capture_default_str();
  sc_sim->add_option("--noise-bwd", sim.noise_bwd, "none, rot:<radians> or depol:<p>")
      ->capture_default_str();
  sc_sim->add_option("--attack", sim.attack, "Attack parameters Q,cosx,cosy")
      ->delimiter(',');
  sc_sim->add_option("--protocol", sim.protocol, "muub2 or lm05")
      ->check(CLI::IsMember({"muub2", "lm05"}))
      ->capture_default_str();
  sc_sim->add_option("--seed", sim.seed, "Session seed")->capture_default_str();
  sc_sim->add_flag("--random-cm-basis", sim.random_cm_basis,
                   "Control mode draws the measurement basis; mismatches are discarded");
  sc_sim->add_flag("--sift-rate-per-pulse", sim.sift_rate_per_pulse,
                   "Report the conclusive fraction of all pulses");
  sc_sim->add_option("--log", sim.log_path, "Write the per-round CSV to this file");
  add_io_options(sc_sim, io_sim);

  // compare
  IoOptions io_cmp;
  std::size_t cmp_resolution = 2000, cmp_q_cells = 200, cmp_qab_cells = 200;
  auto* sc_cmp = app.add_subcommand(
      "compare", "Both protocols' areas and a pointwise rate dominance check (JSON)");
  sc_cmp->add_option("--resolution", cmp_resolution, "Cells per axis for the areas")
      ->check(CLI::Range(std::size_t{100}, std::size_t{100000}))
      ->capture_default_str();
  sc_cmp->add_option("--q-cells", cmp_q_cells, "Dominance grid cells on Q")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sc_cmp->add_option("--qab-cells", cmp_qab_cells, "Dominance grid cells on Q_AB")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_io_options(sc_cmp, io_cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return 2;
  }

  try {
    RunManifest manifest;
    if (*sc_check) {
      manifest.subcommand = "muub-check";
      emit(io_check, manifest, run_muub_check(manifest));
    } else if (*sc_curve) {
      manifest.subcommand = "ie-curve";
      emit(io_curve, manifest, run_ie_curve(manifest, curve_protocol, curve_steps));
    } else if (*sc_grid) {
      manifest.subcommand = "keyrate-grid";
      emit(io_grid, manifest,
           run_keyrate_grid(manifest, grid_protocol, grid_q_cells, grid_qab_cells));
    } else if (*sc_area) {
      manifest.subcommand = "threshold-area";
      emit(io_area, manifest,
           run_threshold_area(manifest, area_protocol, area_resolution));
    } else if (*sc_bound) {
      manifest.subcommand = "qab-bound";
      emit(io_bound, manifest, run_qab_bound(manifest));
    } else if (*sc_gram) {
      manifest.subcommand = "gram-eigs";
      emit(io_gram, manifest,
           run_gram_eigs(manifest, gram_q, gram_cos_x, gram_cos_y,
                         opt_cos_x->count() > 0));
    } else if (*sc_sim) {
      manifest.subcommand = "simulate";
      emit(io_sim, manifest, run_simulate(manifest, sim));
    } else if (*sc_cmp) {
      manifest.subcommand = "compare";
      emit(io_cmp, manifest,
           run_compare(manifest, cmp_resolution, cmp_q_cells, cmp_qab_cells));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
