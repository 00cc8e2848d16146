#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "paretobf/error.hpp"
#include "paretobf/gain_region.hpp"
#include "paretobf/network.hpp"
#include "paretobf/pareto.hpp"
#include "paretobf/rng.hpp"
#include "paretobf_tools/point_cloud.hpp"
#include "paretobf_tools/verify.hpp"

namespace pb = paretobf;
namespace pt = paretobf::tools;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string hex64(std::uint64_t x) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

struct LoadedScenario {
  pb::Scenario scenario;
  std::optional<std::uint64_t> seed;
};

LoadedScenario load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pb::SchemaError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  LoadedScenario out{pb::parse_scenario(text), std::nullopt};
  // generator block written by `gen`; absent for hand-written files
  const auto doc = nlohmann::json::parse(text);
  if (auto g = doc.find("generator"); g != doc.end() && g->is_object()) {
    if (auto s = g->find("seed"); s != g->end() && s->is_number_unsigned()) {
      out.seed = s->get<std::uint64_t>();
    }
  }
  return out;
}

std::string scenario_hash(const pb::Scenario& s) {
  return hex64(pb::fnv1a64(pb::serialize_scenario(s)));
}

// Output to a file, or stdout for "-" / empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw UsageError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw std::runtime_error("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

pb::DirectionVector parse_direction(const std::string& text, std::size_t receivers) {
  std::vector<int> signs;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell == "+1" || cell == "1" || cell == "+") {
      signs.push_back(1);
    } else if (cell == "-1" || cell == "-") {
      signs.push_back(-1);
    } else {
      throw UsageError("direction entries must be +1 or -1, got '" + cell + "'");
    }
  }
  if (signs.size() != receivers) {
    throw UsageError("direction has " + std::to_string(signs.size()) + " entries, scenario has " +
                     std::to_string(receivers) + " receivers");
  }
  return pb::DirectionVector(std::move(signs));
}

double class_code(pb::PowerClass c) {
  switch (c) {
    case pb::PowerClass::Full:
      return pt::kClassFull;
    case pb::PowerClass::Free:
      return pt::kClassFree;
    case pb::PowerClass::Zero:
      return pt::kClassZero;
  }
  return pt::kClassFree;
}

// gen

struct GenArgs {
  std::string templ;
  std::string scenario;
  std::size_t users = 3;
  long antennas = 3;
  std::uint64_t seed = 1;
  double snr_db = 10.0;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  std::string text;
  if (!a.scenario.empty()) {
    // re-emit a scenario file in canonical form
    text = pb::serialize_scenario(load(a.scenario).scenario);
  } else {
    const double noise = pb::snr_to_noise(a.snr_db);
    pb::ScenarioLayout layout;
    if (a.templ == "ic") {
      if (a.users < 1) throw UsageError("--users must be at least 1");
      layout = pb::ic_layout(a.users, a.antennas, noise);
    } else if (a.templ == "mixed") {
      layout = pb::mixed_layout(noise, a.antennas);
    } else {
      throw UsageError("unknown template '" + a.templ + "'; valid templates: ic, mixed");
    }
    const pb::Scenario s = pb::generate_channels(a.seed, layout);
    auto doc = nlohmann::json::parse(pb::serialize_scenario(s));
    doc["generator"] = {{"template", a.templ}, {"seed", a.seed}, {"snr_db", a.snr_db}};
    text = doc.dump(2) + "\n";
  }
  Output out(a.out);
  out.stream() << text;
  out.finish();
  return kExitOk;
}

// sweep-gain

struct SweepGainArgs {
  std::string scenario;
  std::string transmitter;
  std::string direction;
  double step = 0.02;
  std::size_t free_power_samples = 11;
  std::string out;
};

int cmd_sweep_gain(const SweepGainArgs& a) {
  const LoadedScenario ls = load(a.scenario);
  const pb::Scenario& s = ls.scenario;
  const std::size_t t = a.transmitter.empty() ? 0 : s.transmitter_index(a.transmitter);
  const pb::DirectionVector e = a.direction.empty()
                                    ? pb::direction_vector(s.transmitter(t), s.receivers())
                                    : parse_direction(a.direction, s.receivers());
  const auto samples = pb::sweep_boundary(s.channels_of(t), e, a.step, a.free_power_samples);

  const std::size_t k = s.receivers();
  std::vector<std::string> columns;
  for (std::size_t l = 0; l < k; ++l) columns.push_back("lambda_" + std::to_string(l + 1));
  columns.push_back("p");
  columns.push_back("power_class");
  for (std::size_t l = 0; l < k; ++l) columns.push_back("x_" + std::to_string(l + 1));

  std::string dir;
  for (std::size_t l = 0; l < k; ++l) dir += (l ? "," : "") + std::string(e[l] > 0 ? "+1" : "-1");
  pt::CloudMetadata meta{"sweep-gain", scenario_hash(s), ls.seed, a.step, std::nullopt,
                         {{"transmitter", s.transmitter(t).id},
                          {"direction", dir},
                          {"power_class_codes", "full=1 free=0 zero=-1"}}};
  Output out(a.out);
  pt::PointCloudWriter w(out.stream(), meta, columns);
  std::vector<double> row(columns.size());
  for (const auto& sample : samples) {
    for (std::size_t l = 0; l < k; ++l) row[l] = sample.lambda[l];
    row[k] = sample.strategy.power;
    row[k + 1] = class_code(sample.strategy.power_class);
    for (std::size_t l = 0; l < k; ++l) row[k + 2 + l] = sample.gains[l];
    w.row(row);
  }
  out.finish();
  return kExitOk;
}

// sweep-rates

struct SweepRatesArgs {
  std::string scenario;
  std::optional<double> snr_db;
  double step = 0.1;
  bool filter = false;
  std::size_t free_power_samples = 11;
  std::size_t budget = 10'000'000;
  std::string out;
};

int cmd_sweep_rates(const SweepRatesArgs& a) {
  const LoadedScenario ls = load(a.scenario);
  const pb::Scenario s = a.snr_db ? ls.scenario.with_noise_power(pb::snr_to_noise(*a.snr_db))
                                  : ls.scenario;
  const pb::UtilitySpec spec = pb::UtilitySpec::from_scenario(s);
  const pb::SweepOptions options{a.step, a.free_power_samples, a.budget};
  const pb::UtilityCloud cloud = pb::sweep_utility_region(s, spec, options);

  const std::size_t k = s.receivers();
  std::vector<std::string> columns;
  for (std::size_t t = 0; t < s.transmitter_count(); ++t) {
    const std::string& id = s.transmitter(t).id;
    for (std::size_t l = 0; l < k; ++l) columns.push_back("lambda_" + id + "_" + std::to_string(l + 1));
    columns.push_back("p_" + id);
  }
  for (std::size_t g = 0; g < s.power_groups().size(); ++g) {
    for (const auto& member : s.power_groups()[g].members) {
      columns.push_back("split_" + s.power_groups()[g].id + "_" + member);
    }
  }
  for (std::size_t l = 0; l < k; ++l) columns.push_back("u_" + std::to_string(l + 1));

  std::vector<std::size_t> rows;
  if (a.filter) {
    rows = pb::pareto_filter(cloud);
  } else {
    rows.resize(cloud.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  }

  const double snr = a.snr_db ? *a.snr_db : -10.0 * std::log10(s.noise_power());
  pt::CloudMetadata meta{"sweep-rates", scenario_hash(s), ls.seed, a.step, snr,
                         {{"filter", a.filter ? "pareto" : "none"},
                          {"points", std::to_string(cloud.size())}}};
  Output out(a.out);
  pt::PointCloudWriter w(out.stream(), meta, columns);
  std::vector<double> row(columns.size());
  for (std::size_t i : rows) {
    const auto d = cloud.digits(i);
    std::size_t c = 0;
    for (std::size_t t = 0; t < s.transmitter_count(); ++t) {
      const auto& b = cloud.candidates(t)[d[t]].strategy;
      for (std::size_t l = 0; l < k; ++l) row[c++] = b.lambda[l];
      row[c++] = b.power;
    }
    for (std::size_t g = 0; g < cloud.groups(); ++g) {
      const auto& split = cloud.splits(g)[d[s.transmitter_count() + g]];
      for (std::size_t m = 0; m < split.size(); ++m) row[c++] = split[m];
    }
    const auto u = cloud.utility(i);
    for (std::size_t l = 0; l < k; ++l) row[c++] = u[l];
    w.row(row);
  }
  out.finish();
  return kExitOk;
}

// verify

struct VerifyArgs {
  std::string suite;
  std::string scenario;
  std::string transmitter;
  bool random = false;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
};

int cmd_verify(const VerifyArgs& a) {
  const auto& names = pt::suite_names();
  std::vector<std::string> suites;
  if (a.suite == "all") {
    suites = names;
  } else if (std::find(names.begin(), names.end(), a.suite) != names.end()) {
    suites = {a.suite};
  } else {
    std::string valid;
    for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
    throw UsageError("unknown suite '" + a.suite + "'; valid suites: " + valid + ", all");
  }
  if (a.random && !a.scenario.empty()) throw UsageError("--random and --scenario are exclusive");

  pt::VerifyOptions options;
  options.trials = a.trials;
  options.seed = a.seed;
  options.transmitter = a.transmitter;
  if (!a.scenario.empty()) options.scenario = load(a.scenario).scenario;

  bool all = true;
  for (const auto& suite : suites) {
    for (const auto& r : pt::run_suite(suite, options)) {
      all = all && r.passed;
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name
                << " measured=" << pt::format_double(r.measured)
                << " tolerance=" << pt::format_double(r.tolerance);
      if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
      std::cout << '\n';
    }
  }
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pareto boundary beamforming: gain regions, utility sweeps and checks"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Write a scenario file from a template or an existing file");
  auto* tmpl = g->add_option("--template", gen.templ, "Template: ic or mixed");
  auto* gfile = g->add_option("--scenario", gen.scenario, "Existing scenario file to normalize");
  tmpl->excludes(gfile);
  g->add_option("--users", gen.users, "Number of users (ic)");
  g->add_option("--antennas", gen.antennas, "Transmit antennas per transmitter");
  g->add_option("--seed", gen.seed, "Channel seed");
  g->add_option("--snr-db", gen.snr_db, "SNR in dB (noise power 10^(-SNR/10))");
  g->add_option("--out,-o", gen.out, "Output file (default stdout)");

  SweepGainArgs sg;
  auto* sgc = app.add_subcommand("sweep-gain", "Sweep one transmitter's gain-region boundary");
  sgc->add_option("--scenario", sg.scenario, "Scenario file")->required();
  sgc->add_option("--transmitter", sg.transmitter, "Transmitter id (default: first)");
  sgc->add_option("--direction", sg.direction, "Comma-separated +1/-1 per receiver");
  sgc->add_option("--step", sg.step, "Weight grid step");
  sgc->add_option("--free-power-samples", sg.free_power_samples, "Power levels for Free-class weights");
  sgc->add_option("--out,-o", sg.out, "Output file (default stdout)");

  SweepRatesArgs sr;
  auto* src = app.add_subcommand("sweep-rates", "Sweep the utility region of a scenario");
  src->add_option("--scenario", sr.scenario, "Scenario file")->required();
  src->add_option("--snr-db", sr.snr_db, "Override the scenario SNR");
  src->add_option("--step", sr.step, "Grid step for weights and power splits");
  src->add_flag("--filter", sr.filter, "Keep only Pareto nondominated rows");
  src->add_option("--free-power-samples", sr.free_power_samples, "Power levels for Free-class weights");
  src->add_option("--budget", sr.budget, "Maximum number of sweep points");
  src->add_option("--out,-o", sr.out, "Output file (default stdout)");

  VerifyArgs va;
  auto* vc = app.add_subcommand("verify", "Run a verification suite");
  vc->add_option("--suite", va.suite, "Suite name or 'all'")->required();
  vc->add_option("--scenario", va.scenario, "Use this scenario's channels");
  vc->add_option("--transmitter", va.transmitter, "Transmitter id within --scenario");
  vc->add_flag("--random", va.random, "Use random channels (default)");
  vc->add_option("--trials", va.trials, "Trials (0 = suite default)");
  vc->add_option("--seed", va.seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*g) {
      if (gen.templ.empty() && gen.scenario.empty()) {
        throw UsageError("gen needs --template (ic, mixed) or --scenario");
      }
      return cmd_gen(gen);
    }
    if (*sgc) return cmd_sweep_gain(sg);
    if (*src) return cmd_sweep_rates(sr);
    if (*vc) return cmd_verify(va);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const pb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
