// aoi: age-of-information analysis, optimization, and simulation for
// scheduled (SF) and ALOHA-like access over unreliable channels.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O.
// Nodes are numbered from 1 in all input and output.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoi/experiments.hpp"
#include "aoi/report.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw aoi::Error(aoi::ErrorCode::kIo, "cannot open spec file " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw aoi::Error(aoi::ErrorCode::kInvalidArgument,
                     "spec file " + path + ": " + e.what());
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw aoi::Error(aoi::ErrorCode::kIo, "stdout write failed");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw aoi::Error(aoi::ErrorCode::kIo, "cannot open " + path);
  out << text;
  out.close();
  if (!out) throw aoi::Error(aoi::ErrorCode::kIo, "failed writing " + path);
}

// Quick-use flags shared by the ad-hoc commands. Each overrides the field
// of the same name in the --spec document.
struct AdhocFlags {
  std::string spec_path;
  std::string output;
  std::vector<double> p;
  std::vector<double> tau;
  int s = 1;
  int s_max = 30;
  std::string protocol = "sf";
  std::uint64_t horizon = 1'000'000;
  std::uint64_t seed = 1;
  int replications = 1;
  double tol = 1e-10;
  int max_iter = 10'000;
  bool multistart = false;
  std::string trace;
};

bool given(const CLI::App& cmd, const std::string& name) {
  const CLI::Option* opt = cmd.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

// Merged view of --spec and flags.
class Inputs {
 public:
  Inputs(const AdhocFlags& flags, const CLI::App& cmd)
      : flags_(flags), cmd_(cmd) {
    if (!flags.spec_path.empty()) doc_ = load_json(flags.spec_path);
    if (!doc_.is_object()) {
      throw aoi::Error(aoi::ErrorCode::kInvalidArgument,
                       "spec must be a JSON object");
    }
  }

  template <typename T>
  T get(const char* flag, const char* key, const T& flag_value) const {
    if (given(cmd_, flag) || !doc_.contains(key)) return flag_value;
    try {
      return doc_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw aoi::Error(aoi::ErrorCode::kInvalidArgument,
                       std::string("spec field '") + key + "': " + e.what());
    }
  }

  aoi::ChannelProfile profile() const {
    return aoi::ChannelProfile(get("--p", "p", flags_.p));
  }

 private:
  const AdhocFlags& flags_;
  const CLI::App& cmd_;
  json doc_ = json::object();
};

struct ExperimentFlags {
  std::string spec_path;
  std::string output;
  std::vector<double> p;
  int s_max = 30;
  int networks = 0;
  std::vector<int> nodes;
  int samples = 0;
  double p_low = 0.0;
  double p_high = 0.0;
  std::uint64_t seed = 0;
};

json experiment_doc(const std::string& kind, const ExperimentFlags& f,
                    const CLI::App& cmd) {
  json doc = f.spec_path.empty() ? json::object() : load_json(f.spec_path);
  if (!doc.is_object()) {
    throw aoi::Error(aoi::ErrorCode::kInvalidArgument,
                     "spec must be a JSON object");
  }
  if (doc.contains("kind") && doc["kind"] != kind) {
    throw aoi::Error(aoi::ErrorCode::kInvalidArgument,
                     "spec kind does not match the experiment subcommand");
  }
  doc["kind"] = kind;
  if (given(cmd, "--p")) doc["p"] = f.p;
  if (given(cmd, "--S-max")) doc["s_max"] = f.s_max;
  if (given(cmd, "--networks")) doc["networks"] = f.networks;
  if (given(cmd, "--nodes")) {
    if (kind == "scatter") {
      doc["nodes"] = f.nodes.front();
    } else {
      doc["nodes"] = f.nodes;
    }
  }
  if (given(cmd, "--samples")) doc["samples"] = f.samples;
  if (given(cmd, "--p-low")) doc["p_low"] = f.p_low;
  if (given(cmd, "--p-high")) doc["p_high"] = f.p_high;
  if (given(cmd, "--seed")) doc["seed"] = f.seed;
  if (given(cmd, "--output")) doc["output"] = f.output;
  return doc;
}

void add_adhoc_flags(CLI::App* cmd, AdhocFlags& f) {
  cmd->add_option("--spec", f.spec_path, "JSON file with input fields");
  cmd->add_option("--output,-o", f.output, "Output CSV (default stdout)");
  cmd->add_option("--p", f.p, "Decode probabilities, e.g. 0.1,0.5,0.9")
      ->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age of information over unreliable multiaccess channels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(aoi::kToolVersion));

  AdhocFlags sf_flags;
  auto* analyze_sf = app.add_subcommand("analyze-sf", "SF ages for a turn cap");
  add_adhoc_flags(analyze_sf, sf_flags);
  analyze_sf->add_option("--S", sf_flags.s, "Turn cap (slots per turn)");

  AdhocFlags aloha_flags;
  auto* analyze_aloha =
      app.add_subcommand("analyze-aloha", "ALOHA ages for attempt probabilities");
  add_adhoc_flags(analyze_aloha, aloha_flags);
  analyze_aloha->add_option("--tau", aloha_flags.tau, "Attempt probabilities")
      ->delimiter(',');

  AdhocFlags opt_s_flags;
  auto* optimize_s =
      app.add_subcommand("optimize-s", "Sweep the SF turn cap S = 1..S_max");
  add_adhoc_flags(optimize_s, opt_s_flags);
  optimize_s->add_option("--S-max", opt_s_flags.s_max, "Largest turn cap");

  AdhocFlags opt_tau_flags;
  auto* optimize_tau =
      app.add_subcommand("optimize-tau", "Age-minimizing ALOHA attempt probabilities");
  add_adhoc_flags(optimize_tau, opt_tau_flags);
  optimize_tau->add_option("--tol", opt_tau_flags.tol, "Residual tolerance");
  optimize_tau->add_option("--max-iter", opt_tau_flags.max_iter, "Iteration cap");
  optimize_tau->add_flag("--multistart", opt_tau_flags.multistart,
                         "Also start from 1/M and report disagreement");

  AdhocFlags sym_flags;
  auto* symmetric =
      app.add_subcommand("symmetric", "Symmetric-updating SF vs ALOHA comparison");
  add_adhoc_flags(symmetric, sym_flags);

  AdhocFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo simulation");
  add_adhoc_flags(simulate, sim_flags);
  simulate->add_option("--protocol", sim_flags.protocol, "sf or aloha")
      ->check(CLI::IsMember({"sf", "aloha"}));
  simulate->add_option("--S", sim_flags.s, "SF turn cap");
  simulate->add_option("--tau", sim_flags.tau, "ALOHA attempt probabilities")
      ->delimiter(',');
  simulate->add_option("--horizon", sim_flags.horizon, "Slots to simulate");
  simulate->add_option("--seed", sim_flags.seed, "Random seed");
  simulate->add_option("--replications", sim_flags.replications,
                       "Independent runs (seeds seed, seed+1, ...)");
  simulate->add_option("--trace", sim_flags.trace,
                       "Write per-update trace CSV (node,slot,z)");

  auto* experiment =
      app.add_subcommand("experiment", "Canned experiments writing CSV data");
  experiment->require_subcommand(1);
  ExperimentFlags exp_flags;
  std::vector<std::pair<CLI::App*, std::string>> experiments;
  for (const auto& [name, kind] :
       {std::pair{"s-sweep", "s_sweep"}, std::pair{"scatter", "scatter"},
        std::pair{"approx-cdf", "approx_cdf"}}) {
    auto* sub = experiment->add_subcommand(name);
    sub->add_option("--spec", exp_flags.spec_path, "JSON experiment spec");
    sub->add_option("--output,-o", exp_flags.output, "Output CSV");
    sub->add_option("--seed", exp_flags.seed, "Base seed");
    if (std::string(kind) == "s_sweep") {
      sub->add_option("--p", exp_flags.p, "Decode probabilities")->delimiter(',');
      sub->add_option("--S-max", exp_flags.s_max, "Largest turn cap");
    } else {
      sub->add_option("--nodes", exp_flags.nodes, "Nodes per network")
          ->delimiter(',');
      sub->add_option("--p-low", exp_flags.p_low, "Sampling range low end");
      sub->add_option("--p-high", exp_flags.p_high, "Sampling range high end");
      if (std::string(kind) == "scatter") {
        sub->add_option("--networks", exp_flags.networks, "Network count");
      } else {
        sub->add_option("--samples", exp_flags.samples, "Profiles per M");
      }
    }
    experiments.emplace_back(sub, kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    std::ostringstream out;
    std::string output_path;

    if (*analyze_sf) {
      const Inputs in(sf_flags, *analyze_sf);
      aoi::write_sf_analysis(
          out, aoi::SfConfig(in.profile(), in.get("--S", "S", sf_flags.s)));
      output_path = in.get("--output", "output", sf_flags.output);
    } else if (*analyze_aloha) {
      const Inputs in(aloha_flags, *analyze_aloha);
      aoi::write_aloha_analysis(
          out, aoi::AlohaConfig(in.profile(),
                                in.get("--tau", "tau", aloha_flags.tau)));
      output_path = in.get("--output", "output", aloha_flags.output);
    } else if (*optimize_s) {
      const Inputs in(opt_s_flags, *optimize_s);
      out << "# tool: " << aoi::kToolVersion << "\n# command: optimize-s\n";
      aoi::SSweepParams params;
      params.p = in.get("--p", "p", opt_s_flags.p);
      params.s_max = in.get("--S-max", "S_max", opt_s_flags.s_max);
      aoi::run_s_sweep(params, out);
      output_path = in.get("--output", "output", opt_s_flags.output);
    } else if (*optimize_tau) {
      const Inputs in(opt_tau_flags, *optimize_tau);
      aoi::TauSolverOptions options;
      options.tol = in.get("--tol", "tol", opt_tau_flags.tol);
      options.max_iter = in.get("--max-iter", "max_iter", opt_tau_flags.max_iter);
      aoi::write_tau_optimization(
          out, std::cerr, in.profile(), options,
          in.get("--multistart", "multistart", opt_tau_flags.multistart));
      output_path = in.get("--output", "output", opt_tau_flags.output);
    } else if (*symmetric) {
      const Inputs in(sym_flags, *symmetric);
      aoi::write_symmetric(out, in.profile());
      output_path = in.get("--output", "output", sym_flags.output);
    } else if (*simulate) {
      const Inputs in(sim_flags, *simulate);
      const std::string protocol =
          in.get("--protocol", "protocol", sim_flags.protocol);
      std::variant<aoi::SfConfig, aoi::AlohaConfig> proto =
          protocol == "aloha"
              ? std::variant<aoi::SfConfig, aoi::AlohaConfig>(aoi::AlohaConfig(
                    in.profile(), in.get("--tau", "tau", sim_flags.tau)))
          : protocol == "sf"
              ? std::variant<aoi::SfConfig, aoi::AlohaConfig>(
                    aoi::SfConfig(in.profile(), in.get("--S", "S", sim_flags.s)))
              : throw aoi::Error(aoi::ErrorCode::kInvalidArgument,
                                 "protocol must be sf or aloha");
      const std::string trace = in.get("--trace", "trace", sim_flags.trace);
      aoi::SimConfig cfg{std::move(proto)};
      cfg.horizon = in.get("--horizon", "horizon", sim_flags.horizon);
      cfg.seed = in.get("--seed", "seed", sim_flags.seed);
      cfg.keep_trace = !trace.empty();
      const int reps =
          in.get("--replications", "replications", sim_flags.replications);
      if (reps > 1 && !trace.empty()) {
        throw aoi::Error(aoi::ErrorCode::kInvalidArgument,
                         "--trace needs a single replication");
      }
      const aoi::SimResult result = aoi::write_simulation(out, cfg, reps);
      if (!trace.empty()) {
        std::ostringstream t;
        aoi::write_trace_csv(t, result);
        emit(trace, t.str());
      }
      output_path = in.get("--output", "output", sim_flags.output);
    } else {
      for (const auto& [sub, kind] : experiments) {
        if (!*sub) continue;
        const aoi::ExperimentSpec spec =
            aoi::parse_experiment_spec(experiment_doc(kind, exp_flags, *sub));
        aoi::run_experiment(spec, out, std::cerr);
        output_path = spec.output_path;
      }
    }

    emit(output_path, out.str());
    return kExitOk;
  } catch (const aoi::Error& e) {
    std::cerr << "aoi: " << aoi::to_string(e.code()) << ": " << e.what()
              << '\n';
    switch (aoi::kind_of(e.code())) {
      case aoi::ErrorKind::kValidation: return kExitValidation;
      case aoi::ErrorKind::kNumerical: return kExitNumerical;
      case aoi::ErrorKind::kIo: return kExitIo;
    }
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "aoi: " << e.what() << '\n';
    return kExitNumerical;
  }
}
