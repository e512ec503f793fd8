// Command-line front end: ingest, measure, facts, network, report, synth, selftest.
//
// Exit codes: 0 ok, 1 usage or configuration error, 2 data error, 3 selftest failure.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "culturestream/pipeline.hpp"
#include "culturestream/selftest.hpp"
#include "culturestream/synth.hpp"
#include "culturestream/timeutil.hpp"

namespace cs = culturestream;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kDataError = 2;
constexpr int kSelftestFailed = 3;

struct RunFlags {
  std::string config;
  std::string corpus, roster, follow_edges, out;
  std::string epoch, practices, inst_variant, events;
  std::optional<int> weeks;
  std::optional<double> rbo_p;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "key = value config file");
  cmd->add_option("--corpus", f.corpus, "line-delimited transaction records");
  cmd->add_option("--roster", f.roster, "roster CSV (user,group)");
  cmd->add_option("--follow-edges", f.follow_edges, "follow edge list CSV (source,target)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--epoch", f.epoch, "start of window 1 (ISO-8601 or epoch seconds)");
  cmd->add_option("--weeks", f.weeks, "number of windows");
  cmd->add_option("--practices", f.practices, "comma-separated practices");
  cmd->add_option("--rbo-p", f.rbo_p, "RBO persistence (default 0.9)");
  cmd->add_option("--inst-variant", f.inst_variant, "institutionness threshold: literal|normalized")
      ->check(CLI::IsMember({"literal", "normalized"}));
  cmd->add_option("--events", f.events, "event markers 'window:label;window:label'");
}

cs::RunConfig resolve_config(const RunFlags& f) {
  cs::RunConfig config = f.config.empty() ? cs::RunConfig{} : cs::read_config_file(f.config);
  auto set = [&](std::string_view key, const std::string& value) {
    if (!value.empty()) cs::apply_setting(config, key, value);
  };
  set("corpus", f.corpus);
  set("roster", f.roster);
  set("follow_edges", f.follow_edges);
  set("out", f.out);
  set("epoch", f.epoch);
  set("practices", f.practices);
  set("inst_variant", f.inst_variant);
  set("events", f.events);
  if (f.weeks) config.windows.count = *f.weeks;
  if (f.rbo_p) config.rbo.p = *f.rbo_p;
  return config;
}

int run_stage(const RunFlags& flags, const cs::Stages& stages) {
  const cs::RunConfig config = resolve_config(flags);
  const cs::RunResult result = cs::run_pipeline(config, stages);
  for (const std::string& w : result.warnings) std::cerr << "warning: " << w << '\n';
  std::cerr << "ingested " << result.ingest.records_read << " records into "
            << result.ingest.transactions << " transactions (" << result.ingest.skipped_total()
            << " skipped)\n";
  for (const auto& [practice, error] : result.failures)
    std::cerr << "error: " << cs::to_string(practice) << ": " << error << '\n';
  for (const auto& [name, rows] : result.artifacts)
    std::cout << (config.out_dir / name).string() << '\t' << rows << '\n';
  return result.ok() ? kOk : kDataError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Socio-cultural measures over time-binned, group-attributed reference streams"};
  app.require_subcommand(1);

  RunFlags flags;
  struct Stage {
    const char* name;
    const char* help;
    cs::Stages stages;
  };
  const Stage stage_list[] = {
      {"ingest", "parse the corpus; write normalized transactions and the ingestion report",
       cs::Stages::only_ingest()},
      {"measure", "culture vectors plus focus, similarity, reproduction and frequency series",
       cs::Stages::only_measures()},
      {"facts", "institutionness and burst episodes per fact", cs::Stages::only_facts()},
      {"network", "edge lists and network statistics per practice", cs::Stages::only_network()},
      {"report", "the full pipeline with events and a run manifest", cs::Stages::all()},
  };
  std::vector<std::pair<CLI::App*, cs::Stages>> stage_cmds;
  for (const Stage& s : stage_list) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_run_flags(cmd, flags);
    stage_cmds.emplace_back(cmd, s.stages);
  }

  cs::SynthConfig synth;
  std::string synth_out, synth_groups = "a:20,b:20,c:20", synth_epoch;
  std::vector<std::string> injections;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic stream fixture");
  synth_cmd->add_option("--out", synth_out, "fixture directory")->required();
  synth_cmd->add_option("--seed", synth.seed, "RNG seed");
  synth_cmd->add_option("--groups", synth_groups, "'name:members,...'");
  synth_cmd->add_option("--weeks", synth.windows, "number of windows");
  synth_cmd->add_option("--epoch", synth_epoch, "start of window 1");
  synth_cmd->add_option("--rate", synth.rate, "transactions per member, window and practice");
  synth_cmd->add_option("--alpha", synth.alpha, "new-hashtag probability");
  synth_cmd->add_option("--hom", synth.hom, "same-group target probability");
  synth_cmd->add_option("--warmup", synth.warmup, "hashtag draws before window 1");
  synth_cmd->add_option("--inject", injections, "burst 'kind:key:first-last:multiplier'");
  synth_cmd->add_option("--injection-share", synth.injection_share,
                        "baseline selection probability of injected facts");

  double selftest_p = 0.9;
  CLI::App* selftest_cmd = app.add_subcommand("selftest", "run the built-in oracle checks");
  selftest_cmd->add_option("--rbo-p", selftest_p, "RBO persistence under test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    for (const auto& [cmd, stages] : stage_cmds)
      if (*cmd) return run_stage(flags, stages);

    if (*synth_cmd) {
      synth.groups = cs::parse_group_sizes(synth_groups);
      if (!synth_epoch.empty()) synth.epoch = cs::parse_timestamp(synth_epoch);
      for (const std::string& s : injections) synth.burst_injections.push_back(cs::parse_injection(s));
      try {
        synth.check();
      } catch (const std::invalid_argument& e) {
        throw cs::ConfigError(e.what());
      }
      const cs::SynthStream stream = cs::generate(synth);
      cs::write_synth_fixture(synth_out, synth, stream);
      std::cerr << "wrote " << stream.transactions.size() << " transactions for "
                << stream.roster.size() << " users to " << synth_out << '\n';
      return kOk;
    }

    if (*selftest_cmd) {
      cs::SelftestOptions options;
      options.rbo_p = selftest_p;
      return cs::print_selftest(std::cout, cs::selftest(options)) ? kOk : kSelftestFailed;
    }
  } catch (const cs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kConfigError;
}
