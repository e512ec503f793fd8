#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "culturestream/corpus.hpp"
#include "culturestream/fact_measures.hpp"
#include "culturestream/network.hpp"
#include "culturestream/practice_measures.hpp"
#include "culturestream/stream.hpp"
#include "culturestream/synth.hpp"

namespace culturestream {

struct EventMarker {
  int window = 0;
  std::string label;
};

struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path roster;
  std::optional<std::filesystem::path> follow_edges;
  WindowSpec windows;
  std::vector<Practice> practices = {Practice::tagging, Practice::retweeting,
                                     Practice::mentioning};
  RboParams rbo;
  InstitutionVariant inst_variant = InstitutionVariant::literal;
  std::vector<EventMarker> events;
  std::filesystem::path out_dir;
  ExtractOptions extract;
  NetworkOptions network;

  /// Throws ConfigError when inputs are missing or a setting is out of range.
  void check() const;
  /// Stable text form of every setting that affects outputs (paths excluded).
  std::string canonical() const;
};

/// Applies one "key = value" setting. Relative paths resolve against base_dir.
/// Throws ConfigError for unknown keys or bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir = {});

/// Reads "key = value" lines; blank lines and "#" comments are skipped.
RunConfig read_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig read_config_file(const std::filesystem::path& path);

/// Which artifact families a run writes.
struct Stages {
  bool ingest = true;
  bool measures = true;
  bool facts = true;
  bool network = true;
  bool manifest = true;

  static Stages all() { return {}; }
  static Stages only_ingest() { return {true, false, false, false, false}; }
  static Stages only_measures() { return {false, true, false, false, false}; }
  static Stages only_facts() { return {false, false, true, false, false}; }
  static Stages only_network() { return {false, false, false, true, false}; }
};

struct RunResult {
  IngestReport ingest;
  std::vector<std::string> warnings;
  /// (practice, error) for every practice whose artifacts could not be written.
  std::vector<std::pair<Practice, std::string>> failures;
  /// Relative artifact path -> data rows written.
  std::vector<std::pair<std::string, std::size_t>> artifacts;

  bool ok() const { return failures.empty(); }
};

/// File names written under <out>/<practice>/ for each stage.
std::vector<std::string> measure_artifacts();
std::vector<std::string> fact_artifacts();
std::vector<std::string> network_artifacts();

/// Ingests, bins and writes the requested artifacts. Configuration and input
/// problems throw (ConfigError / DataError) before anything is written; a failure
/// inside one practice is reported in the result and leaves other practices intact.
RunResult run_pipeline(const RunConfig& config, const Stages& stages = Stages::all());

/// "name:members,name:members"
std::vector<GroupSize> parse_group_sizes(std::string_view text);
/// "kind:key:first-last:multiplier", e.g. "hashtag:tvduell:7-7:5".
BurstInjection parse_injection(std::string_view text);

/// Writes corpus.tsv (pre-extracted records), roster.csv and a run.conf that
/// points the pipeline at them with matching windows and out = out.
void write_synth_fixture(const std::filesystem::path& dir, const SynthConfig& config,
                         const SynthStream& stream);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace culturestream
