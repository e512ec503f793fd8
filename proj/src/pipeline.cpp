#include "culturestream/pipeline.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>

#include "culturestream/csv.hpp"
#include "culturestream/timeutil.hpp"

namespace culturestream {

namespace fs = std::filesystem;

// ---------------------------------------------------------------- config

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) next = s.size();
    std::string_view part = trim(s.substr(pos, next - pos));
    if (!part.empty()) out.push_back(part);
    pos = next + 1;
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, v));
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    T out;
    if constexpr (std::is_floating_point_v<T>)
      out = static_cast<T>(std::stod(std::string(v), &used));
    else
      out = static_cast<T>(std::stoll(std::string(v), &used));
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return out;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, v));
  }
}

fs::path resolve(const fs::path& base, std::string_view v) {
  fs::path p{std::string(v)};
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

void apply_setting(RunConfig& config, std::string_view key, std::string_view value,
                   const fs::path& base_dir) {
  value = trim(value);
  try {
    if (key == "corpus") {
      config.corpus = resolve(base_dir, value);
    } else if (key == "roster") {
      config.roster = resolve(base_dir, value);
    } else if (key == "follow_edges") {
      if (value.empty())
        config.follow_edges.reset();
      else
        config.follow_edges = resolve(base_dir, value);
    } else if (key == "epoch") {
      config.windows.epoch = parse_timestamp(value);
    } else if (key == "width") {
      config.windows.width = parse_number<Timestamp>(key, value);
    } else if (key == "weeks" || key == "windows") {
      config.windows.count = parse_number<int>(key, value);
    } else if (key == "practices") {
      config.practices.clear();
      for (std::string_view p : split(value, ',')) {
        Practice practice = parse_practice(p);
        if (std::find(config.practices.begin(), config.practices.end(), practice) ==
            config.practices.end())
          config.practices.push_back(practice);
      }
    } else if (key == "rbo_p") {
      config.rbo.p = parse_number<double>(key, value);
      try {
        config.rbo.check();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "inst_variant") {
      config.inst_variant = parse_institution_variant(value);
    } else if (key == "events") {
      config.events.clear();
      for (std::string_view item : split(value, ';')) {
        std::size_t colon = item.find(':');
        if (colon == std::string_view::npos)
          throw ConfigError(fmt::format("events: expected 'window:label', got '{}'", item));
        config.events.push_back({parse_number<int>(key, trim(item.substr(0, colon))),
                                 std::string(trim(item.substr(colon + 1)))});
      }
    } else if (key == "out") {
      config.out_dir = resolve(base_dir, value);
    } else if (key == "restrict_users") {
      config.extract.restrict_users_to_roster = parse_bool(key, value);
    } else if (key == "retweet_hashtags") {
      config.extract.count_retweet_hashtags = parse_bool(key, value);
    } else if (key == "degrees_within_group") {
      config.network.degrees_within_scope = parse_bool(key, value);
    } else {
      throw ConfigError(fmt::format("unknown setting '{}'", key));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("{}: {}", key, e.what()));
  }
}

RunConfig read_config(std::istream& in, const fs::path& base_dir) {
  RunConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    std::size_t eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(fmt::format("config line {}: expected 'key = value'", line_no));
    apply_setting(config, trim(s.substr(0, eq)), s.substr(eq + 1), base_dir);
  }
  return config;
}

RunConfig read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return read_config(in, path.parent_path());
}

void RunConfig::check() const {
  auto need = [](const fs::path& p, std::string_view what) {
    if (p.empty()) throw ConfigError(fmt::format("no {} given", what));
    if (!fs::is_regular_file(p)) throw ConfigError(fmt::format("{} not found: {}", what, p.string()));
  };
  need(corpus, "corpus");
  need(roster, "roster");
  if (follow_edges) need(*follow_edges, "follow edge list");
  if (out_dir.empty()) throw ConfigError("no output directory given");
  try {
    windows.check();
    rbo.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (windows.count < 2) throw ConfigError("reproduction needs at least 2 windows");
  if (practices.empty()) throw ConfigError("no practices enabled");
  for (const EventMarker& e : events)
    if (e.window < 1 || e.window > windows.count)
      throw ConfigError(fmt::format("event '{}' lies outside windows 1..{}", e.label, windows.count));
}

std::string RunConfig::canonical() const {
  std::string out = fmt::format("epoch={}\nwidth={}\nwindows={}\n", windows.epoch, windows.width,
                                windows.count);
  out += "practices=";
  for (Practice p : practices) out += fmt::format("{},", to_string(p));
  out += fmt::format("\nrbo_p={}\ninst_variant={}\n", rbo.p, to_string(inst_variant));
  out += fmt::format("restrict_users={}\nretweet_hashtags={}\ndegrees_within_group={}\n",
                     extract.restrict_users_to_roster, extract.count_retweet_hashtags,
                     network.degrees_within_scope);
  out += fmt::format("follow_edges={}\n", follow_edges.has_value());
  for (const EventMarker& e : events) out += fmt::format("event={}:{}\n", e.window, e.label);
  return out;
}

// ---------------------------------------------------------------- synth fixtures

std::vector<GroupSize> parse_group_sizes(std::string_view text) {
  std::vector<GroupSize> out;
  for (std::string_view item : split(text, ',')) {
    std::size_t colon = item.rfind(':');
    if (colon == std::string_view::npos)
      throw ConfigError(fmt::format("groups: expected 'name:members', got '{}'", item));
    try {
      out.push_back({GroupId(trim(item.substr(0, colon))),
                     parse_number<int>("groups", trim(item.substr(colon + 1)))});
    } catch (const std::invalid_argument& e) {
      throw ConfigError(fmt::format("groups: {}", e.what()));
    }
  }
  if (out.empty()) throw ConfigError("groups: no groups given");
  return out;
}

BurstInjection parse_injection(std::string_view text) {
  std::vector<std::string_view> parts = split(text, ':');
  if (parts.size() != 4)
    throw ConfigError(fmt::format("inject: expected 'kind:key:first-last:multiplier', got '{}'", text));
  try {
    BurstInjection b;
    b.fact = Fact::make(parse_fact_kind(parts[0]), parts[1]);
    std::size_t dash = parts[2].find('-');
    b.first_window = parse_number<int>("inject", parts[2].substr(0, dash));
    b.last_window = dash == std::string_view::npos ? b.first_window
                                                   : parse_number<int>("inject", parts[2].substr(dash + 1));
    b.multiplier = parse_number<double>("inject", parts[3]);
    if (b.first_window < 1 || b.last_window < b.first_window)
      throw std::invalid_argument(fmt::format("bad window interval '{}'", parts[2]));
    if (!(b.multiplier > 0.0)) throw std::invalid_argument("multiplier must be positive");
    return b;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("inject: {}", e.what()));
  }
}

void write_synth_fixture(const fs::path& dir, const SynthConfig& config, const SynthStream& stream) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "corpus.tsv", std::ios::binary | std::ios::trunc);
    write_preextracted(out, stream.transactions);
    if (!out) throw std::runtime_error("cannot write " + (dir / "corpus.tsv").string());
  }
  {
    std::ofstream out(dir / "roster.csv", std::ios::binary | std::ios::trunc);
    stream.roster.write_csv(out);
    if (!out) throw std::runtime_error("cannot write " + (dir / "roster.csv").string());
  }
  std::ofstream out(dir / "run.conf", std::ios::binary | std::ios::trunc);
  out << fmt::format("# synthetic stream, seed {}\n", config.seed);
  out << "corpus = corpus.tsv\nroster = roster.csv\n";
  out << fmt::format("epoch = {}\nwidth = {}\nweeks = {}\n", format_timestamp(config.epoch),
                     config.width, config.windows);
  out << "practices = ";
  for (std::size_t i = 0; i < config.practices.size(); ++i)
    out << (i ? "," : "") << to_string(config.practices[i]);
  out << "\nout = out\n";
  if (!out) throw std::runtime_error("cannot write " + (dir / "run.conf").string());
}

// ---------------------------------------------------------------- hashing

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

// ---------------------------------------------------------------- pipeline

std::vector<std::string> measure_artifacts() {
  return {"culture_vectors.csv", "focus.csv", "similarity.csv", "reproduction.csv",
          "frequency.csv"};
}
std::vector<std::string> fact_artifacts() { return {"facts.csv"}; }
std::vector<std::string> network_artifacts() { return {"edges.csv", "network_stats.csv"}; }

namespace {

using FileSet = std::vector<std::pair<std::string, std::string>>;  // (name, content)

std::size_t data_rows(const std::string& content) {
  std::istringstream in(content);
  csv::Reader reader(in);
  std::size_t rows = 0;
  while (reader.next()) ++rows;
  return rows == 0 ? 0 : rows - 1;
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

FileSet practice_files(const RunConfig& config, const Stages& stages, Practice practice,
                       const CultureSet& cultures, const std::vector<Transaction>& transactions,
                       const Roster& roster, const std::vector<FollowEdge>& follows) {
  FileSet files;
  if (stages.measures) {
    files.emplace_back("culture_vectors.csv",
                       render([&](std::ostream& o) { write_culture_csv(o, cultures, practice); }));
    const std::vector<GroupId> groups = cultures.groups(practice);
    for (Measure m : {Measure::focus, Measure::similarity, Measure::reproduction,
                      Measure::frequency}) {
      std::vector<MeasureSeries> series;
      for (const GroupId& g : groups)
        series.push_back(measure_series(m, cultures, practice, g, config.rbo));
      if (!series.empty()) series.push_back(average_series(series));
      files.emplace_back(std::string(to_string(m)) + ".csv",
                         render([&](std::ostream& o) { write_series_csv(o, series); }));
    }
  }
  if (stages.facts) {
    const std::vector<FactScore> scores = fact_measures(cultures, practice, config.inst_variant);
    files.emplace_back("facts.csv", render([&](std::ostream& o) { write_fact_csv(o, scores); }));
  }
  if (stages.network) {
    PracticeGraph graph = practice == Practice::following ? build_follow_graph(follows, roster)
                                                          : PracticeGraph(practice);
    for (const Transaction& t : transactions) {
      if (t.practice != practice || !config.windows.window_of(t.timestamp)) continue;
      for (const Fact& f : t.facts) graph.add_reference(roster, t.author, UserHandle(f.key));
    }
    std::set<GroupId> present;
    for (const auto& [user, group] : graph.nodes()) present.insert(group);
    const std::vector<GroupId> groups(present.begin(), present.end());
    const auto stats = network_stats(graph, groups, config.network);
    files.emplace_back("edges.csv", render([&](std::ostream& o) { write_edges_csv(o, graph); }));
    files.emplace_back("network_stats.csv",
                       render([&](std::ostream& o) { write_network_stats_csv(o, stats); }));
  }
  return files;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw std::runtime_error("error writing " + path.string());
}

// Writes every file as <name>.partial first and renames only when all succeeded.
void commit(const fs::path& dir, const FileSet& files) {
  fs::create_directories(dir);
  std::vector<fs::path> written;
  try {
    for (const auto& [name, content] : files) {
      fs::path partial = dir / (name + ".partial");
      written.push_back(partial);
      write_file(partial, content);
    }
  } catch (...) {
    std::error_code ec;
    for (const fs::path& p : written) fs::remove(p, ec);
    throw;
  }
  for (std::size_t i = 0; i < files.size(); ++i) fs::rename(written[i], dir / files[i].first);
}

}  // namespace

RunResult run_pipeline(const RunConfig& config, const Stages& stages) {
  config.check();

  Roster roster;
  {
    std::ifstream in(config.roster);
    if (!in) throw ConfigError("cannot open roster " + config.roster.string());
    roster = Roster::read_csv(in);
  }
  std::vector<FollowEdge> follows;
  if (config.follow_edges) {
    std::ifstream in(*config.follow_edges);
    if (!in) throw ConfigError("cannot open follow edge list " + config.follow_edges->string());
    follows = read_follow_edges(in);
  }
  Corpus corpus;
  {
    std::ifstream in(config.corpus, std::ios::binary);
    if (!in) throw ConfigError("cannot open corpus " + config.corpus.string());
    corpus = load_corpus(in, roster, config.windows.span(), config.extract);
  }

  RunResult result;
  result.ingest = corpus.report;
  if (corpus.transactions.empty()) result.warnings.push_back("corpus produced no transactions");
  if (!corpus.report.malformed_lines.empty())
    result.warnings.push_back(fmt::format("{} malformed record(s), first at line {}: {}",
                                          corpus.report.malformed_lines.size(),
                                          corpus.report.malformed_lines.front().first,
                                          corpus.report.malformed_lines.front().second));

  std::vector<Practice> practices = config.practices;
  if (config.follow_edges &&
      std::find(practices.begin(), practices.end(), Practice::following) == practices.end())
    practices.push_back(Practice::following);

  fs::create_directories(config.out_dir);
  FileSet top;
  if (stages.ingest) {
    top.emplace_back("transactions.tsv",
                     render([&](std::ostream& o) { write_preextracted(o, corpus.transactions); }));
    top.emplace_back("ingest_report.csv",
                     render([&](std::ostream& o) { corpus.report.write_csv(o); }));
  }
  if (stages.manifest) {
    top.emplace_back("events.csv", render([&](std::ostream& o) {
                       csv::Writer w(o);
                       w.row({"window", "label"});
                       for (const EventMarker& e : config.events)
                         w.row({std::to_string(e.window), e.label});
                     }));
  }

  const CultureSet cultures = bin(corpus.transactions, config.windows);

  std::vector<std::future<FileSet>> jobs;
  for (Practice p : practices)
    jobs.push_back(std::async(std::launch::async, [&, p] {
      return practice_files(config, stages, p, cultures, corpus.transactions, roster, follows);
    }));

  std::vector<std::pair<std::string, std::size_t>> rows;
  for (const auto& [name, content] : top)
    if (name.ends_with(".csv")) rows.emplace_back(name, data_rows(content));
    else rows.emplace_back(name, corpus.transactions.size());
  commit(config.out_dir, top);

  for (std::size_t i = 0; i < practices.size(); ++i) {
    const std::string dir(to_string(practices[i]));
    try {
      FileSet files = jobs[i].get();
      commit(config.out_dir / dir, files);
      for (const auto& [name, content] : files) rows.emplace_back(dir + "/" + name, data_rows(content));
    } catch (const std::exception& e) {
      result.failures.emplace_back(practices[i], e.what());
    }
  }
  std::sort(rows.begin(), rows.end());
  result.artifacts = rows;

  if (stages.manifest) {
    std::string manifest = render([&](std::ostream& o) {
      csv::Writer w(o);
      w.row({"kind", "name", "value"});
      w.row({"config", "sha256", sha256_hex(config.canonical())});
      w.row({"input", "corpus", sha256_file(config.corpus)});
      w.row({"input", "roster", sha256_file(config.roster)});
      if (config.follow_edges) w.row({"input", "follow_edges", sha256_file(*config.follow_edges)});
      w.row({"ingest", "records_read", std::to_string(corpus.report.records_read)});
      w.row({"ingest", "transactions", std::to_string(corpus.report.transactions)});
      w.row({"ingest", "skipped", std::to_string(corpus.report.skipped_total())});
      for (const auto& [name, n] : rows) w.row({"rows", name, std::to_string(n)});
      for (const auto& [practice, error] : result.failures)
        w.row({"failed", std::string(to_string(practice)), error});
    });
    commit(config.out_dir, {{"manifest.csv", manifest}});
  }
  return result;
}

}  // namespace culturestream
