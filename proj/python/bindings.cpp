#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <map>
#include <string>
#include <vector>

#include "culturestream/corpus.hpp"
#include "culturestream/fact_measures.hpp"
#include "culturestream/pipeline.hpp"
#include "culturestream/practice_measures.hpp"
#include "culturestream/selftest.hpp"
#include "culturestream/synth.hpp"

namespace py = pybind11;
namespace cs = culturestream;

namespace {

using Counts = std::map<std::string, std::int64_t>;

cs::CultureVector to_vector(const Counts& counts) {
  cs::CultureVector v;
  for (const auto& [key, n] : counts) {
    if (n < 0) throw py::value_error("counts must be non-negative");
    if (n > 0) v.add(cs::Fact::make(cs::FactKind::hashtag, key), n);
  }
  return v;
}

cs::FactSeries to_series(std::vector<std::int64_t> r, std::vector<std::int64_t> d) {
  cs::FactSeries s;
  s.r = std::move(r);
  s.d = std::move(d);
  s.check();
  return s;
}

std::vector<std::string> keys(const std::vector<cs::Fact>& facts) {
  std::vector<std::string> out;
  for (const cs::Fact& f : facts) out.push_back(f.key);
  return out;
}

cs::Stages stages_named(const std::string& name) {
  if (name == "report") return cs::Stages::all();
  if (name == "ingest") return cs::Stages::only_ingest();
  if (name == "measure") return cs::Stages::only_measures();
  if (name == "facts") return cs::Stages::only_facts();
  if (name == "network") return cs::Stages::only_network();
  throw py::value_error("stage must be one of report, ingest, measure, facts, network");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Socio-cultural stream measures (focus, similarity, reproduction, institutionness, "
            "burstiness) and practice-network statistics.";

  py::register_exception<cs::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<cs::DataError>(m, "DataError", PyExc_ValueError);

  m.def(
      "extract_facts",
      [](const std::string& text, const std::vector<std::string>& roster, bool restrict_users,
         bool count_retweet_hashtags) {
        std::set<cs::UserHandle> handles;
        for (const std::string& u : roster) handles.insert(cs::UserHandle(u));
        cs::ExtractOptions options{restrict_users, count_retweet_hashtags};
        cs::ExtractedFacts ex = cs::extract_facts(text, handles, options);
        std::map<std::string, std::vector<std::string>> out;
        out["tagging"] = keys(ex.tagging);
        out["retweeting"] = keys(ex.retweeting);
        out["mentioning"] = keys(ex.mentioning);
        return out;
      },
      py::arg("text"), py::arg("roster") = std::vector<std::string>{},
      py::arg("restrict_users") = true, py::arg("count_retweet_hashtags") = true,
      "Hashtags, retweetees and mentionees referenced by a message.");

  m.def(
      "focus", [](const Counts& counts) { return cs::focus(to_vector(counts)); },
      py::arg("counts"), "Cultural focus of a fact -> count mapping (None when empty).");

  m.def(
      "pair_similarity",
      [](const Counts& a, const Counts& b) { return cs::pair_similarity(to_vector(a), to_vector(b)); },
      py::arg("a"), py::arg("b"));

  m.def(
      "rank",
      [](const Counts& counts) {
        std::vector<std::pair<std::string, std::int64_t>> out;
        for (const auto& [fact, n] : cs::rank(to_vector(counts))) out.emplace_back(fact.key, n);
        return out;
      },
      py::arg("counts"));

  m.def(
      "reproduction",
      [](const Counts& earlier, const Counts& later, double p) {
        return cs::reproduction(cs::rank(to_vector(earlier)), cs::rank(to_vector(later)),
                                cs::RboParams{p});
      },
      py::arg("earlier"), py::arg("later"), py::arg("p") = 0.9,
      "Extended rank-biased overlap between two windows' culture vectors.");

  m.def("rbo_depth_weight", &cs::rbo_depth_weight, py::arg("p"), py::arg("depth"));

  m.def(
      "institutionness",
      [](std::vector<std::int64_t> r, std::vector<std::optional<double>> h0,
         const std::string& variant) {
        cs::FactSeries s;
        s.r = std::move(r);
        s.d = s.r;
        return cs::institutionness(s, h0, cs::parse_institution_variant(variant));
      },
      py::arg("r"), py::arg("h0"), py::arg("variant") = "literal");

  m.def(
      "burst_costs",
      [](std::vector<std::int64_t> r, std::vector<std::int64_t> d) {
        std::vector<std::pair<double, double>> out;
        for (const cs::BurstCost& c : cs::burst_costs(to_series(std::move(r), std::move(d))))
          out.emplace_back(c.base, c.burst);
        return out;
      },
      py::arg("r"), py::arg("d"), "(base, burst) cost per window.");

  m.def(
      "burst_episodes",
      [](std::vector<std::int64_t> r, std::vector<std::int64_t> d) {
        std::vector<std::tuple<int, int, double>> out;
        for (const cs::BurstEpisode& e : cs::burst_episodes(to_series(std::move(r), std::move(d))))
          out.emplace_back(e.onset, e.end, e.weight);
        return out;
      },
      py::arg("r"), py::arg("d"), "(onset, end, weight) per episode, windows 1-based.");

  m.def(
      "synth_fixture",
      [](const std::filesystem::path& out_dir, const std::map<std::string, int>& groups,
         int windows, double rate, double alpha, double hom, std::uint64_t seed,
         const std::vector<std::string>& inject) {
        cs::SynthConfig config;
        for (const auto& [name, members] : groups) config.groups.push_back({cs::GroupId(name), members});
        config.windows = windows;
        config.rate = rate;
        config.alpha = alpha;
        config.hom = hom;
        config.seed = seed;
        for (const std::string& s : inject) config.burst_injections.push_back(cs::parse_injection(s));
        cs::SynthStream stream = cs::generate(config);
        cs::write_synth_fixture(out_dir, config, stream);
        return stream.transactions.size();
      },
      py::arg("out_dir"), py::arg("groups"), py::arg("windows") = 13, py::arg("rate") = 2.0,
      py::arg("alpha") = 0.1, py::arg("hom") = 0.8, py::arg("seed") = 42,
      py::arg("inject") = std::vector<std::string>{},
      "Write corpus.tsv, roster.csv and run.conf; returns the transaction count.");

  m.def(
      "run_pipeline",
      [](const std::filesystem::path& config_path, const std::string& stage,
         const std::map<std::string, std::string>& overrides) {
        cs::RunConfig config = cs::read_config_file(config_path);
        for (const auto& [key, value] : overrides) cs::apply_setting(config, key, value);
        cs::RunResult result;
        {
          py::gil_scoped_release release;
          result = cs::run_pipeline(config, stages_named(stage));
        }
        py::dict out;
        out["records_read"] = result.ingest.records_read;
        out["transactions"] = result.ingest.transactions;
        out["skipped"] = result.ingest.skipped;
        out["warnings"] = result.warnings;
        out["artifacts"] = result.artifacts;
        std::vector<std::pair<std::string, std::string>> failures;
        for (const auto& [p, e] : result.failures) failures.emplace_back(std::string(cs::to_string(p)), e);
        out["failures"] = failures;
        return out;
      },
      py::arg("config"), py::arg("stage") = "report",
      py::arg("overrides") = std::map<std::string, std::string>{},
      "Run the pipeline from a config file; overrides use config-file keys.");

  m.def(
      "selftest",
      [](double rbo_p) {
        cs::SelftestOptions options;
        options.rbo_p = rbo_p;
        std::vector<std::tuple<std::string, bool, std::string>> out;
        for (const cs::SelftestCheck& c : cs::selftest(options))
          out.emplace_back(c.name, c.passed, c.detail);
        return out;
      },
      py::arg("rbo_p") = 0.9);
}
