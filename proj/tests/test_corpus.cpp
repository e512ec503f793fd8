#include <doctest.h>

#include <fstream>
#include <sstream>

#include "culturestream/corpus.hpp"
#include "culturestream/timeutil.hpp"
#include "test_helpers.hpp"

using namespace culturestream;
using testing::fixture;

namespace {

std::vector<std::string> keys(const std::vector<Fact>& facts) {
  std::vector<std::string> out;
  for (const Fact& f : facts) out.push_back(f.key);
  return out;
}

using Keys = std::vector<std::string>;

std::set<UserHandle> handles(std::initializer_list<const char*> names) {
  std::set<UserHandle> out;
  for (const char* n : names) out.insert(UserHandle(n));
  return out;
}

Roster small_roster() {
  std::istringstream in("user,group\nalice,a\nbob,a\ncarol,b\n");
  return Roster::read_csv(in);
}

}  // namespace

TEST_CASE("handles and facts are case folded") {
  CHECK(UserHandle("@PeerSteinbrueck").name() == "peersteinbrueck");
  CHECK(Fact::make(FactKind::hashtag, "#TVDuell").key == "tvduell");
  CHECK(Fact::make(FactKind::hashtag, "Überhang").key == "überhang");
  CHECK(fold_case("ÄÖÜ") == "äöü");
  CHECK_THROWS_AS(UserHandle("@"), std::invalid_argument);
  CHECK_THROWS_AS(UserHandle("two words"), std::invalid_argument);
}

TEST_CASE("extract_facts on single messages") {
  const auto roster = handles({"sigmargabriel", "peersteinbrueck"});

  auto ex = extract_facts("Debatte läuft #tvduell #merkel", roster);
  CHECK(keys(ex.tagging) == Keys{"tvduell", "merkel"});
  CHECK(ex.retweeting.empty());
  CHECK(ex.mentioning.empty());

  ex = extract_facts("RT @sigmargabriel: danke!", roster);
  CHECK(keys(ex.retweeting) == Keys{"sigmargabriel"});
  CHECK(ex.mentioning.empty());
  CHECK(ex.tagging.empty());

  ex = extract_facts("", roster);
  CHECK(ex.tagging.empty());
  CHECK(ex.retweeting.empty());
  CHECK(ex.mentioning.empty());

  ex = extract_facts("@peersteinbrueck gut gemacht", roster);
  CHECK(keys(ex.mentioning) == Keys{"peersteinbrueck"});
}

TEST_CASE("extract_facts edge cases") {
  const auto roster = handles({"a", "b"});

  SUBCASE("duplicates collapse, first occurrence order kept") {
    auto ex = extract_facts("#x #Y #x @b @a @B", roster);
    CHECK(keys(ex.tagging) == Keys{"x", "y"});
    CHECK(keys(ex.mentioning) == Keys{"b", "a"});
  }
  SUBCASE("retweeted handle is not also a mention") {
    auto ex = extract_facts("RT @a: hi @a and @b", roster);
    CHECK(keys(ex.retweeting) == Keys{"a"});
    CHECK(keys(ex.mentioning) == Keys{"b"});
  }
  SUBCASE("RT without @ and non-roster users") {
    auto ex = extract_facts("RT a via @stranger", roster);
    CHECK(keys(ex.retweeting) == Keys{"a"});
    CHECK(ex.mentioning.empty());
    auto loose = extract_facts("RT a via @stranger", roster, {false, true});
    CHECK(keys(loose.mentioning) == Keys{"stranger"});
  }
  SUBCASE("RT inside a word is not a marker") {
    auto ex = extract_facts("ART @a", roster);
    CHECK(ex.retweeting.empty());
    CHECK(keys(ex.mentioning) == Keys{"a"});
  }
  SUBCASE("hashtags after RT can be excluded") {
    auto with = extract_facts("#own RT @a #theirs", roster);
    CHECK(keys(with.tagging) == Keys{"own", "theirs"});
    auto without = extract_facts("#own RT @a #theirs", roster, {true, false});
    CHECK(keys(without.tagging) == Keys{"own"});
  }
  SUBCASE("hashtag ends at punctuation; bare # ignored") {
    auto ex = extract_facts("#btw13! # #wahl-o-mat", roster);
    CHECK(keys(ex.tagging) == Keys{"btw13", "wahl"});
  }
}

TEST_CASE("roster rejects conflicting membership") {
  Roster r;
  r.add(UserHandle("x"), GroupId("a"));
  r.add(UserHandle("X"), GroupId("a"));
  CHECK(r.size() == 1);
  CHECK_THROWS_AS(r.add(UserHandle("x"), GroupId("b")), DataError);

  std::istringstream bad_header("name,party\nx,a\n");
  CHECK_THROWS_AS(Roster::read_csv(bad_header), DataError);
}

TEST_CASE("load_corpus skips and counts bad records") {
  const Roster roster = small_roster();
  std::istringstream in(
      "id=1\tuser=alice\ttimestamp=2013-07-22T09:00:00Z\ttext=#a\n"
      "id=2\tuser=mallory\ttimestamp=2013-07-22T09:00:00Z\ttext=#a\n"
      "id=3\tuser=bob\ttimestamp=2013-07-22T09:00:00Z\ttext=nur text\n"
      "id=4\tuser=bob\ttimestamp=not-a-time\ttext=#a\n"
      "id=1\tuser=bob\ttimestamp=2013-07-22T09:00:00Z\ttext=#b\n"
      "id=5\tuser=carol\ttimestamp=2012-01-01\ttext=#c\n"
      "\n"
      "# comment\n");
  const ObservationWindow window{parse_timestamp("2013-07-20"), parse_timestamp("2013-10-19")};
  const Corpus c = load_corpus(in, roster, window);
  CHECK(c.report.records_read == 6);
  CHECK(c.transactions.size() == 1);
  CHECK(c.report.count(skip_reason::unknown_author) == 1);
  CHECK(c.report.count(skip_reason::no_facts) == 1);
  CHECK(c.report.count(skip_reason::malformed) == 1);
  CHECK(c.report.count(skip_reason::duplicate_id) == 1);
  CHECK(c.report.count(skip_reason::out_of_window) == 1);
  CHECK(c.report.skipped_total() == 5);
  REQUIRE(c.report.malformed_lines.size() == 1);
  CHECK(c.report.malformed_lines[0].first == 4);
}

TEST_CASE("raw fixture: 10 lines, 3 with hashtags") {
  std::ifstream rin(fixture("raw10/roster.csv"));
  const Roster roster = Roster::read_csv(rin);
  std::ifstream in(fixture("raw10/corpus.tsv"));
  const Corpus c = load_corpus(in, roster);

  std::map<Practice, int> per_practice;
  for (const Transaction& t : c.transactions) {
    ++per_practice[t.practice];
    CHECK_FALSE(validate(t, roster).has_value());
  }
  CHECK(c.report.records_read == 10);
  CHECK(per_practice[Practice::tagging] == 3);
  CHECK(per_practice[Practice::retweeting] == 2);
  CHECK(per_practice[Practice::mentioning] == 2);
  CHECK(c.report.count(skip_reason::no_facts) == 4);
}

TEST_CASE("pre-extracted records round trip") {
  std::ifstream rin(fixture("raw10/roster.csv"));
  const Roster roster = Roster::read_csv(rin);
  std::ifstream in(fixture("raw10/corpus.tsv"));
  const Corpus first = load_corpus(in, roster);

  std::stringstream buf;
  write_preextracted(buf, first.transactions);
  const Corpus second = load_corpus(buf, roster);
  CHECK(second.report.skipped_total() == 0);
  CHECK(second.transactions == first.transactions);
}

TEST_CASE("escaped values in records") {
  Roster roster;
  roster.add(UserHandle("u"), GroupId("g"));
  std::istringstream in("id=x\tuser=u\ttimestamp=0\ttext=line\\none #tag\\tafter\n");
  const Corpus c = load_corpus(in, roster);
  REQUIRE(c.transactions.size() == 1);
  CHECK(c.transactions[0].facts[0].key == "tag");
}

TEST_CASE("validate reports the first violation") {
  const Roster roster = small_roster();
  Transaction t{"1", UserHandle("alice"), GroupId("a"), 10, Practice::tagging,
                {testing::tag("x")}};
  CHECK_FALSE(validate(t, roster).has_value());
  Transaction wrong_group = t;
  wrong_group.group = GroupId("b");
  CHECK(validate(wrong_group, roster).has_value());
  Transaction no_facts = t;
  no_facts.facts.clear();
  CHECK(validate(no_facts, roster).has_value());
  CHECK(validate(t, roster, ObservationWindow{100, 200}).has_value());
}
