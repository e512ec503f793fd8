#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "culturestream/core.hpp"

namespace culturestream {

/// User -> group table. Each handle belongs to exactly one group.
class Roster {
 public:
  /// Re-adding a user with the same group is a no-op; a different group throws DataError.
  void add(const UserHandle& user, const GroupId& group);

  /// CSV with header "user,group". Throws DataError on malformed rows or conflicts.
  static Roster read_csv(std::istream& in);
  void write_csv(std::ostream& out) const;

  const GroupId* find(const UserHandle& user) const;
  bool contains(const UserHandle& user) const { return find(user) != nullptr; }
  std::set<GroupId> groups() const;
  std::set<UserHandle> handles() const;
  const std::map<UserHandle, GroupId>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

 private:
  std::map<UserHandle, GroupId> members_;
};

struct ExtractOptions {
  /// Drop retweetees and mentionees that are not roster members.
  bool restrict_users_to_roster = true;
  /// Count hashtags that follow an "RT" marker toward the retweeter's tagging.
  bool count_retweet_hashtags = true;
};

struct ExtractedFacts {
  std::vector<Fact> tagging;
  std::vector<Fact> retweeting;
  std::vector<Fact> mentioning;

  const std::vector<Fact>& for_practice(Practice p) const;
};

/// Parses hashtags, "RT [@]user" retweet markers and "@user" mentions from raw text.
/// Every list is deduplicated within the message and keeps first-occurrence order.
/// A handle that is retweeted is never also reported as mentioned.
ExtractedFacts extract_facts(std::string_view text, const std::set<UserHandle>& roster,
                             const ExtractOptions& options = {});

/// Half-open [start, end).
struct ObservationWindow {
  Timestamp start = 0;
  Timestamp end = 0;
  bool contains(Timestamp t) const { return t >= start && t < end; }
};

namespace skip_reason {
inline constexpr std::string_view malformed = "malformed";
inline constexpr std::string_view unknown_author = "unknown_author";
inline constexpr std::string_view out_of_window = "out_of_window";
inline constexpr std::string_view no_facts = "no_facts";
inline constexpr std::string_view duplicate_id = "duplicate_id";
}  // namespace skip_reason

struct IngestReport {
  std::size_t records_read = 0;
  std::size_t transactions = 0;
  std::map<std::string, std::size_t, std::less<>> skipped;
  /// (line number, message) for every malformed record.
  std::vector<std::pair<std::size_t, std::string>> malformed_lines;

  std::size_t skipped_total() const;
  std::size_t count(std::string_view reason) const;
  /// "reason,count" with every known reason listed, plus records_read and transactions.
  void write_csv(std::ostream& out) const;
};

struct Corpus {
  std::vector<Transaction> transactions;
  IngestReport report;
};

/// Reads line-delimited records. Each line holds tab-separated key=value fields
/// (values escape \t, \n, \r and \\ with a backslash). Raw records carry
/// id, user, timestamp, text; pre-extracted records carry id, user, timestamp,
/// practice, facts (comma-separated). Blank lines and lines starting with "#" are
/// ignored. Bad records are reported, never fatal.
Corpus load_corpus(std::istream& records, const Roster& roster,
                   std::optional<ObservationWindow> window = std::nullopt,
                   const ExtractOptions& options = {});

/// Writes transactions as pre-extracted records readable by load_corpus.
void write_preextracted(std::ostream& out, const std::vector<Transaction>& transactions);

/// Returns the first violated invariant, or nullopt when the transaction is valid.
std::optional<std::string> validate(const Transaction& t, const Roster& roster,
                                    std::optional<ObservationWindow> window = std::nullopt);

}  // namespace culturestream
