#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace culturestream {

/// Bad configuration or command-line usage (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that cannot be used (CLI exit code 2).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Practice { tagging, retweeting, mentioning, following };
enum class FactKind { hashtag, retweetee, mentionee, followee };

inline constexpr Practice kAllPractices[] = {Practice::tagging, Practice::retweeting,
                                             Practice::mentioning, Practice::following};

std::string_view to_string(Practice p);
std::string_view to_string(FactKind k);
Practice parse_practice(std::string_view s);
FactKind parse_fact_kind(std::string_view s);

constexpr FactKind fact_kind_for(Practice p) {
  switch (p) {
    case Practice::tagging: return FactKind::hashtag;
    case Practice::retweeting: return FactKind::retweetee;
    case Practice::mentioning: return FactKind::mentionee;
    case Practice::following: return FactKind::followee;
  }
  return FactKind::hashtag;
}

constexpr bool is_user_kind(FactKind k) { return k != FactKind::hashtag; }

/// Lowercases ASCII and Latin-1 letters (U+00C0..U+00DE); other bytes pass through.
std::string fold_case(std::string_view s);

/// Case-normalized account name. A leading "@" is stripped.
class UserHandle {
 public:
  UserHandle() = default;
  /// Throws std::invalid_argument if the normalized name is empty or has whitespace.
  explicit UserHandle(std::string_view raw);

  const std::string& name() const { return name_; }
  auto operator<=>(const UserHandle&) const = default;

 private:
  std::string name_;
};

class GroupId {
 public:
  GroupId() = default;
  explicit GroupId(std::string_view name);

  const std::string& name() const { return name_; }
  auto operator<=>(const GroupId&) const = default;

 private:
  std::string name_;
};

/// A referenced cultural object: a hashtag or a user handle.
struct Fact {
  FactKind kind = FactKind::hashtag;
  std::string key;

  /// Normalizes the key for its kind ("#" stripped for hashtags, handle rules for users).
  static Fact make(FactKind kind, std::string_view raw);

  auto operator<=>(const Fact&) const = default;
};

std::string display(const Fact& f);

using Timestamp = std::int64_t;  // UTC seconds

struct Transaction {
  std::string id;
  UserHandle author;
  GroupId group;
  Timestamp timestamp = 0;
  Practice practice = Practice::tagging;
  std::vector<Fact> facts;

  bool operator==(const Transaction&) const = default;
};

}  // namespace culturestream
