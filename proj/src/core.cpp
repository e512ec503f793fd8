#include "culturestream/core.hpp"

#include <algorithm>

namespace culturestream {

namespace {

bool has_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  });
}

}  // namespace

std::string_view to_string(Practice p) {
  switch (p) {
    case Practice::tagging: return "tagging";
    case Practice::retweeting: return "retweeting";
    case Practice::mentioning: return "mentioning";
    case Practice::following: return "following";
  }
  return "?";
}

std::string_view to_string(FactKind k) {
  switch (k) {
    case FactKind::hashtag: return "hashtag";
    case FactKind::retweetee: return "retweetee";
    case FactKind::mentionee: return "mentionee";
    case FactKind::followee: return "followee";
  }
  return "?";
}

Practice parse_practice(std::string_view s) {
  for (Practice p : kAllPractices)
    if (to_string(p) == s) return p;
  throw std::invalid_argument("unknown practice '" + std::string(s) + "'");
}

FactKind parse_fact_kind(std::string_view s) {
  for (Practice p : kAllPractices)
    if (to_string(fact_kind_for(p)) == s) return fact_kind_for(p);
  throw std::invalid_argument("unknown fact kind '" + std::string(s) + "'");
}

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto c = static_cast<unsigned char>(out[i]);
    if (c >= 'A' && c <= 'Z') {
      out[i] = static_cast<char>(c - 'A' + 'a');
    } else if (c == 0xC3 && i + 1 < out.size()) {
      auto n = static_cast<unsigned char>(out[i + 1]);
      if (n >= 0x80 && n <= 0x9E && n != 0x97) out[i + 1] = static_cast<char>(n + 0x20);
      ++i;
    }
  }
  return out;
}

UserHandle::UserHandle(std::string_view raw) {
  if (!raw.empty() && raw.front() == '@') raw.remove_prefix(1);
  if (raw.empty()) throw std::invalid_argument("empty user handle");
  if (has_space(raw))
    throw std::invalid_argument("user handle contains whitespace: '" + std::string(raw) + "'");
  name_ = fold_case(raw);
}

GroupId::GroupId(std::string_view name) : name_(name) {
  if (name_.empty()) throw std::invalid_argument("empty group id");
}

Fact Fact::make(FactKind kind, std::string_view raw) {
  if (is_user_kind(kind)) return Fact{kind, UserHandle(raw).name()};
  if (!raw.empty() && raw.front() == '#') raw.remove_prefix(1);
  if (raw.empty()) throw std::invalid_argument("empty hashtag");
  if (has_space(raw))
    throw std::invalid_argument("hashtag contains whitespace: '" + std::string(raw) + "'");
  return Fact{kind, fold_case(raw)};
}

std::string display(const Fact& f) {
  switch (f.kind) {
    case FactKind::hashtag: return "#" + f.key;
    case FactKind::retweetee: return "RT " + f.key;
    case FactKind::mentionee: return "@" + f.key;
    case FactKind::followee: return "follows " + f.key;
  }
  return f.key;
}

}  // namespace culturestream
