#include "culturestream/corpus.hpp"

#include <algorithm>
#include <unordered_set>

#include "culturestream/csv.hpp"
#include "culturestream/timeutil.hpp"

namespace culturestream {

// ---------------------------------------------------------------- roster

void Roster::add(const UserHandle& user, const GroupId& group) {
  auto [it, inserted] = members_.emplace(user, group);
  if (!inserted && it->second != group)
    throw DataError("roster lists '" + user.name() + "' under both '" + it->second.name() +
                    "' and '" + group.name() + "'");
}

Roster Roster::read_csv(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || header->size() != 2 || (*header)[0] != "user" || (*header)[1] != "group")
    throw DataError("roster must start with header 'user,group'");
  Roster roster;
  while (auto row = reader.next()) {
    if (row->size() == 1 && row->front().empty()) continue;
    if (row->size() != 2)
      throw DataError("roster line " + std::to_string(reader.line()) + ": expected 2 fields");
    try {
      roster.add(UserHandle((*row)[0]), GroupId((*row)[1]));
    } catch (const std::invalid_argument& e) {
      throw DataError("roster line " + std::to_string(reader.line()) + ": " + e.what());
    }
  }
  return roster;
}

void Roster::write_csv(std::ostream& out) const {
  csv::Writer w(out);
  w.row({"user", "group"});
  for (const auto& [user, group] : members_) w.row({user.name(), group.name()});
}

const GroupId* Roster::find(const UserHandle& user) const {
  auto it = members_.find(user);
  return it == members_.end() ? nullptr : &it->second;
}

std::set<GroupId> Roster::groups() const {
  std::set<GroupId> out;
  for (const auto& [user, group] : members_) out.insert(group);
  return out;
}

std::set<UserHandle> Roster::handles() const {
  std::set<UserHandle> out;
  for (const auto& [user, group] : members_) out.insert(user);
  return out;
}

// ---------------------------------------------------------------- extraction

const std::vector<Fact>& ExtractedFacts::for_practice(Practice p) const {
  switch (p) {
    case Practice::tagging: return tagging;
    case Practice::retweeting: return retweeting;
    case Practice::mentioning: return mentioning;
    case Practice::following: break;
  }
  static const std::vector<Fact> none;
  return none;
}

namespace {

bool is_ascii_word(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_handle_char(char c) { return is_ascii_word(static_cast<unsigned char>(c)); }

// Decodes one UTF-8 code point at s[pos]; returns its byte length (1 for invalid bytes).
std::size_t decode_utf8(std::string_view s, std::size_t pos, char32_t& cp) {
  auto b0 = static_cast<unsigned char>(s[pos]);
  std::size_t len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 0;
  if (len == 0 || pos + len > s.size()) {
    cp = 0xFFFD;
    return 1;
  }
  cp = len == 1 ? b0 : len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
  for (std::size_t i = 1; i < len; ++i) {
    auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b >> 6) != 0x2) {
      cp = 0xFFFD;
      return 1;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  return len;
}

// Letters outside ASCII: everything except the punctuation, symbol and emoji blocks.
bool is_wide_letter(char32_t cp) {
  if (cp < 0xC0) return false;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  if (cp >= 0xFE00 && cp <= 0xFE0F) return false;
  if (cp == 0xFEFF || cp == 0xFFFD) return false;
  if (cp >= 0x1F000) return false;
  return true;
}

// Length in bytes of the hashtag body starting at pos, with its normalized key.
std::size_t scan_hashtag(std::string_view s, std::size_t pos, std::string& key) {
  std::size_t start = pos;
  while (pos < s.size()) {
    auto c = static_cast<unsigned char>(s[pos]);
    if (c < 0x80) {
      if (!is_ascii_word(c)) break;
      key.push_back(static_cast<char>(c));
      ++pos;
      continue;
    }
    char32_t cp;
    std::size_t len = decode_utf8(s, pos, cp);
    if (!is_wide_letter(cp)) break;
    key.append(s.substr(pos, len));
    pos += len;
  }
  key = fold_case(key);
  return pos - start;
}

std::size_t scan_handle(std::string_view s, std::size_t pos) {
  std::size_t start = pos;
  while (pos < s.size() && is_handle_char(s[pos])) ++pos;
  return pos - start;
}

bool word_before(std::string_view s, std::size_t pos) {
  if (pos == 0) return false;
  auto c = static_cast<unsigned char>(s[pos - 1]);
  return is_ascii_word(c) || c >= 0x80;
}

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

void push_unique(std::vector<Fact>& list, Fact f) {
  if (std::find(list.begin(), list.end(), f) == list.end()) list.push_back(std::move(f));
}

}  // namespace

ExtractedFacts extract_facts(std::string_view text, const std::set<UserHandle>& roster,
                             const ExtractOptions& options) {
  ExtractedFacts out;
  std::vector<std::string> mention_candidates;
  std::unordered_set<std::string> retweeted;
  std::size_t first_rt = std::string_view::npos;

  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == 'R' && i + 1 < text.size() && text[i + 1] == 'T' && !word_before(text, i)) {
      std::size_t j = i + 2;
      std::size_t blanks = 0;
      while (j < text.size() && is_blank(text[j])) ++j, ++blanks;
      bool at = j < text.size() && text[j] == '@';
      if (at || blanks > 0) {
        std::size_t name_pos = j + (at ? 1 : 0);
        std::size_t len = scan_handle(text, name_pos);
        bool ends_cleanly =
            name_pos + len >= text.size() || !is_handle_char(text[name_pos + len]);
        if (len > 0 && ends_cleanly && (at || (blanks > 0 && !word_before(text, name_pos)))) {
          if (first_rt == std::string_view::npos) first_rt = i;
          UserHandle user(text.substr(name_pos, len));
          retweeted.insert(user.name());
          if (!options.restrict_users_to_roster || roster.count(user))
            push_unique(out.retweeting, Fact{FactKind::retweetee, user.name()});
          i = name_pos + len;
          continue;
        }
      }
    }
    if (c == '@' && !word_before(text, i)) {
      std::size_t len = scan_handle(text, i + 1);
      if (len > 0) {
        mention_candidates.emplace_back(text.substr(i + 1, len));
        i += 1 + len;
        continue;
      }
    }
    if (c == '#' && !word_before(text, i)) {
      std::string key;
      std::size_t len = scan_hashtag(text, i + 1, key);
      if (len > 0) {
        if (options.count_retweet_hashtags || first_rt == std::string_view::npos || i < first_rt)
          push_unique(out.tagging, Fact{FactKind::hashtag, std::move(key)});
        i += 1 + len;
        continue;
      }
    }
    ++i;
  }

  for (const std::string& raw : mention_candidates) {
    UserHandle user(raw);
    if (retweeted.count(user.name())) continue;
    if (options.restrict_users_to_roster && !roster.count(user)) continue;
    push_unique(out.mentioning, Fact{FactKind::mentionee, user.name()});
  }
  return out;
}

// ---------------------------------------------------------------- ingestion

std::size_t IngestReport::skipped_total() const {
  std::size_t n = 0;
  for (const auto& [reason, count] : skipped) n += count;
  return n;
}

std::size_t IngestReport::count(std::string_view reason) const {
  auto it = skipped.find(reason);
  return it == skipped.end() ? 0 : it->second;
}

void IngestReport::write_csv(std::ostream& out) const {
  csv::Writer w(out);
  w.row({"reason", "count"});
  for (std::string_view reason : {skip_reason::malformed, skip_reason::unknown_author,
                                  skip_reason::out_of_window, skip_reason::no_facts,
                                  skip_reason::duplicate_id})
    w.row({std::string(reason), std::to_string(count(reason))});
  w.row({"records_read", std::to_string(records_read)});
  w.row({"transactions", std::to_string(transactions)});
}

namespace {

std::string unescape(std::string_view v) {
  std::string out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != '\\' || i + 1 == v.size()) {
      out.push_back(v[i]);
      continue;
    }
    char n = v[++i];
    out.push_back(n == 't' ? '\t' : n == 'n' ? '\n' : n == 'r' ? '\r' : n);
  }
  return out;
}

std::string escape(std::string_view v) {
  std::string out;
  out.reserve(v.size());
  for (char c : v) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

using Fields = std::map<std::string, std::string, std::less<>>;

Fields split_record(std::string_view line) {
  Fields fields;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) tab = line.size();
    std::string_view part = line.substr(pos, tab - pos);
    pos = tab + 1;
    if (part.empty()) continue;
    std::size_t eq = part.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw std::invalid_argument("field without key=value form");
    std::string key(part.substr(0, eq));
    if (!fields.emplace(key, unescape(part.substr(eq + 1))).second)
      throw std::invalid_argument("duplicate field '" + key + "'");
  }
  return fields;
}

const std::string& require(const Fields& fields, std::string_view key) {
  auto it = fields.find(key);
  if (it == fields.end()) throw std::invalid_argument("missing field '" + std::string(key) + "'");
  return it->second;
}

std::vector<Fact> parse_fact_list(std::string_view list, FactKind kind) {
  std::vector<Fact> facts;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    std::size_t comma = list.find(',', pos);
    if (comma == std::string_view::npos) comma = list.size();
    std::string_view item = list.substr(pos, comma - pos);
    pos = comma + 1;
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) continue;
    push_unique(facts, Fact::make(kind, item));
  }
  return facts;
}

}  // namespace

Corpus load_corpus(std::istream& records, const Roster& roster,
                   std::optional<ObservationWindow> window, const ExtractOptions& options) {
  Corpus corpus;
  IngestReport& report = corpus.report;
  for (std::string_view reason : {skip_reason::malformed, skip_reason::unknown_author,
                                  skip_reason::out_of_window, skip_reason::no_facts,
                                  skip_reason::duplicate_id})
    report.skipped.emplace(std::string(reason), 0);

  const std::set<UserHandle> handles = roster.handles();
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(records, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
    ++report.records_read;

    std::string id;
    UserHandle author;
    Timestamp ts = 0;
    std::string dedup_key;
    std::vector<std::pair<Practice, std::vector<Fact>>> parts;
    try {
      Fields fields = split_record(line);
      id = require(fields, "id");
      if (id.empty()) throw std::invalid_argument("empty id");
      author = UserHandle(require(fields, "user"));
      ts = parse_timestamp(require(fields, "timestamp"));
      bool raw = fields.count("text") > 0;
      bool pre = fields.count("practice") > 0 || fields.count("facts") > 0;
      if (raw == pre) throw std::invalid_argument("record must carry either text or practice+facts");
      if (raw) {
        ExtractedFacts ex = extract_facts(require(fields, "text"), handles, options);
        for (Practice p : {Practice::tagging, Practice::retweeting, Practice::mentioning})
          parts.emplace_back(p, ex.for_practice(p));
      } else {
        Practice p = parse_practice(require(fields, "practice"));
        // one line per practice shares the record id
        dedup_key = std::string(to_string(p));
        std::vector<Fact> facts = parse_fact_list(require(fields, "facts"), fact_kind_for(p));
        if (is_user_kind(fact_kind_for(p)) && options.restrict_users_to_roster)
          std::erase_if(facts, [&](const Fact& f) { return !roster.contains(UserHandle(f.key)); });
        parts.emplace_back(p, std::move(facts));
      }
    } catch (const std::exception& e) {
      ++report.skipped[std::string(skip_reason::malformed)];
      report.malformed_lines.emplace_back(line_no, e.what());
      continue;
    }

    const GroupId* group = roster.find(author);
    std::string_view reason;
    if (!group) {
      reason = skip_reason::unknown_author;
    } else if (window && !window->contains(ts)) {
      reason = skip_reason::out_of_window;
    } else if (seen_ids.count(id + '\t' + dedup_key)) {
      reason = skip_reason::duplicate_id;
    } else if (std::all_of(parts.begin(), parts.end(),
                           [](const auto& part) { return part.second.empty(); })) {
      reason = skip_reason::no_facts;
    }
    if (!reason.empty()) {
      ++report.skipped[std::string(reason)];
      continue;
    }
    seen_ids.insert(id + '\t' + dedup_key);
    for (auto& [practice, facts] : parts) {
      if (facts.empty()) continue;
      corpus.transactions.push_back(Transaction{id, author, *group, ts, practice, std::move(facts)});
      ++report.transactions;
    }
  }
  return corpus;
}

void write_preextracted(std::ostream& out, const std::vector<Transaction>& transactions) {
  for (const Transaction& t : transactions) {
    out << "id=" << escape(t.id) << "\tuser=" << escape(t.author.name())
        << "\ttimestamp=" << format_timestamp(t.timestamp) << "\tpractice=" << to_string(t.practice)
        << "\tfacts=";
    for (std::size_t i = 0; i < t.facts.size(); ++i) {
      if (i) out << ',';
      out << escape(t.facts[i].key);
    }
    out << '\n';
  }
}

std::optional<std::string> validate(const Transaction& t, const Roster& roster,
                                    std::optional<ObservationWindow> window) {
  if (t.author.name().empty()) return "empty author";
  if (t.facts.empty()) return "transaction without facts";
  const GroupId* group = roster.find(t.author);
  if (!group) return "author '" + t.author.name() + "' not in roster";
  if (*group != t.group) return "group does not match roster for '" + t.author.name() + "'";
  if (window && !window->contains(t.timestamp)) return "timestamp outside observation window";
  FactKind kind = fact_kind_for(t.practice);
  for (const Fact& f : t.facts) {
    if (f.kind != kind) return "fact kind inconsistent with practice";
    if (f.key.empty()) return "empty fact key";
    try {
      if (Fact::make(kind, f.key) != f) return "fact key not normalized: '" + f.key + "'";
    } catch (const std::invalid_argument& e) {
      return e.what();
    }
  }
  return std::nullopt;
}

}  // namespace culturestream
