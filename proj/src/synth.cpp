#include "culturestream/synth.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <random>
#include <stdexcept>

namespace culturestream {

void SynthConfig::check() const {
  if (groups.empty()) throw std::invalid_argument("synth needs at least one group");
  for (const GroupSize& g : groups)
    if (g.members < 1) throw std::invalid_argument("every synth group needs a member");
  if (windows < 1) throw std::invalid_argument("synth needs at least one window");
  if (width <= 0) throw std::invalid_argument("window width must be positive");
  if (!(rate >= 0.0)) throw std::invalid_argument("rate must be non-negative");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0,1]");
  if (!(hom >= 0.0 && hom <= 1.0)) throw std::invalid_argument("hom must lie in [0,1]");
  if (!(injection_share >= 0.0 && injection_share <= 1.0))
    throw std::invalid_argument("injection_share must lie in [0,1]");
  if (warmup < 0) throw std::invalid_argument("warmup must be non-negative");
  for (const BurstInjection& b : burst_injections) {
    if (b.first_window < 1 || b.last_window < b.first_window || b.last_window > windows)
      throw std::invalid_argument("burst injection interval outside the windows");
    if (!(b.multiplier > 0.0)) throw std::invalid_argument("burst multiplier must be positive");
  }
}

std::string member_handle(const GroupId& group, int index) {
  std::string base;
  for (char c : fold_case(group.name())) {
    const bool word = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    base.push_back(word ? c : '_');
  }
  return fmt::format("{}_{:03}", base, index);
}

namespace {

class Generator {
 public:
  explicit Generator(const SynthConfig& config) : cfg_(config), rng_(config.seed) {
    for (const GroupSize& g : cfg_.groups) {
      std::vector<std::size_t> idx;
      for (int i = 0; i < g.members; ++i) {
        UserHandle user(member_handle(g.group, i));
        out_.roster.add(user, g.group);
        idx.push_back(users_.size());
        users_.push_back({user, g.group, group_members_.size()});
      }
      group_members_.push_back(std::move(idx));
    }
  }

  SynthStream run() {
    for (int i = 0; i < cfg_.warmup; ++i) draw_hashtag();
    std::poisson_distribution<int> activity(cfg_.rate);
    std::uniform_int_distribution<Timestamp> offset(0, cfg_.width - 1);
    for (int w = 1; w <= cfg_.windows; ++w) {
      const Timestamp start = cfg_.epoch + (w - 1) * cfg_.width;
      for (Practice practice : cfg_.practices) {
        for (std::size_t u = 0; u < users_.size(); ++u) {
          const int n = cfg_.rate > 0.0 ? activity(rng_) : 0;
          for (int k = 0; k < n; ++k) {
            const Timestamp ts = start + offset(rng_);
            auto fact = choose(practice, u, w);
            if (!fact) continue;
            out_.transactions.push_back(Transaction{fmt::format("s{:08}", ++serial_),
                                                    users_[u].handle, users_[u].group, ts,
                                                    practice, {std::move(*fact)}});
          }
        }
      }
    }
    std::stable_sort(out_.transactions.begin(), out_.transactions.end(),
                     [](const Transaction& a, const Transaction& b) {
                       return a.timestamp < b.timestamp;
                     });
    return std::move(out_);
  }

 private:
  struct Member {
    UserHandle handle;
    GroupId group;
    std::size_t group_index;
  };

  bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

  std::size_t uniform(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  // Injected fact for this practice and window, if its draw succeeds.
  std::optional<Fact> injected(Practice practice, int window, std::size_t author) {
    const FactKind kind = fact_kind_for(practice);
    for (const BurstInjection& b : cfg_.burst_injections) {
      if (b.fact.kind != kind) continue;
      if (is_user_kind(kind) && b.fact.key == users_[author].handle.name()) continue;
      double p = cfg_.injection_share;
      if (window >= b.first_window && window <= b.last_window) p *= b.multiplier;
      if (chance(std::min(p, 1.0))) return b.fact;
    }
    return std::nullopt;
  }

  // Simon's model: a new hashtag with probability alpha, else an earlier
  // reference picked uniformly, i.e. a fact in proportion to its count.
  std::string draw_hashtag() {
    std::size_t pick;
    if (urn_.empty() || chance(cfg_.alpha)) {
      pick = next_tag_++;
    } else {
      pick = urn_[uniform(urn_.size())];
    }
    urn_.push_back(pick);
    return fmt::format("tag{}", pick);
  }

  std::optional<Fact> choose(Practice practice, std::size_t author, int window) {
    if (auto f = injected(practice, window, author)) return f;
    const FactKind kind = fact_kind_for(practice);
    if (kind == FactKind::hashtag) return Fact{kind, draw_hashtag()};

    const auto& own = group_members_[users_[author].group_index];
    std::size_t target;
    if (own.size() > 1 && chance(cfg_.hom)) {
      do target = own[uniform(own.size())];
      while (target == author);
    } else {
      if (users_.size() < 2) return std::nullopt;
      target = uniform(users_.size() - 1);
      if (target >= author) ++target;
    }
    return Fact{kind, users_[target].handle.name()};
  }

  const SynthConfig& cfg_;
  std::mt19937_64 rng_;
  std::vector<Member> users_;
  std::vector<std::vector<std::size_t>> group_members_;
  std::vector<std::size_t> urn_;
  std::size_t next_tag_ = 0;
  std::uint64_t serial_ = 0;
  SynthStream out_;
};

}  // namespace

SynthStream generate(const SynthConfig& config) {
  config.check();
  return Generator(config).run();
}

}  // namespace culturestream
