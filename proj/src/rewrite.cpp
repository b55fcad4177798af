#include "rwspt/rewrite.hpp"

#include <algorithm>
#include <unordered_set>

namespace rwspt {

std::vector<RuleApplication> rule_app(const RewriteRule& rule, const System& s) {
  auto matches = rule.matcher(s);
  std::sort(matches.begin(), matches.end());
  matches.erase(std::unique(matches.begin(), matches.end()), matches.end());

  std::vector<RuleApplication> out;
  out.reserve(matches.size());
  std::unordered_set<System, SystemHash> seen;
  for (auto& m : matches) {
    System raw = rule.applier(s, m);
    if (!seen.insert(raw).second) {
      throw InjectivityViolation("rule " + rule.tag + " yields the same result for two matches");
    }
    out.push_back({std::move(m), std::move(raw)});
  }
  return out;
}

AggregatedTargets<System> rulexe(const RewriteRule& rule, const System& s) {
  AggregatedTargets<System> out;
  for (const auto& app : rule_app(rule, s)) out.add(normalize(app.result), rule.tag, rule.rate);
  return out;
}

AggregatedTargets<Marking> fire_agg(const System& s) {
  AggregatedTargets<Marking> out;
  for (const auto* entry : enab_set(s)) {
    const auto& [t, k] = *entry;
    out.add(normalize_marking(s.net(), fire(t, s.marking())), t.tag.text, t.tag.rate, k);
  }
  return out;
}

AugmentedState to_augmented(const System& s, std::span<const RewriteRule> rules) {
  AugmentedState out{s, fire_agg(s), {}};
  for (const auto& r : rules) out.rewrites.merge(rulexe(r, s));
  return out;
}

}  // namespace rwspt
