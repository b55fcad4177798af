#include "rwspt/statespace.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>
#include <tuple>
#include <unordered_map>

#include "rwspt/canon.hpp"

namespace rwspt {

const char* to_string(Mode m) { return m == Mode::ordinary ? "ordinary" : "quotient"; }

Mode parse_mode(const std::string& text) {
  if (text == "ordinary") return Mode::ordinary;
  if (text == "quotient") return Mode::quotient;
  throw std::invalid_argument("unknown mode: " + text);
}

namespace {

struct Successor {
  System target;
  std::string label;
  double rate;
  std::uint64_t count;
};

std::vector<Successor> quotient_successors(const System& s, std::span<const RewriteRule> rules) {
  std::vector<Successor> out;
  const auto aug = to_augmented(s, rules);
  for (auto& e : aug.firing.entries()) {
    out.push_back({System(s.net_ptr(), std::move(e.target)), std::move(e.label), e.rate, 1});
  }
  for (auto& e : aug.rewrites.entries()) {
    out.push_back({std::move(e.target), std::move(e.label), e.rate, 1});
  }
  return out;
}

std::vector<Successor> ordinary_successors(const System& s, std::span<const RewriteRule> rules) {
  std::vector<Successor> out;
  for (const auto* entry : enab_set(s)) {
    const auto& [t, k] = *entry;
    out.push_back({System(s.net_ptr(), fire(t, s.marking())), t.tag.text, t.tag.rate, k});
  }
  for (const auto& r : rules) {
    for (auto& app : rule_app(r, s)) {
      System target = r.normalizes_result ? normalize(app.result) : std::move(app.result);
      out.push_back({std::move(target), r.tag, r.rate, 1});
    }
  }
  return out;
}

/// Shares one Net object among all states with structurally equal nets.
class NetPool {
 public:
  System intern(const System& s) {
    auto& bucket = pool_[s.net().hash()];
    for (const auto& n : bucket) {
      if (n == s.net_ptr()) return s;
      if (*n == s.net()) return System(n, s.marking());
    }
    bucket.push_back(s.net_ptr());
    return s;
  }

 private:
  std::unordered_map<std::size_t, std::vector<NetPtr>> pool_;
};

template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n);
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

using RateCounts = std::map<double, std::uint64_t>;

double total(const RateCounts& counts) {
  double s = 0.0;
  for (const auto& [rate, n] : counts) s += rate * static_cast<double>(n);
  return s;
}

}  // namespace

TransitionSystem explore(const System& initial, std::span<const RewriteRule> rules,
                         const ExploreOptions& options) {
  const bool quotient = options.mode == Mode::quotient;
  NetPool nets;
  std::unordered_map<System, std::uint32_t, SystemHash> index;
  std::vector<System> states;
  std::vector<std::uint32_t> level;
  // Keyed by (src, dst, label) in discovery numbering.
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::string>, RateCounts> edges;

  auto stats = [&] { return ExploreStats{states.size(), edges.size(), level.empty() ? 0 : level.back() + 1}; };

  auto insert = [&](const System& s, std::uint32_t depth) -> std::pair<std::uint32_t, bool> {
    auto it = index.find(s);
    if (it != index.end()) return {it->second, false};
    if (states.size() >= options.state_budget) {
      throw BudgetExceeded("state budget of " + std::to_string(options.state_budget) + " exceeded",
                           stats());
    }
    System stored = nets.intern(s);
    if (options.state_check) options.state_check(stored);
    const auto id = static_cast<std::uint32_t>(states.size());
    index.emplace(stored, id);
    states.push_back(std::move(stored));
    level.push_back(depth);
    return {id, true};
  };

  insert(quotient ? normalize(initial) : initial, 0);
  std::vector<std::uint32_t> frontier{0};
  for (std::uint32_t depth = 1; !frontier.empty(); ++depth) {
    std::vector<std::vector<Successor>> succ(frontier.size());
    parallel_for(frontier.size(), options.workers, [&](std::size_t i) {
      const System& s = states[frontier[i]];
      succ[i] = quotient ? quotient_successors(s, rules) : ordinary_successors(s, rules);
    });

    std::vector<std::uint32_t> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      for (auto& e : succ[i]) {
        const auto [dst, fresh] = insert(e.target, depth);
        if (fresh) next.push_back(dst);
        edges[{frontier[i], dst, std::move(e.label)}][e.rate] += e.count;
      }
      succ[i].clear();
    }
    frontier = std::move(next);
  }

  // Renumber by (level, system_order) so the result does not depend on the
  // discovery order within a level.
  std::vector<std::uint32_t> order(states.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (level[a] != level[b]) return level[a] < level[b];
    return system_order(states[a], states[b]) < 0;
  });
  std::vector<std::uint32_t> rank(states.size());
  for (std::uint32_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

  TransitionSystem ts;
  ts.mode = options.mode;
  ts.states.reserve(states.size());
  ts.level.reserve(states.size());
  for (auto old : order) {
    ts.states.push_back(std::move(states[old]));
    ts.level.push_back(level[old]);
  }
  ts.edges.reserve(edges.size());
  for (const auto& [key, counts] : edges) {
    const auto& [src, dst, label] = key;
    ts.edges.push_back({rank[src], rank[dst], label, total(counts)});
  }
  std::sort(ts.edges.begin(), ts.edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.src, a.dst, a.label) < std::tie(b.src, b.dst, b.label);
  });
  return ts;
}

std::vector<std::uint32_t> final_states(const TransitionSystem& ts) {
  std::vector<bool> has_out(ts.states.size(), false);
  for (const auto& e : ts.edges) has_out[e.src] = true;
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < ts.states.size(); ++i) {
    if (!has_out[i]) out.push_back(i);
  }
  return out;
}

std::vector<std::uint32_t> search_final(const TransitionSystem& ts,
                                        const std::function<bool(const System&)>& pred) {
  std::vector<std::uint32_t> out;
  for (auto i : final_states(ts)) {
    if (pred(ts.states[i])) out.push_back(i);
  }
  return out;
}

void write_states(const TransitionSystem& ts, std::ostream& out) {
  for (const auto& s : ts.states) out << to_line(s) << '\n';
}

void write_edges(const TransitionSystem& ts, std::ostream& out) {
  for (const auto& e : ts.edges) {
    out << e.src << ' ' << e.dst << ' ' << e.label << ' ' << format_rate(e.rate) << '\n';
  }
}

}  // namespace rwspt
