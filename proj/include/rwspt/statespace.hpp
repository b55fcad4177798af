#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwspt/net.hpp"
#include "rwspt/rewrite.hpp"

namespace rwspt {

enum class Mode { ordinary, quotient };

const char* to_string(Mode m);
Mode parse_mode(const std::string& text);

struct Edge {
  std::uint32_t src;
  std::uint32_t dst;
  std::string label;
  double rate;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct ExploreStats {
  std::size_t states = 0;
  std::size_t edges = 0;
  std::size_t levels = 0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, ExploreStats partial)
      : std::runtime_error(what), stats(partial) {}
  ExploreStats stats;
};

struct ExploreOptions {
  Mode mode = Mode::quotient;
  std::size_t state_budget = 5'000'000;
  unsigned workers = 1;
  /// Called once for every stored state; may throw to abort exploration.
  std::function<void(const System&)> state_check;
};

struct TransitionSystem {
  Mode mode = Mode::quotient;
  std::vector<System> states;  ///< index 0 is the initial state
  std::vector<std::uint32_t> level;  ///< BFS depth per state
  std::vector<Edge> edges;  ///< sorted by (src, dst, label), no duplicates
};

/// Breadth-first fixed point from `initial`. Quotient mode stores normal forms
/// and aggregates edges per (target class, label); ordinary mode stores states
/// verbatim with one contribution per transition instance or rule match.
/// States are numbered by BFS level, then system_order.
TransitionSystem explore(const System& initial, std::span<const RewriteRule> rules,
                         const ExploreOptions& options = {});

/// States without outgoing edges, ascending.
std::vector<std::uint32_t> final_states(const TransitionSystem& ts);

std::vector<std::uint32_t> search_final(const TransitionSystem& ts,
                                        const std::function<bool(const System&)>& pred);

void write_states(const TransitionSystem& ts, std::ostream& out);
void write_edges(const TransitionSystem& ts, std::ostream& out);

}  // namespace rwspt
