#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rwspt/algebra.hpp"
#include "rwspt/net.hpp"
#include "rwspt/rewrite.hpp"

/// Gracefully degrading production system: N production lines (PLs) of K
/// assembly branches share a warehouse. A branch fault deadlocks its PL, which
/// is then rebuilt as a single-branch degraded PL; a dead degraded PL is
/// dismantled and its items return to the warehouse.
namespace rwspt::ftps {

namespace tags {
inline const std::string kLoad = "ld";
inline const std::string kLine = "ln";
inline const std::string kAssemble = "as";
inline const std::string kFault = "ft";
inline const std::string kBranch = "L";
inline const std::string kProductionLine = "PL";
inline const std::string kDegradedLine = "fPL";
inline const std::string kRebuild = "r1";
inline const std::string kDismantle = "r2";
}  // namespace tags

inline constexpr double kLoadRate = 0.5;
inline constexpr double kLineRate = 0.1;
inline constexpr double kAssembleRate = 2.0;
inline constexpr double kFaultRate = 0.001;
inline constexpr double kRebuildRate = 0.005;
inline constexpr double kDismantleRate = 0.01;

struct Params {
  std::uint32_t n = 1;  ///< production lines
  std::uint32_t k = 2;  ///< branches per line
  std::uint32_t m = 2;  ///< items per branch
};

TransitionTag load_tag();
TransitionTag line_tag();
TransitionTag assemble_tag();
TransitionTag fault_tag();

Place warehouse();

/// One branch: load, line (inhibited by the fault place), assemble, fault.
Net cycle();
Net production_line(std::uint32_t k);
Net npl(std::uint32_t n, std::uint32_t k);
/// npl(n, k) with one token on every PL's fault trigger and k*m items in the
/// warehouse.
System npl_system(const Params& p);

/// Transitions of nominal PL `i` / degraded PL `i`. Throw AlgebraError when
/// the component is absent.
Net nominal_pl(const Net& n, std::uint32_t i);
Net faulty_pl(const Net& n, std::uint32_t i);

/// Degraded single-branch PL under `< "fPL" ; i >`; only its fault trigger is
/// marked.
System faulty_system(std::uint32_t i);

/// Rebuilds a faulted, deadlocked nominal PL as a degraded PL, carrying over
/// its pending items.
RewriteRule rule_rebuild();
/// Removes a dead degraded PL (never the last component), returning its items
/// to the warehouse.
RewriteRule rule_dismantle();
/// The two rules for K = 2; empty otherwise.
std::vector<RewriteRule> rules(const Params& p);

/// Items held in the warehouse and in branch w/a places.
std::uint64_t material(const Marking& m);

/// Exactly one degraded PL remains and it holds all 2*m items in w/a.
std::function<bool(const System&)> absorbing_predicate(std::uint32_t m);

}  // namespace rwspt::ftps
