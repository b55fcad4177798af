#include "rwspt/net.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <functional>

namespace rwspt {

namespace {

constexpr std::string_view kReserved = "\"<>;()[],.+|";

std::strong_ordering compare_double(double a, double b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

void validate_tag(std::string_view tag) {
  if (tag.empty()) throw InvalidLabel("empty tag");
  for (char c : tag) {
    if (std::isspace(static_cast<unsigned char>(c)) || kReserved.find(c) != std::string_view::npos) {
      throw InvalidLabel("tag contains reserved character: " + std::string(tag));
    }
  }
}

// ---------------------------------------------------------------------------
// Place

Place::Place(std::vector<LabelPair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw InvalidLabel("place label must be non-empty");
  for (const auto& p : pairs_) validate_tag(p.tag);
}

bool Place::contains(const LabelPair& pair) const {
  return std::find(pairs_.begin(), pairs_.end(), pair) != pairs_.end();
}

Place Place::nested_in(const LabelPair& pair) const {
  validate_tag(pair.tag);
  Place out = *this;
  out.pairs_.push_back(pair);
  return out;
}

std::size_t Place::hash() const {
  std::size_t seed = pairs_.size();
  for (const auto& p : pairs_) {
    hash_combine(seed, std::hash<std::string>{}(p.tag));
    hash_combine(seed, p.index);
  }
  return seed;
}

std::strong_ordering compare_root_first(const std::vector<LabelPair>& a,
                                        const std::vector<LabelPair>& b) {
  return std::lexicographical_compare_three_way(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

std::strong_ordering operator<=>(const Place& a, const Place& b) {
  return compare_root_first(a.pairs_, b.pairs_);
}

// ---------------------------------------------------------------------------
// Transitions

TransitionTag::TransitionTag(std::string text_, std::uint32_t priority_, double rate_)
    : text(std::move(text_)), priority(priority_), rate(rate_) {
  validate_tag(text);
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("transition rate must be positive and finite");
  }
}

std::strong_ordering operator<=>(const TransitionTag& a, const TransitionTag& b) {
  if (auto c = a.text <=> b.text; c != 0) return c;
  if (auto c = a.priority <=> b.priority; c != 0) return c;
  return compare_double(a.rate, b.rate);
}

std::strong_ordering operator<=>(const Transition& a, const Transition& b) {
  if (auto c = a.tag <=> b.tag; c != 0) return c;
  if (auto c = a.input <=> b.input; c != 0) return c;
  if (auto c = a.output <=> b.output; c != 0) return c;
  return a.inhibitor <=> b.inhibitor;
}

std::size_t Transition::hash() const {
  std::size_t seed = std::hash<std::string>{}(tag.text);
  hash_combine(seed, tag.priority);
  hash_combine(seed, std::hash<double>{}(tag.rate));
  hash_combine(seed, hash_bag(input));
  hash_combine(seed, hash_bag(output));
  hash_combine(seed, hash_bag(inhibitor));
  return seed;
}

// ---------------------------------------------------------------------------
// Net / System

Net::Net(Bag<Transition> transitions) : transitions_(std::move(transitions)) {
  std::vector<Place> all;
  for (const auto& [t, k] : transitions_) {
    for (const auto* bag : {&t.input, &t.output, &t.inhibitor}) {
      for (const auto& [p, n] : *bag) all.push_back(p);
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  places_ = std::move(all);
  hash_ = hash_bag(transitions_);
}

Net::Net(std::initializer_list<Transition> transitions)
    : Net([&] {
        std::vector<Bag<Transition>::Entry> entries;
        for (const auto& t : transitions) entries.emplace_back(t, 1);
        return Bag<Transition>::from_entries(std::move(entries));
      }()) {}

bool Net::has_place(const Place& p) const {
  return std::binary_search(places_.begin(), places_.end(), p);
}

System::System() : System(std::make_shared<const Net>(), Marking{}) {}

System::System(Net net, Marking marking)
    : System(std::make_shared<const Net>(std::move(net)), std::move(marking)) {}

System::System(NetPtr net, Marking marking) : net_(std::move(net)), marking_(std::move(marking)) {
  if (!net_) throw InvalidSystem("null net");
  // Both sequences are sorted, so a single merge pass checks inclusion.
  const auto& places = net_->places();
  auto it = places.begin();
  for (const auto& [p, k] : marking_) {
    while (it != places.end() && *it < p) ++it;
    if (it == places.end() || !(*it == p)) {
      throw InvalidSystem("marked place not in net: " + to_text(p));
    }
  }
  hash_ = net_->hash();
  hash_combine(hash_, hash_bag(marking_));
}

std::strong_ordering operator<=>(const System& a, const System& b) {
  if (a.net_ != b.net_) {
    if (auto c = *a.net_ <=> *b.net_; c != 0) return c;
  }
  return a.marking_ <=> b.marking_;
}

// ---------------------------------------------------------------------------
// Firing

bool has_concession(const Transition& t, const Marking& m) {
  if (!t.input.leq(m)) return false;
  for (const auto& [p, h] : t.inhibitor) {
    if (m[p] >= h) return false;
  }
  return true;
}

bool enabled(const Transition& t, const System& s) {
  if (!has_concession(t, s.marking())) return false;
  for (const auto& [other, k] : s.net().transitions()) {
    if (other.tag.priority > t.tag.priority && has_concession(other, s.marking())) return false;
  }
  return true;
}

Marking fire(const Transition& t, const Marking& m) {
  if (!has_concession(t, m)) throw NotEnabled("transition not enabled: " + to_text(t));
  return (m - t.input) + t.output;
}

std::vector<const Net::Entry*> enab_set(const System& s) {
  std::vector<const Net::Entry*> out;
  std::uint32_t top = 0;
  for (const auto& entry : s.net().transitions()) {
    if (!has_concession(entry.first, s.marking())) continue;
    const auto prio = entry.first.tag.priority;
    if (out.empty() || prio > top) {
      if (prio > top) out.clear();
      top = prio;
      out.push_back(&entry);
    } else if (prio == top) {
      out.push_back(&entry);
    }
  }
  return out;
}

bool dead(const Net& n, const Marking& m) {
  for (const auto& [t, k] : n.transitions()) {
    if (has_concession(t, m)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Rendering

std::string format_rate(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string to_text(const LabelPair& pair) {
  return "< \"" + pair.tag + "\" ; " + std::to_string(pair.index) + " >";
}

std::string to_text(const Place& p) {
  std::string out = "p(";
  bool first = true;
  for (const auto& pair : p.pairs()) {
    if (!first) out += ' ';
    first = false;
    out += to_text(pair);
  }
  out += ')';
  return out;
}

std::string to_text(const Marking& m) {
  return to_text(m, [](const Place& p) { return to_text(p); });
}

std::string to_text(const TransitionTag& tag) {
  return "<< \"" + tag.text + "\", " + std::to_string(tag.priority) + ", " + format_rate(tag.rate) +
         " >>";
}

std::string to_text(const Transition& t) {
  return "[" + to_text(t.input) + ", " + to_text(t.output) + ", " + to_text(t.inhibitor) +
         "] |-> " + to_text(t.tag);
}

namespace {

std::string join_net(const Net& n, std::string_view sep) {
  if (n.empty()) return "emptyN";
  std::string out;
  bool first = true;
  for (const auto& [t, k] : n.transitions()) {
    const std::string line = to_text(t);
    for (Multiplicity i = 0; i < k; ++i) {
      if (!first) out += sep;
      first = false;
      out += line;
    }
  }
  return out;
}

}  // namespace

std::string to_text(const Net& n) { return join_net(n, " ;\n"); }

std::string to_text(const System& s) { return to_text(s.net()) + "\n\n" + to_text(s.marking()); }

std::string to_line(const System& s) {
  return join_net(s.net(), " ; ") + " || " + to_text(s.marking());
}

}  // namespace rwspt
