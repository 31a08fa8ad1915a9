#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "flowloc/ir.hpp"

namespace flowloc {

/// Inclusive bounds applied to every integer variable.
struct DomainConfig {
  int64_t lo = -32768;
  int64_t hi = 32767;

  /// Largest magnitude accepted for either bound.
  static constexpr int64_t kMaxMagnitude = int64_t{1} << 40;

  /// Throws Error when lo > hi or a bound is out of range.
  void validate() const;
  bool contains(int64_t v) const { return lo <= v && v <= hi; }
};

enum class SelectorState { Free, Enabled, Disabled };

/// Boolean guard of one soft constraint: enabled enforces it, disabled drops
/// it, free lets the search decide.
struct Selector {
  int constraint_id = 0;
  int var = -1;  // solver-internal variable index
};

struct CheckResult {
  bool sat = false;
  Model model;
  /// Constraint ids of the selectors that are disabled in the model.
  std::vector<int> disabled;
};

struct SolverStats {
  uint64_t checks = 0;
  uint64_t propagations = 0;  // domain reductions
  uint64_t assertions = 0;
  uint64_t search_nodes = 0;
};

/// Incremental decision procedure for linear integer formulas over a finite
/// box. Bounds propagation plus depth-first search: free selectors first
/// (enabled before disabled), then open disjunctions, then integer variables
/// (smallest domain first, smallest value first).
///
/// Root-level domains are propagated eagerly on every assertion and recorded
/// on a trail, so that pop() restores exactly the state of the matching
/// push(). Statistics are never rolled back.
class Solver {
 public:
  explicit Solver(DomainConfig domain = {});

  /// Opens a frame and returns its id (the new depth).
  int push();
  /// Restores the state from before push() returned `frame`. Throws Error on
  /// the base frame or a frame that is not live.
  void pop(int frame);
  int depth() const { return static_cast<int>(frames_.size()); }

  void assert_hard(const Formula& f);
  /// Adds `c.formula` guarded by a fresh free selector.
  Selector assert_soft(const Constraint& c);
  void set_selector(const Selector& s, SelectorState state);
  SelectorState selector_state(const Selector& s) const;
  /// At most `k` of `selectors` may be disabled.
  void assert_at_most_disabled(std::span<const Selector> selectors, int k);
  /// At least one of `selectors` must stay enabled.
  void assert_at_least_one_enabled(std::span<const Selector> selectors);

  CheckResult check();

  const SolverStats& stats() const { return stats_; }
  const DomainConfig& domain() const { return domain_; }

 private:
  struct Interval {
    int64_t lo;
    int64_t hi;
    bool fixed() const { return lo == hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
  };
  using Domains = std::vector<Interval>;

  enum class Rel { Le, Eq, Ne };  // sum(terms) + constant REL 0
  struct Node {
    enum class Kind { True, False, Atom, And, Or };
    Kind kind = Kind::True;
    Rel rel = Rel::Le;
    std::vector<std::pair<int, int64_t>> terms;
    int64_t constant = 0;
    int64_t gcd = 0;  // of the coefficients, for Eq/Ne
    std::vector<Node> kids;
  };
  struct Item {
    int guard = -1;  // selector variable, or -1 for hard items
    Node node;
  };
  enum class Status { False, Unknown, True };

  struct Frame {
    std::size_t vars;
    std::size_t items;
    std::size_t selectors;
    std::size_t trail;
    bool conflict;
  };

  struct SearchState {
    Domains domains;
    std::vector<const Node*> forced;       // disjuncts chosen by splits
    std::vector<const Node*> split_nodes;  // disjunctions already split
  };

  int variable(const SsaName& name);
  int new_var(Interval dom, bool selector);
  Node compile(const Formula& f);
  Node compile_atom(const Formula& atom);
  void add_item(Item item);
  void root_propagate();

  Status status(const Node& n, const Domains& d) const;
  bool propagate_node(const Node& n, Domains& d, bool& changed);
  bool propagate_linear(const Node& n, int sign, Domains& d, bool& changed);
  bool propagate_ne(const Node& n, Domains& d, bool& changed);
  bool propagate_all(Domains& d, const std::vector<const Node*>& forced);
  bool narrow(Domains& d, int var, int64_t lo, int64_t hi, bool& changed);
  const Node* find_split(const Node& n, const SearchState& s) const;
  bool search(SearchState& s);

  DomainConfig domain_;
  std::vector<Interval> root_;
  std::vector<SsaName> names_;  // per variable; selectors use an empty base
  std::vector<bool> is_selector_;
  std::map<SsaName, int> index_;
  std::vector<Item> items_;
  std::vector<Selector> selectors_;
  std::vector<std::pair<int, Interval>> trail_;
  std::vector<Frame> frames_;
  bool conflict_ = false;
  SolverStats stats_;
};

}  // namespace flowloc
