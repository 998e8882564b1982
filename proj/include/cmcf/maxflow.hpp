#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <vector>

namespace cmcf {

// Boykov-Kolmogorov augmenting-path max-flow on integer capacities, with
// residual reachability queries for extracting the extreme minimum cuts.
//
// Node i is on the source side of a cut when it belongs to the set being
// minimised for; add_terminal(i, s, t) charges s when i ends on the sink side
// and t when it ends on the source side.
class MaxFlow {
 public:
  using Cap = std::int64_t;

  explicit MaxFlow(std::size_t nodes, std::size_t expected_edges = 0);

  std::size_t nodes() const { return tr_cap_.size(); }

  void add_terminal(std::size_t i, Cap source_cap, Cap sink_cap);
  // Arc i -> j with capacity cap and j -> i with capacity rev_cap.
  void add_edge(std::size_t i, std::size_t j, Cap cap, Cap rev_cap);

  Cap solve();

  // After solve(): nodes reachable from the source in the residual graph
  // (the smallest minimum cut) ...
  std::vector<std::uint8_t> source_reachable() const;
  // ... and nodes that can still reach the sink (the complement of the
  // largest minimum cut).
  std::vector<std::uint8_t> sink_coreachable() const;

  std::size_t augmentations() const { return augmentations_; }

 private:
  static constexpr std::int32_t kNone = -1;
  static constexpr std::int32_t kTerminal = -2;
  static constexpr std::int32_t kOrphan = -3;

  void set_active(std::int32_t i);
  std::int32_t next_active();
  void augment(std::int32_t middle);
  void process_orphan(std::int32_t i, bool sink_tree);

  // Nodes.
  std::vector<std::int32_t> first_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int64_t> ts_;
  std::vector<std::int32_t> dist_;
  std::vector<std::uint8_t> is_sink_;
  std::vector<std::uint8_t> in_active_;
  std::vector<Cap> tr_cap_;
  // Arcs; arc a and a ^ 1 are sisters.
  std::vector<std::int32_t> head_;
  std::vector<std::int32_t> next_;
  std::vector<Cap> r_cap_;

  std::deque<std::int32_t> active_;
  std::deque<std::int32_t> orphans_;
  std::int64_t time_ = 0;
  Cap flow_ = 0;
  std::size_t augmentations_ = 0;
  bool solved_ = false;
};

}  // namespace cmcf
