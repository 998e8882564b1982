#include "cmcf/maxflow.hpp"

#include <algorithm>
#include <limits>

#include "cmcf/error.hpp"

namespace cmcf {

MaxFlow::MaxFlow(std::size_t nodes, std::size_t expected_edges)
    : first_(nodes, kNone),
      parent_(nodes, kNone),
      ts_(nodes, 0),
      dist_(nodes, 0),
      is_sink_(nodes, 0),
      in_active_(nodes, 0),
      tr_cap_(nodes, 0) {
  require(nodes < static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()),
          "MaxFlow: too many nodes");
  head_.reserve(2 * expected_edges);
  next_.reserve(2 * expected_edges);
  r_cap_.reserve(2 * expected_edges);
}

void MaxFlow::add_terminal(std::size_t i, Cap source_cap, Cap sink_cap) {
  const Cap delta = tr_cap_[i];
  if (delta > 0)
    source_cap += delta;
  else
    sink_cap -= delta;
  flow_ += std::min(source_cap, sink_cap);
  tr_cap_[i] = source_cap - sink_cap;
}

void MaxFlow::add_edge(std::size_t i, std::size_t j, Cap cap, Cap rev_cap) {
  require(i != j, "MaxFlow: self loop");
  require(cap >= 0 && rev_cap >= 0, "MaxFlow: negative capacity");
  require(head_.size() + 2 < static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()),
          "MaxFlow: too many arcs");
  const auto a = static_cast<std::int32_t>(head_.size());
  head_.push_back(static_cast<std::int32_t>(j));
  next_.push_back(first_[i]);
  r_cap_.push_back(cap);
  first_[i] = a;
  head_.push_back(static_cast<std::int32_t>(i));
  next_.push_back(first_[j]);
  r_cap_.push_back(rev_cap);
  first_[j] = a + 1;
}

void MaxFlow::set_active(std::int32_t i) {
  if (in_active_[i]) return;
  in_active_[i] = 1;
  active_.push_back(i);
}

std::int32_t MaxFlow::next_active() {
  while (!active_.empty()) {
    const std::int32_t i = active_.front();
    active_.pop_front();
    in_active_[i] = 0;
    if (parent_[i] != kNone) return i;
  }
  return kNone;
}

void MaxFlow::augment(std::int32_t middle) {
  Cap bottleneck = r_cap_[middle];
  std::int32_t i;
  // Source tree: flow runs parent -> child, i.e. along sister(parent arc).
  for (i = head_[middle ^ 1];; i = head_[parent_[i]]) {
    const std::int32_t a = parent_[i];
    if (a == kTerminal) break;
    bottleneck = std::min(bottleneck, r_cap_[a ^ 1]);
  }
  bottleneck = std::min(bottleneck, tr_cap_[i]);
  // Sink tree: flow runs child -> parent.
  for (i = head_[middle];; i = head_[parent_[i]]) {
    const std::int32_t a = parent_[i];
    if (a == kTerminal) break;
    bottleneck = std::min(bottleneck, r_cap_[a]);
  }
  bottleneck = std::min(bottleneck, -tr_cap_[i]);

  r_cap_[middle ^ 1] += bottleneck;
  r_cap_[middle] -= bottleneck;
  for (i = head_[middle ^ 1];; ) {
    const std::int32_t a = parent_[i];
    if (a == kTerminal) break;
    r_cap_[a] += bottleneck;
    r_cap_[a ^ 1] -= bottleneck;
    const std::int32_t up = head_[a];
    if (r_cap_[a ^ 1] == 0) {
      parent_[i] = kOrphan;
      orphans_.push_front(i);
    }
    i = up;
  }
  tr_cap_[i] -= bottleneck;
  if (tr_cap_[i] == 0) {
    parent_[i] = kOrphan;
    orphans_.push_front(i);
  }
  for (i = head_[middle];; ) {
    const std::int32_t a = parent_[i];
    if (a == kTerminal) break;
    r_cap_[a ^ 1] += bottleneck;
    r_cap_[a] -= bottleneck;
    const std::int32_t up = head_[a];
    if (r_cap_[a] == 0) {
      parent_[i] = kOrphan;
      orphans_.push_front(i);
    }
    i = up;
  }
  tr_cap_[i] += bottleneck;
  if (tr_cap_[i] == 0) {
    parent_[i] = kOrphan;
    orphans_.push_front(i);
  }
  flow_ += bottleneck;
  ++augmentations_;
}

void MaxFlow::process_orphan(std::int32_t i, bool sink_tree) {
  constexpr std::int32_t kInfDist = std::numeric_limits<std::int32_t>::max();
  std::int32_t best_arc = kNone;
  std::int32_t best_dist = kInfDist;

  for (std::int32_t a0 = first_[i]; a0 != kNone; a0 = next_[a0]) {
    // Residual capacity from the candidate parent towards i (source tree) or
    // from i towards the candidate parent (sink tree).
    const Cap cap = sink_tree ? r_cap_[a0] : r_cap_[a0 ^ 1];
    if (cap == 0) continue;
    std::int32_t j = head_[a0];
    if (static_cast<bool>(is_sink_[j]) != sink_tree || parent_[j] == kNone) continue;
    // Walk to the root to check that j is connected to a terminal.
    std::int32_t d = 0;
    for (;;) {
      if (ts_[j] == time_) {
        d += dist_[j];
        break;
      }
      const std::int32_t a = parent_[j];
      ++d;
      if (a == kTerminal) {
        ts_[j] = time_;
        dist_[j] = 1;
        break;
      }
      if (a == kOrphan) {
        d = kInfDist;
        break;
      }
      j = head_[a];
    }
    if (d < kInfDist) {
      if (d < best_dist) {
        best_arc = a0;
        best_dist = d;
      }
      for (j = head_[a0]; ts_[j] != time_; j = head_[parent_[j]]) {
        ts_[j] = time_;
        dist_[j] = d--;
      }
    }
  }

  parent_[i] = best_arc;
  if (best_arc != kNone) {
    ts_[i] = time_;
    dist_[i] = best_dist + 1;
    return;
  }
  // i becomes free; its children become orphans, neighbours that could
  // re-grow into it become active.
  for (std::int32_t a0 = first_[i]; a0 != kNone; a0 = next_[a0]) {
    const std::int32_t j = head_[a0];
    const std::int32_t a = parent_[j];
    if (static_cast<bool>(is_sink_[j]) != sink_tree || a == kNone) continue;
    const Cap cap = sink_tree ? r_cap_[a0] : r_cap_[a0 ^ 1];
    if (cap > 0) set_active(j);
    if (a != kTerminal && a != kOrphan && head_[a] == i) {
      parent_[j] = kOrphan;
      orphans_.push_back(j);
    }
  }
}

MaxFlow::Cap MaxFlow::solve() {
  require(!solved_, "MaxFlow: solve() called twice");
  solved_ = true;
  const auto n = static_cast<std::int32_t>(nodes());
  for (std::int32_t i = 0; i < n; ++i) {
    ts_[i] = 0;
    if (tr_cap_[i] != 0) {
      is_sink_[i] = tr_cap_[i] < 0;
      parent_[i] = kTerminal;
      dist_[i] = 1;
      set_active(i);
    } else {
      parent_[i] = kNone;
    }
  }

  std::int32_t current = kNone;
  for (;;) {
    std::int32_t i = current;
    if (i != kNone) {
      in_active_[i] = 0;
      if (parent_[i] == kNone) i = kNone;
    }
    if (i == kNone) {
      i = next_active();
      if (i == kNone) break;
    }

    std::int32_t middle = kNone;
    if (!is_sink_[i]) {
      for (std::int32_t a0 = first_[i]; a0 != kNone; a0 = next_[a0]) {
        if (r_cap_[a0] == 0) continue;
        const std::int32_t j = head_[a0];
        if (parent_[j] == kNone) {
          is_sink_[j] = 0;
          parent_[j] = a0 ^ 1;
          ts_[j] = ts_[i];
          dist_[j] = dist_[i] + 1;
          set_active(j);
        } else if (is_sink_[j]) {
          middle = a0;
          break;
        } else if (ts_[j] <= ts_[i] && dist_[j] > dist_[i]) {
          parent_[j] = a0 ^ 1;
          ts_[j] = ts_[i];
          dist_[j] = dist_[i] + 1;
        }
      }
    } else {
      for (std::int32_t a0 = first_[i]; a0 != kNone; a0 = next_[a0]) {
        if (r_cap_[a0 ^ 1] == 0) continue;
        const std::int32_t j = head_[a0];
        if (parent_[j] == kNone) {
          is_sink_[j] = 1;
          parent_[j] = a0 ^ 1;
          ts_[j] = ts_[i];
          dist_[j] = dist_[i] + 1;
          set_active(j);
        } else if (!is_sink_[j]) {
          middle = a0 ^ 1;
          break;
        } else if (ts_[j] <= ts_[i] && dist_[j] > dist_[i]) {
          parent_[j] = a0 ^ 1;
          ts_[j] = ts_[i];
          dist_[j] = dist_[i] + 1;
        }
      }
    }

    ++time_;
    if (middle != kNone) {
      // Keep growing from i on the next iteration.
      in_active_[i] = 1;
      current = i;
      augment(middle);
      while (!orphans_.empty()) {
        const std::int32_t o = orphans_.front();
        orphans_.pop_front();
        process_orphan(o, is_sink_[o] != 0);
      }
    } else {
      current = kNone;
    }
  }
  return flow_;
}

std::vector<std::uint8_t> MaxFlow::source_reachable() const {
  require(solved_, "MaxFlow: solve() first");
  const auto n = nodes();
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<std::int32_t> stack;
  for (std::size_t i = 0; i < n; ++i)
    if (tr_cap_[i] > 0) {
      seen[i] = 1;
      stack.push_back(static_cast<std::int32_t>(i));
    }
  while (!stack.empty()) {
    const std::int32_t i = stack.back();
    stack.pop_back();
    for (std::int32_t a = first_[i]; a != kNone; a = next_[a]) {
      const std::int32_t j = head_[a];
      if (r_cap_[a] > 0 && !seen[j]) {
        seen[j] = 1;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

std::vector<std::uint8_t> MaxFlow::sink_coreachable() const {
  require(solved_, "MaxFlow: solve() first");
  const auto n = nodes();
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<std::int32_t> stack;
  for (std::size_t i = 0; i < n; ++i)
    if (tr_cap_[i] < 0) {
      seen[i] = 1;
      stack.push_back(static_cast<std::int32_t>(i));
    }
  while (!stack.empty()) {
    const std::int32_t i = stack.back();
    stack.pop_back();
    for (std::int32_t a = first_[i]; a != kNone; a = next_[a]) {
      const std::int32_t j = head_[a];
      if (r_cap_[a ^ 1] > 0 && !seen[j]) {
        seen[j] = 1;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace cmcf
