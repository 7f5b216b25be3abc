#pragma once

// Highest-label push-relabel maximum flow with gap and global relabeling.
//
// Terminals are implicit: every node has a source capacity (always kept
// saturated, so it shows up as excess) and a residual capacity towards the
// sink. Only the first phase (maximum preflow) is run; it is enough to read
// off a minimum cut. Source capacities can be raised between solves, which
// keeps the current preflow and labels valid (parametric warm start).

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "largesol/errors.hpp"

namespace largesol {

template <std::integral Cap>
class PushRelabel {
 public:
  struct Edge {
    int from;
    int to;
    Cap capacity;  // same capacity in both directions
  };

  /// Relabels allowed per solve(), as a multiple of the node count.
  static constexpr long kRelabelCapFactor = 50;

  PushRelabel(int num_nodes, std::span<const Edge> edges, std::vector<Cap> sink_capacity)
      : n_(num_nodes), sink_res_(std::move(sink_capacity)), excess_(static_cast<std::size_t>(num_nodes), 0) {
    if (static_cast<int>(sink_res_.size()) != n_) {
      throw InvalidInputError("prescribed_curvature", "PushRelabel", "sink capacity size mismatch");
    }
    std::vector<int> degree(static_cast<std::size_t>(n_) + 1, 0);
    for (const Edge& e : edges) {
      ++degree[static_cast<std::size_t>(e.from)];
      ++degree[static_cast<std::size_t>(e.to)];
    }
    first_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (int u = 0; u < n_; ++u) first_[u + 1] = first_[u] + degree[u];
    const std::size_t m = static_cast<std::size_t>(first_[n_]);
    head_.resize(m);
    rev_.resize(m);
    res_.resize(m);
    std::vector<int> fill(first_.begin(), first_.end() - 1);
    for (const Edge& e : edges) {
      const int a = fill[e.from]++;
      const int b = fill[e.to]++;
      head_[a] = e.to;
      head_[b] = e.from;
      rev_[a] = b;
      rev_[b] = a;
      res_[a] = e.capacity;
      res_[b] = e.capacity;
    }
    label_.assign(static_cast<std::size_t>(n_), 0);
    current_.assign(static_cast<std::size_t>(n_), 0);
    bucket_active_.assign(static_cast<std::size_t>(n_) + 2, -1);
    bucket_all_.assign(static_cast<std::size_t>(n_) + 2, -1);
    next_active_.assign(static_cast<std::size_t>(n_), -1);
    next_all_.assign(static_cast<std::size_t>(n_), -1);
    prev_all_.assign(static_cast<std::size_t>(n_), -1);
  }

  int num_nodes() const { return n_; }

  /// Raises the source capacity of every node by delta (>= 0).
  void add_source_capacity(Cap delta) {
    for (int u = 0; u < n_; ++u) add_to_node(u, delta);
  }

  void add_source_capacity(std::span<const Cap> delta) {
    for (int u = 0; u < n_; ++u) add_to_node(u, delta[static_cast<std::size_t>(u)]);
  }

  /// Runs until no node that can still reach the sink carries excess.
  void solve() {
    const long relabel_cap = kRelabelCapFactor * static_cast<long>(std::max(n_, 1));
    long relabels = 0;
    global_relabel();
    const long update_threshold = 6L * n_ + static_cast<long>(head_.size()) / 2;
    long work = 0;
    while (max_active_ >= 1) {
      const int u = bucket_active_[max_active_];
      if (u < 0) {
        --max_active_;
        continue;
      }
      bucket_active_[max_active_] = next_active_[u];
      work += discharge(u, relabels);
      if (relabels > relabel_cap) {
        throw SolverFailureError("prescribed_curvature", "solve_plambda_mincut",
                                 "push-relabel exceeded the relabel cap (" + std::to_string(relabel_cap) + ")");
      }
      if (work > update_threshold) {
        global_relabel();
        work = 0;
      }
    }
  }

  /// Total flow into the sink (value of the minimum cut).
  Cap flow_value() const { return flow_; }

  /// Nodes that cannot reach the sink in the residual graph: the largest
  /// source side among all minimum cuts.
  std::vector<std::uint8_t> source_side() const {
    std::vector<int> dist;
    reverse_bfs(dist);
    std::vector<std::uint8_t> side(static_cast<std::size_t>(n_));
    for (int u = 0; u < n_; ++u) side[u] = dist[u] == kUnreached ? 1 : 0;
    return side;
  }

 private:
  static constexpr int kUnreached = std::numeric_limits<int>::max();

  void add_to_node(int u, Cap delta) {
    const Cap direct = std::min(delta, sink_res_[u]);
    sink_res_[u] -= direct;
    flow_ += direct;
    excess_[u] += delta - direct;
  }

  // Exact distance-to-sink labels in the residual graph.
  void reverse_bfs(std::vector<int>& dist) const {
    dist.assign(static_cast<std::size_t>(n_), kUnreached);
    std::vector<int> queue;
    queue.reserve(static_cast<std::size_t>(n_));
    for (int u = 0; u < n_; ++u) {
      if (sink_res_[u] > 0) {
        dist[u] = 1;
        queue.push_back(u);
      }
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const int u = queue[qi];
      for (int a = first_[u]; a < first_[u + 1]; ++a) {
        const int v = head_[a];
        if (dist[v] == kUnreached && res_[rev_[a]] > 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
  }

  void global_relabel() {
    reverse_bfs(label_);
    std::fill(bucket_active_.begin(), bucket_active_.end(), -1);
    std::fill(bucket_all_.begin(), bucket_all_.end(), -1);
    max_active_ = 0;
    max_label_ = 0;
    for (int u = 0; u < n_; ++u) {
      current_[u] = first_[u];
      if (label_[u] == kUnreached) continue;
      insert_all(u);
      if (excess_[u] > 0) insert_active(u);
    }
  }

  void insert_active(int u) {
    const int d = label_[u];
    next_active_[u] = bucket_active_[d];
    bucket_active_[d] = u;
    max_active_ = std::max(max_active_, d);
  }

  void insert_all(int u) {
    const int d = label_[u];
    prev_all_[u] = -1;
    next_all_[u] = bucket_all_[d];
    if (bucket_all_[d] >= 0) prev_all_[bucket_all_[d]] = u;
    bucket_all_[d] = u;
    max_label_ = std::max(max_label_, d);
  }

  void remove_all(int u) {
    const int d = label_[u];
    if (prev_all_[u] >= 0) {
      next_all_[prev_all_[u]] = next_all_[u];
    } else {
      bucket_all_[d] = next_all_[u];
    }
    if (next_all_[u] >= 0) prev_all_[next_all_[u]] = prev_all_[u];
  }

  // Every node labelled above an emptied level is cut off from the sink.
  void gap(int level) {
    for (int d = level + 1; d <= max_label_; ++d) {
      for (int v = bucket_all_[d]; v >= 0; v = next_all_[v]) label_[v] = kUnreached;
      bucket_all_[d] = -1;
      bucket_active_[d] = -1;
    }
    max_label_ = level - 1;
    if (max_active_ > max_label_) max_active_ = max_label_;
  }

  long discharge(int u, long& relabels) {
    long work = 0;
    while (excess_[u] > 0) {
      const int d = label_[u];
      if (d == 1 && sink_res_[u] > 0) {
        const Cap delta = std::min(excess_[u], sink_res_[u]);
        sink_res_[u] -= delta;
        excess_[u] -= delta;
        flow_ += delta;
        continue;
      }
      int a = current_[u];
      const int end = first_[u + 1];
      for (; a < end; ++a) {
        const int v = head_[a];
        if (res_[a] > 0 && label_[v] == d - 1) {
          const Cap delta = std::min(excess_[u], res_[a]);
          res_[a] -= delta;
          res_[rev_[a]] += delta;
          if (excess_[v] == 0) insert_active(v);
          excess_[v] += delta;
          excess_[u] -= delta;
          if (excess_[u] == 0) break;
        }
      }
      current_[u] = a;
      if (excess_[u] == 0) break;

      // Relabel.
      ++relabels;
      work += 12 + (end - first_[u]);
      remove_all(u);
      if (bucket_all_[d] < 0) {
        label_[u] = kUnreached;
        gap(d);
        break;
      }
      int best = kUnreached;
      for (int b = first_[u]; b < end; ++b) {
        if (res_[b] > 0 && label_[head_[b]] != kUnreached) best = std::min(best, label_[head_[b]] + 1);
      }
      label_[u] = best;
      current_[u] = first_[u];
      if (best == kUnreached || best > n_) {
        label_[u] = kUnreached;
        break;
      }
      insert_all(u);
    }
    return work;
  }

  int n_;
  std::vector<int> first_, head_, rev_;
  std::vector<Cap> res_;
  std::vector<Cap> sink_res_, excess_;
  Cap flow_ = 0;
  std::vector<int> label_, current_;
  std::vector<int> bucket_active_, bucket_all_, next_active_, next_all_, prev_all_;
  int max_active_ = 0;
  int max_label_ = 0;
};

}  // namespace largesol
