#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "errors.hpp"
#include "packing.hpp"

namespace bcasc {

struct Neighbor {
    int index = -1;   ///< point index into the RotationSet
    double d2 = 0.0;  ///< squared distance to the query
};

/// Sorted ascending by (d2, index).
using NeighborList = std::vector<Neighbor>;

/// |approx ∩ exact| / K for two lists of the same length K.
inline double recall(const NeighborList& approx, const NeighborList& exact) {
    if (approx.size() != exact.size()) throw LengthMismatchError();
    if (exact.empty()) return 1.0;
    std::vector<int> a, b;
    a.reserve(approx.size());
    b.reserve(exact.size());
    for (const auto& e : approx) a.push_back(e.index);
    for (const auto& e : exact) b.push_back(e.index);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<int> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    return static_cast<double>(both.size()) / static_cast<double>(exact.size());
}

namespace detail {

struct NeighborWorse {
    bool operator()(const Neighbor& a, const Neighbor& b) const {
        return a.d2 != b.d2 ? a.d2 < b.d2 : a.index < b.index;
    }
};

/// Push into a bounded max-heap keyed by (d2, index).
inline void heap_offer(std::vector<Neighbor>& heap, int k, const Neighbor& cand) {
    NeighborWorse worse;
    if (static_cast<int>(heap.size()) < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end(), worse);
    } else if (worse(cand, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), worse);
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end(), worse);
    }
}

inline void check_candidates(const RotationSet& set, int k, int exclude_owner) {
    if (k < 1) throw InsufficientCandidatesError("knn search requires k >= 1");
    int available = set.size();
    if (exclude_owner >= 0 && exclude_owner < set.codewords()) available -= set.rotations();
    if (k > available)
        throw InsufficientCandidatesError("requested " + std::to_string(k) + " neighbors, only " +
                                          std::to_string(available) + " candidates");
}

}  // namespace detail

/// Exact K nearest by linear scan; same distance function and tie rules as the
/// tree search, so equal inputs give bitwise-equal lists. Preferable when the
/// set is small or the packed dimension too high for a tree to prune.
inline void brute_knn_search(const RotationSet& set, const double* query, int k, int exclude_owner,
                             NeighborList& out) {
    detail::check_candidates(set, k, exclude_owner);
    out.clear();
    const bool excl = exclude_owner >= 0 && exclude_owner < set.codewords();
    const int eb = excl ? exclude_owner * set.rotations() : set.size();
    const int ee = excl ? eb + set.rotations() : set.size();
    for (int i = 0; i < eb; ++i)
        detail::heap_offer(out, k, {i, sqdist(query, set.point(i), set.dim())});
    for (int i = ee; i < set.size(); ++i)
        detail::heap_offer(out, k, {i, sqdist(query, set.point(i), set.dim())});
    std::sort(out.begin(), out.end(), detail::NeighborWorse{});
}

inline void brute_radius_search(const RotationSet& set, const double* query, double radius,
                                int exclude_owner, NeighborList& out) {
    if (radius < 0.0) throw InsufficientCandidatesError("radius search requires radius >= 0");
    out.clear();
    const double r2 = radius * radius;
    const bool excl = exclude_owner >= 0 && exclude_owner < set.codewords();
    const int eb = excl ? exclude_owner * set.rotations() : set.size();
    const int ee = excl ? eb + set.rotations() : set.size();
    for (int i = 0; i < set.size(); ++i) {
        if (i == eb && ee > eb) {
            i = ee - 1;
            continue;
        }
        double d2 = sqdist(query, set.point(i), set.dim());
        if (d2 <= r2) out.push_back({i, d2});
    }
    std::sort(out.begin(), out.end(), detail::NeighborWorse{});
}

/// k-d tree over the packed points of a RotationSet. Nodes split on the widest
/// dimension at the median and store their exact bounding box, so cell lower
/// bounds never overestimate. Queries run best-bin-first over a branch queue;
/// an optional budget caps the number of leaves visited. Unbudgeted queries
/// are exact. Ties are broken by (squared distance, point index).
class NnIndex {
  public:
    explicit NnIndex(const RotationSet& set, int leaf_capacity = 16) { rebuild(set, leaf_capacity); }

    /// Rebuild over (possibly new) points, reusing internal storage.
    void rebuild(const RotationSet& set, int leaf_capacity = 16) {
        set_ = &set;
        dim_ = set.dim();
        leaf_capacity_ = std::max(1, leaf_capacity);
        leaf_count_ = 0;
        nodes_.clear();
        boxes_.clear();
        const int count = set.size();
        idx_.resize(count);
        for (int i = 0; i < count; ++i) idx_[i] = i;
        if (count > 0) root_ = build(0, count);
    }

    int leaf_count() const { return leaf_count_; }
    const RotationSet& set() const { return *set_; }

    /// K nearest points, excluding every rotation of `exclude_owner`
    /// (pass -1 to disable). max_leaf_visits < 0 means exhaustive (exact);
    /// otherwise leaves are visited best-bin-first until the budget runs out.
    /// Both modes agree exactly when the budget covers every leaf.
    void knn_search_into(const double* query, int k, int exclude_owner, long max_leaf_visits,
                         NeighborList& out, long* leaves_visited_out = nullptr) const {
        detail::check_candidates(*set_, k, exclude_owner);
        out.clear();
        const bool excl = exclude_owner >= 0 && exclude_owner < set_->codewords();
        const int eb = excl ? exclude_owner * set_->rotations() : set_->size();
        const int ee = excl ? eb + set_->rotations() : set_->size();
        long visited = 0;
        if (max_leaf_visits < 0) {
            knn_dfs(root_, box_mindist(root_, query), query, k, eb, ee, out, visited);
        } else {
            std::priority_queue<Branch, std::vector<Branch>, BranchOrder> pending;
            pending.push({box_mindist(root_, query), root_});
            while (!pending.empty()) {
                Branch br = pending.top();
                pending.pop();
                if (static_cast<int>(out.size()) == k && br.mindist > out.front().d2) break;
                if (visited >= max_leaf_visits) break;
                int node = br.node;
                // descend to the nearest leaf, queueing the farther child of each split
                while (nodes_[node].left >= 0) {
                    const Node& nd = nodes_[node];
                    double dl = box_mindist(nd.left, query);
                    double dr = box_mindist(nd.right, query);
                    int near = nd.left, far = nd.right;
                    double dnear = dl, dfar = dr;
                    if (dr < dl) {
                        near = nd.right;
                        far = nd.left;
                        std::swap(dnear, dfar);
                    }
                    if (static_cast<int>(out.size()) < k || dfar <= out.front().d2)
                        pending.push({dfar, far});
                    if (static_cast<int>(out.size()) == k && dnear > out.front().d2) {
                        node = -1;
                        break;
                    }
                    node = near;
                }
                if (node < 0) continue;
                scan_leaf(node, query, k, eb, ee, out);
                ++visited;
            }
        }
        if (leaves_visited_out) *leaves_visited_out = visited;
        std::sort(out.begin(), out.end(), detail::NeighborWorse{});
    }

    NeighborList knn_search(const double* query, int k, int exclude_owner,
                            long max_leaf_visits = -1, long* leaves_visited_out = nullptr) const {
        NeighborList out;
        knn_search_into(query, k, exclude_owner, max_leaf_visits, out, leaves_visited_out);
        return out;
    }

    /// All points with distance <= radius, excluding rotations of
    /// exclude_owner. Always exact; may return an empty list.
    void radius_search_into(const double* query, double radius, int exclude_owner,
                            NeighborList& out) const {
        if (radius < 0.0) throw InsufficientCandidatesError("radius_search requires radius >= 0");
        out.clear();
        const bool excl = exclude_owner >= 0 && exclude_owner < set_->codewords();
        const int eb = excl ? exclude_owner * set_->rotations() : set_->size();
        const int ee = excl ? eb + set_->rotations() : set_->size();
        radius_visit(root_, query, radius * radius, eb, ee, out);
        std::sort(out.begin(), out.end(), detail::NeighborWorse{});
    }

    NeighborList radius_search(const double* query, double radius, int exclude_owner) const {
        NeighborList out;
        radius_search_into(query, radius, exclude_owner, out);
        return out;
    }

  private:
    struct Node {
        int left = -1, right = -1;  // children; leaf iff left < 0
        int begin = 0, end = 0;     // leaf range into idx_
    };
    struct Branch {
        double mindist;
        int node;
    };
    struct BranchOrder {
        bool operator()(const Branch& a, const Branch& b) const {
            return a.mindist != b.mindist ? a.mindist > b.mindist : a.node > b.node;
        }
    };

    int build(int lo, int hi) {
        int id = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        boxes_.resize(boxes_.size() + 2 * static_cast<std::size_t>(dim_));
        double* bmin = box_min(id);
        double* bmax = box_max(id);
        for (int j = 0; j < dim_; ++j) {
            bmin[j] = std::numeric_limits<double>::infinity();
            bmax[j] = -std::numeric_limits<double>::infinity();
        }
        for (int t = lo; t < hi; ++t) {
            const double* p = set_->point(idx_[t]);
            for (int j = 0; j < dim_; ++j) {
                bmin[j] = std::min(bmin[j], p[j]);
                bmax[j] = std::max(bmax[j], p[j]);
            }
        }
        int split_dim = 0;
        double spread = -1.0;
        for (int j = 0; j < dim_; ++j) {
            double s = bmax[j] - bmin[j];
            if (s > spread) {
                spread = s;
                split_dim = j;
            }
        }
        if (hi - lo <= leaf_capacity_ || spread <= 0.0) {
            nodes_[id].begin = lo;
            nodes_[id].end = hi;
            ++leaf_count_;
            return id;
        }
        int mid = lo + (hi - lo) / 2;
        std::nth_element(idx_.begin() + lo, idx_.begin() + mid, idx_.begin() + hi,
                         [&](int a, int b) { return set_->point(a)[split_dim] < set_->point(b)[split_dim]; });
        int left = build(lo, mid);
        int right = build(mid, hi);
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    double* box_min(int id) { return boxes_.data() + 2 * static_cast<std::size_t>(dim_) * id; }
    double* box_max(int id) { return box_min(id) + dim_; }
    const double* box_min(int id) const { return boxes_.data() + 2 * static_cast<std::size_t>(dim_) * id; }
    const double* box_max(int id) const { return box_min(id) + dim_; }

    double box_mindist(int id, const double* q) const {
        const double* bmin = box_min(id);
        const double* bmax = box_max(id);
        double s = 0.0;
        for (int j = 0; j < dim_; ++j) {
            double d = 0.0;
            if (q[j] < bmin[j])
                d = bmin[j] - q[j];
            else if (q[j] > bmax[j])
                d = q[j] - bmax[j];
            s += d * d;
        }
        return s;
    }

    void scan_leaf(int id, const double* q, int k, int eb, int ee, NeighborList& out) const {
        const Node& nd = nodes_[id];
        for (int t = nd.begin; t < nd.end; ++t) {
            int pi = idx_[t];
            if (pi >= eb && pi < ee) continue;
            detail::heap_offer(out, k, {pi, sqdist(q, set_->point(pi), dim_)});
        }
    }

    void knn_dfs(int id, double mindist, const double* q, int k, int eb, int ee, NeighborList& out,
                 long& visited) const {
        if (static_cast<int>(out.size()) == k && mindist > out.front().d2) return;
        const Node& nd = nodes_[id];
        if (nd.left < 0) {
            scan_leaf(id, q, k, eb, ee, out);
            ++visited;
            return;
        }
        double dl = box_mindist(nd.left, q);
        double dr = box_mindist(nd.right, q);
        if (dl <= dr) {
            knn_dfs(nd.left, dl, q, k, eb, ee, out, visited);
            knn_dfs(nd.right, dr, q, k, eb, ee, out, visited);
        } else {
            knn_dfs(nd.right, dr, q, k, eb, ee, out, visited);
            knn_dfs(nd.left, dl, q, k, eb, ee, out, visited);
        }
    }

    void radius_visit(int id, const double* q, double r2, int eb, int ee, NeighborList& out) const {
        if (box_mindist(id, q) > r2) return;
        const Node& nd = nodes_[id];
        if (nd.left < 0) {
            for (int t = nd.begin; t < nd.end; ++t) {
                int pi = idx_[t];
                if (pi >= eb && pi < ee) continue;
                double d2 = sqdist(q, set_->point(pi), dim_);
                if (d2 <= r2) out.push_back({pi, d2});
            }
            return;
        }
        radius_visit(nd.left, q, r2, eb, ee, out);
        radius_visit(nd.right, q, r2, eb, ee, out);
    }

    const RotationSet* set_;
    int dim_;
    int leaf_capacity_;
    int root_ = 0;
    int leaf_count_ = 0;
    std::vector<int> idx_;
    std::vector<Node> nodes_;
    std::vector<double> boxes_;
};

}  // namespace bcasc
