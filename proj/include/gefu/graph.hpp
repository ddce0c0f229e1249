#pragma once

#include <functional>
#include <vector>

#include "gefu/tensor.hpp"

namespace gefu {

// Reverse-mode tape. Nodes are recorded in forward order, so walking the
// tape backwards is already a topological order and visits each node once.
// Recording and backward are single-threaded per graph.
template <class T>
class GraphT {
 public:
  using BackFn = std::function<void(GraphT&, const TensorT<T>&)>;

  // Registers t as a tracked leaf (parameter or input under test).
  int add_leaf(TensorT<T>& t) {
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{{}, nullptr, t.shape(), true});
    t.set_node(this, id);
    return id;
  }

  int record(std::vector<int> parents, Shape out_shape, BackFn back) {
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{std::move(parents), std::move(back), std::move(out_shape), false});
    return id;
  }

  size_t num_nodes() const { return nodes_.size(); }
  bool consumed() const { return consumed_; }

  // Accumulates a gradient contribution for a node. The first contribution
  // is stored by reference; later ones copy-on-write before the in-place add
  // so aliased buffers are never mutated.
  void add_grad(int node, const TensorT<T>& g) {
    GEFU_CHECK(node >= 0 && node < static_cast<int>(nodes_.size()), "add_grad: bad node");
    GEFU_CHECK(g.shape() == nodes_[static_cast<size_t>(node)].shape,
               "grad shape ", shape_str(g.shape()), " != node shape ",
               shape_str(nodes_[static_cast<size_t>(node)].shape));
    TensorT<T>& slot = grads_[static_cast<size_t>(node)];
    if (!slot.defined()) {
      slot = g;
      return;
    }
    if (slot.data_shared()) slot = slot.clone();
    T* a = slot.data();
    const T* b = g.data();
    int64_t n = slot.size();
    for (int64_t i = 0; i < n; ++i) a[i] += b[i];
  }

  // Runs reverse accumulation from a scalar loss. Gradients of leaves stay
  // available via grad() until reset().
  void backward(const TensorT<T>& loss) {
    GEFU_CHECK(!consumed_, "backward() already ran on this graph; reset() first");
    GEFU_CHECK(loss.tracked() && loss.graph() == this, "backward: loss is not tracked on this graph");
    GEFU_CHECK(loss.size() == 1, "backward: loss must be scalar, got shape ", shape_str(loss.shape()));
    consumed_ = true;
    grads_.assign(nodes_.size(), TensorT<T>());
    add_grad(loss.node(), TensorT<T>::full(loss.shape(), T(1)));
    for (int i = loss.node(); i >= 0; --i) {
      Node& n = nodes_[static_cast<size_t>(i)];
      TensorT<T>& g = grads_[static_cast<size_t>(i)];
      if (!g.defined()) continue;
      if (n.back) {
        n.back(*this, g);
        g = TensorT<T>();  // interior grads are no longer needed
      }
    }
  }

  bool has_grad(const TensorT<T>& t) const {
    return t.tracked() && t.graph() == this &&
           t.node() < static_cast<int>(grads_.size()) &&
           grads_[static_cast<size_t>(t.node())].defined();
  }

  // Gradient of a tracked tensor; zeros if nothing flowed into it.
  TensorT<T> grad(const TensorT<T>& t) const {
    GEFU_CHECK(t.tracked() && t.graph() == this, "grad(): tensor not tracked on this graph");
    if (!has_grad(t)) return TensorT<T>(t.shape());
    return grads_[static_cast<size_t>(t.node())];
  }

  void reset() {
    nodes_.clear();
    grads_.clear();
    consumed_ = false;
  }

 private:
  struct Node {
    std::vector<int> parents;
    BackFn back;
    Shape shape;
    bool leaf;
  };
  std::vector<Node> nodes_;
  std::vector<TensorT<T>> grads_;
  bool consumed_ = false;
};

using Graph = GraphT<float>;
using DGraph = GraphT<double>;

// The graph two operands agree on; errors if they disagree.
template <class T>
inline GraphT<T>* merged_graph(const TensorT<T>& a, const TensorT<T>& b) {
  GraphT<T>* g = a.tracked() ? a.graph() : nullptr;
  GraphT<T>* h = b.tracked() ? b.graph() : nullptr;
  if (g && h) GEFU_CHECK(g == h, "operands recorded on different graphs");
  return g ? g : h;
}

}  // namespace gefu
