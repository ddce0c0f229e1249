#pragma once

#include <cstring>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "gefu/common.hpp"

namespace gefu {

using Shape = std::vector<int64_t>;

inline int64_t shape_numel(const Shape& s) {
  int64_t n = 1;
  for (int64_t e : s) n *= e;
  return n;
}

inline std::string shape_str(const Shape& s) {
  std::string r = "[";
  for (size_t i = 0; i < s.size(); ++i) r += (i ? "," : "") + std::to_string(s[i]);
  return r + "]";
}

inline bool shape_eq(const Shape& a, const Shape& b) { return a == b; }

// Row-major strides (in elements).
inline std::vector<int64_t> row_major_strides(const Shape& s) {
  std::vector<int64_t> st(s.size());
  int64_t acc = 1;
  for (int i = static_cast<int>(s.size()) - 1; i >= 0; --i) {
    st[i] = acc;
    acc *= s[i];
  }
  return st;
}

template <class T>
class GraphT;

// Dense row-major tensor. Copies share the underlying buffer; operations
// never write through their inputs, so sharing is safe. An optional
// (graph, node) handle links the value into an autodiff tape.
template <class T>
class TensorT {
 public:
  TensorT() = default;

  explicit TensorT(Shape shape)
      : shape_(std::move(shape)),
        data_(std::make_shared<std::vector<T>>(shape_numel(shape_), T(0))) {}

  TensorT(Shape shape, std::vector<T> values) : shape_(std::move(shape)) {
    GEFU_CHECK(static_cast<int64_t>(values.size()) == shape_numel(shape_),
               "tensor init: ", values.size(), " values for shape ", shape_str(shape_));
    data_ = std::make_shared<std::vector<T>>(std::move(values));
  }

  static TensorT full(Shape shape, T v) {
    TensorT t(std::move(shape));
    std::fill(t.data_->begin(), t.data_->end(), v);
    return t;
  }

  static TensorT scalar(T v) { return TensorT(Shape{}, std::vector<T>{v}); }

  const Shape& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int64_t dim(int i) const { return shape_.at(static_cast<size_t>(i)); }
  int64_t size() const { return data_ ? static_cast<int64_t>(data_->size()) : 0; }
  bool defined() const { return static_cast<bool>(data_); }

  const T* data() const { return data_->data(); }
  T* data() { return data_->data(); }
  const std::vector<T>& vec() const { return *data_; }

  T at(std::initializer_list<int64_t> idx) const {
    GEFU_CHECK(static_cast<int>(idx.size()) == rank(), "at(): rank mismatch");
    auto st = row_major_strides(shape_);
    int64_t off = 0;
    int i = 0;
    for (int64_t v : idx) off += v * st[static_cast<size_t>(i++)];
    return (*data_)[static_cast<size_t>(off)];
  }

  T item() const {
    GEFU_CHECK(size() == 1, "item(): tensor has ", size(), " elements");
    return (*data_)[0];
  }

  TensorT clone() const {
    TensorT t;
    t.shape_ = shape_;
    t.data_ = std::make_shared<std::vector<T>>(*data_);
    return t;
  }

  // Same data, no graph handle.
  TensorT detached() const {
    TensorT t = *this;
    t.graph_ = nullptr;
    t.node_ = -1;
    return t;
  }

  bool tracked() const { return graph_ != nullptr && node_ >= 0; }
  GraphT<T>* graph() const { return graph_; }
  int node() const { return node_; }
  void set_node(GraphT<T>* g, int id) {
    graph_ = g;
    node_ = id;
  }
  void detach_inplace() {
    graph_ = nullptr;
    node_ = -1;
  }
  bool data_shared() const { return data_ && data_.use_count() > 1; }

 private:
  Shape shape_;
  std::shared_ptr<std::vector<T>> data_;
  GraphT<T>* graph_ = nullptr;
  int node_ = -1;
};

using Tensor = TensorT<float>;
using DTensor = TensorT<double>;

// ---------------------------------------------------------------------------
// Flat binary tensor container ("GFT1"), used by checkpoints.
// Layout: magic "GFT1" | u32 dtype (1=f32, 2=f64) | u32 rank |
//         u64 extents[rank] | row-major payload. All fields little-endian.

template <class T>
inline uint32_t gft_dtype_code() {
  if constexpr (std::is_same_v<T, float>) return 1u;
  else return 2u;
}

template <class T>
void write_gft(const std::string& path, const TensorT<T>& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  GEFU_CHECK(out.good(), "cannot open for write: ", path);
  out.write("GFT1", 4);
  uint32_t dtype = gft_dtype_code<T>();
  uint32_t rank = static_cast<uint32_t>(t.rank());
  out.write(reinterpret_cast<const char*>(&dtype), 4);
  out.write(reinterpret_cast<const char*>(&rank), 4);
  for (int i = 0; i < t.rank(); ++i) {
    uint64_t e = static_cast<uint64_t>(t.dim(i));
    out.write(reinterpret_cast<const char*>(&e), 8);
  }
  out.write(reinterpret_cast<const char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(T)));
  GEFU_CHECK(out.good(), "short write: ", path);
}

template <class T>
TensorT<T> read_gft(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  GEFU_CHECK(in.good(), "cannot open for read: ", path);
  char magic[4];
  in.read(magic, 4);
  GEFU_CHECK(in.good() && std::memcmp(magic, "GFT1", 4) == 0, "bad magic in ", path);
  uint32_t dtype = 0, rank = 0;
  in.read(reinterpret_cast<char*>(&dtype), 4);
  in.read(reinterpret_cast<char*>(&rank), 4);
  GEFU_CHECK(in.good(), "truncated header in ", path);
  GEFU_CHECK(dtype == gft_dtype_code<T>(), "dtype mismatch in ", path, ": file has code ", dtype);
  GEFU_CHECK(rank <= 8, "implausible rank ", rank, " in ", path);
  Shape shape(rank);
  for (uint32_t i = 0; i < rank; ++i) {
    uint64_t e = 0;
    in.read(reinterpret_cast<char*>(&e), 8);
    shape[i] = static_cast<int64_t>(e);
  }
  TensorT<T> t(shape);
  in.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(T)));
  GEFU_CHECK(in.good(), "truncated payload in ", path);
  return t;
}

}  // namespace gefu
