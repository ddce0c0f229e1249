#pragma once

#include <cstdint>

// Heavy numeric kernels. Every kernel exists twice:
//   kern::omp    - OpenMP version used by the ops layer. Parallel loops run
//                  only over independent output elements, each reduced in a
//                  fixed serial order, so results are bit-identical for any
//                  thread count (GEFU_THREADS=1 included).
//   kern::serial - naive reference loops kept for testing and benchmarking.
// Backward kernels accumulate (+=) into their output buffers.

namespace gefu::kern {

using i64 = int64_t;

struct Conv2dDims {
  i64 batch, cin, h, w;
  i64 cout, kh, kw;
  i64 sy, sx;  // stride
  i64 py, px;  // zero padding
  i64 ho, wo;
};

struct Conv3dDims {
  i64 batch, cin, d, h, w;
  i64 cout, kd, kh, kw;
  i64 sz, sy, sx;
  i64 pz, py, px;
  i64 d_o, ho, wo;
};

namespace omp {

template <class T>
void matmul(const T* a, const T* b, T* c, i64 m, i64 k, i64 n);  // c = a[m,k] * b[k,n]
template <class T>
void matmul_acc_bt(const T* a, const T* b, T* c, i64 m, i64 n, i64 k);  // c[m,k] += a[m,n] * b[k,n]^T
template <class T>
void matmul_acc_at(const T* a, const T* b, T* c, i64 m, i64 k, i64 n);  // c[k,n] += a[m,k]^T * b[m,n]

template <class T>
void conv2d_fwd(const T* x, const T* w, const T* bias, T* out, const Conv2dDims& d);
template <class T>
void conv2d_bwd_input(const T* gout, const T* w, T* gx, const Conv2dDims& d);
template <class T>
void conv2d_bwd_weight(const T* gout, const T* x, T* gw, T* gbias, const Conv2dDims& d);

template <class T>
void conv3d_fwd(const T* x, const T* w, const T* bias, T* out, const Conv3dDims& d);
template <class T>
void conv3d_bwd_input(const T* gout, const T* w, T* gx, const Conv3dDims& d);
template <class T>
void conv3d_bwd_weight(const T* gout, const T* x, T* gw, T* gbias, const Conv3dDims& d);

// img[c,h,w] sampled at s points; coords stored as two planes x[s], y[s] in
// pixel units where integer coordinates are pixel centers. mask[s] = 1 when
// all four bilinear neighbors are in bounds, else out = fill and mask = 0.
template <class T>
void grid_sample_fwd(const T* img, i64 c, i64 h, i64 w, const T* coords, i64 s, T fill, T* out, T* mask);
// gimg scatter runs serially (fixed order); gcoords is a parallel gather.
// Gradients are zero where mask = 0.
template <class T>
void grid_sample_bwd(const T* img, i64 c, i64 h, i64 w, const T* coords, i64 s, const T* gout,
                     const T* mask, T* gimg, T* gcoords);

}  // namespace omp

namespace serial {

template <class T>
void matmul(const T* a, const T* b, T* c, i64 m, i64 k, i64 n);
template <class T>
void conv2d_fwd(const T* x, const T* w, const T* bias, T* out, const Conv2dDims& d);
template <class T>
void conv3d_fwd(const T* x, const T* w, const T* bias, T* out, const Conv3dDims& d);
template <class T>
void grid_sample_fwd(const T* img, i64 c, i64 h, i64 w, const T* coords, i64 s, T fill, T* out, T* mask);

}  // namespace serial

inline i64 conv_out_extent(i64 in, i64 k, i64 stride, i64 pad) {
  return (in + 2 * pad - k) / stride + 1;
}

}  // namespace gefu::kern
