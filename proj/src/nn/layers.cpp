#include "dentvis/nn/layers.hpp"

#include <algorithm>
#include <type_traits>

#include "dentvis/simd/kernels.hpp"

namespace dentvis::nn {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct ConvGeometry {
  std::size_t c, h, w;     // input
  std::size_t oc, oh, ow;  // output
  std::size_t kh, kw, stride;
  std::size_t pad_top, pad_left;

  std::size_t patch() const { return c * kh * kw; }
  std::size_t out_plane() const { return oh * ow; }
};

ConvGeometry conv_geometry(const Conv2d& spec, const Shape& in) {
  require(in.size() == 3, Errc::ShapeMismatch, "conv2d expects (channels, height, width), got " + shape_str(in));
  require(spec.kh >= 1 && spec.kw >= 1 && spec.stride >= 1 && spec.out_ch >= 1, Errc::ShapeMismatch,
          "conv2d kernel, stride and channel counts must be >= 1");
  ConvGeometry g{};
  g.c = in[0];
  g.h = in[1];
  g.w = in[2];
  g.oc = spec.out_ch;
  g.kh = spec.kh;
  g.kw = spec.kw;
  g.stride = spec.stride;
  if (spec.pad == Padding::Same) {
    g.oh = (g.h + g.stride - 1) / g.stride;
    g.ow = (g.w + g.stride - 1) / g.stride;
    const std::size_t need_h = (g.oh - 1) * g.stride + g.kh;
    const std::size_t need_w = (g.ow - 1) * g.stride + g.kw;
    const std::size_t pad_h = need_h > g.h ? need_h - g.h : 0;
    const std::size_t pad_w = need_w > g.w ? need_w - g.w : 0;
    g.pad_top = pad_h / 2;
    g.pad_left = pad_w / 2;
  } else {
    require(g.h >= g.kh && g.w >= g.kw, Errc::ShapeMismatch, "valid conv kernel larger than input " + shape_str(in));
    g.oh = (g.h - g.kh) / g.stride + 1;
    g.ow = (g.w - g.kw) / g.stride + 1;
    g.pad_top = g.pad_left = 0;
  }
  return g;
}

// cols[(c*kh + i)*kw + j][oy*ow + ox] = in[c][oy*s + i - pt][ox*s + j - pl] (0 outside)
template <typename T>
void im2col(const ConvGeometry& g, const T* in, T* cols) {
  const std::size_t plane = g.out_plane();
  for (std::size_t c = 0; c < g.c; ++c) {
    const T* src = in + c * g.h * g.w;
    for (std::size_t i = 0; i < g.kh; ++i) {
      for (std::size_t j = 0; j < g.kw; ++j) {
        T* dst = cols + ((c * g.kh + i) * g.kw + j) * plane;
        for (std::size_t oy = 0; oy < g.oh; ++oy) {
          const auto y = static_cast<std::ptrdiff_t>(oy * g.stride + i) - static_cast<std::ptrdiff_t>(g.pad_top);
          T* row = dst + oy * g.ow;
          if (y < 0 || y >= static_cast<std::ptrdiff_t>(g.h)) {
            std::fill(row, row + g.ow, T{0});
            continue;
          }
          const T* srow = src + static_cast<std::size_t>(y) * g.w;
          for (std::size_t ox = 0; ox < g.ow; ++ox) {
            const auto x = static_cast<std::ptrdiff_t>(ox * g.stride + j) - static_cast<std::ptrdiff_t>(g.pad_left);
            row[ox] = (x < 0 || x >= static_cast<std::ptrdiff_t>(g.w)) ? T{0} : srow[x];
          }
        }
      }
    }
  }
}

// Adjoint of im2col: accumulates cols back into the input layout.
template <typename T>
void col2im(const ConvGeometry& g, const T* cols, T* in) {
  const std::size_t plane = g.out_plane();
  for (std::size_t c = 0; c < g.c; ++c) {
    T* dst = in + c * g.h * g.w;
    for (std::size_t i = 0; i < g.kh; ++i) {
      for (std::size_t j = 0; j < g.kw; ++j) {
        const T* src = cols + ((c * g.kh + i) * g.kw + j) * plane;
        for (std::size_t oy = 0; oy < g.oh; ++oy) {
          const auto y = static_cast<std::ptrdiff_t>(oy * g.stride + i) - static_cast<std::ptrdiff_t>(g.pad_top);
          if (y < 0 || y >= static_cast<std::ptrdiff_t>(g.h)) continue;
          T* drow = dst + static_cast<std::size_t>(y) * g.w;
          const T* row = src + oy * g.ow;
          for (std::size_t ox = 0; ox < g.ow; ++ox) {
            const auto x = static_cast<std::ptrdiff_t>(ox * g.stride + j) - static_cast<std::ptrdiff_t>(g.pad_left);
            if (x >= 0 && x < static_cast<std::ptrdiff_t>(g.w)) drow[x] += row[ox];
          }
        }
      }
    }
  }
}

template <typename T>
void transpose(const T* src, std::size_t rows, std::size_t cols, T* dst) {
  constexpr std::size_t kBlock = 32;
  for (std::size_t r0 = 0; r0 < rows; r0 += kBlock) {
    const std::size_t r1 = std::min(rows, r0 + kBlock);
    for (std::size_t c0 = 0; c0 < cols; c0 += kBlock) {
      const std::size_t c1 = std::min(cols, c0 + kBlock);
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) dst[c * rows + r] = src[r * cols + c];
    }
  }
}

Shape per_sample(const Shape& batched) { return Shape(batched.begin() + 1, batched.end()); }

}  // namespace

std::string layer_name(const LayerSpec& spec) {
  return std::visit(Overloaded{
                        [](const Conv2d&) { return std::string("conv2d"); },
                        [](const ReLU&) { return std::string("relu"); },
                        [](const MaxPool2d&) { return std::string("maxpool2d"); },
                        [](const Flatten&) { return std::string("flatten"); },
                        [](const Dense&) { return std::string("dense"); },
                        [](const Sigmoid&) { return std::string("sigmoid"); },
                        [](const Softmax&) { return std::string("softmax"); },
                    },
                    spec);
}

Shape layer_output_shape(const LayerSpec& spec, const Shape& in) {
  require(!in.empty() && shape_size(in) > 0, Errc::ShapeMismatch, "layer input must be non-empty");
  return std::visit(Overloaded{
                        [&](const Conv2d& c) {
                          const ConvGeometry g = conv_geometry(c, in);
                          return Shape{g.oc, g.oh, g.ow};
                        },
                        [&](const ReLU&) { return in; },
                        [&](const Sigmoid&) { return in; },
                        [&](const MaxPool2d& p) {
                          require(in.size() == 3, Errc::ShapeMismatch, "maxpool expects (c,h,w), got " + shape_str(in));
                          require(p.size >= 1, Errc::ShapeMismatch, "pool size must be >= 1");
                          require(in[1] >= p.size && in[2] >= p.size, Errc::ShapeMismatch,
                                  "pool window larger than input " + shape_str(in));
                          return Shape{in[0], in[1] / p.size, in[2] / p.size};
                        },
                        [&](const Flatten&) { return Shape{shape_size(in)}; },
                        [&](const Dense& d) {
                          require(in.size() == 1, Errc::ShapeMismatch, "dense expects a flat input, got " + shape_str(in));
                          require(d.out >= 1, Errc::ShapeMismatch, "dense width must be >= 1");
                          return Shape{d.out};
                        },
                        [&](const Softmax&) {
                          require(in.size() == 1, Errc::ShapeMismatch, "softmax expects a flat input, got " + shape_str(in));
                          return in;
                        },
                    },
                    spec);
}

std::pair<Shape, Shape> layer_param_shapes(const LayerSpec& spec, const Shape& in) {
  if (const auto* c = std::get_if<Conv2d>(&spec)) {
    const ConvGeometry g = conv_geometry(*c, in);
    return {Shape{g.oc, g.c, g.kh, g.kw}, Shape{g.oc}};
  }
  if (const auto* d = std::get_if<Dense>(&spec)) {
    layer_output_shape(spec, in);
    return {Shape{in[0], d->out}, Shape{d->out}};
  }
  return {Shape{}, Shape{}};
}

template <typename T>
void conv2d_forward(const Conv2d& spec, const LayerParams<T>& p, const Tensor<T>& in, Tensor<T>& out) {
  const ConvGeometry g = conv_geometry(spec, per_sample(in.shape()));
  const std::size_t n = in.dim(0);
  out = Tensor<T>(Shape{n, g.oc, g.oh, g.ow});
  const std::size_t plane = g.out_plane(), patch = g.patch();
  std::vector<T> cols(patch * plane);
  for (std::size_t s = 0; s < n; ++s) {
    im2col(g, in.data() + s * g.c * g.h * g.w, cols.data());
    T* o = out.data() + s * g.oc * plane;
    for (std::size_t oc = 0; oc < g.oc; ++oc) std::fill(o + oc * plane, o + (oc + 1) * plane, p.bias[oc]);
    simd::gemm<T>(g.oc, plane, patch, p.weight.data(), patch, cols.data(), plane, o, plane);
  }
}

template <typename T>
void conv2d_backward(const Conv2d& spec, const LayerParams<T>& p, const Tensor<T>& in, const Tensor<T>& dout,
                     LayerParams<T>& grad, Tensor<T>& din) {
  const ConvGeometry g = conv_geometry(spec, per_sample(in.shape()));
  const std::size_t n = in.dim(0);
  const std::size_t plane = g.out_plane(), patch = g.patch();
  grad.weight = Tensor<T>(p.weight.shape());
  grad.bias = Tensor<T>(p.bias.shape());
  din = Tensor<T>(in.shape());

  std::vector<T> wt(patch * g.oc);  // weight transposed: (patch, oc)
  transpose(p.weight.data(), g.oc, patch, wt.data());
  std::vector<T> cols(patch * plane), cols_t(plane * patch), dcols(patch * plane);

  for (std::size_t s = 0; s < n; ++s) {
    const T* d = dout.data() + s * g.oc * plane;
    for (std::size_t oc = 0; oc < g.oc; ++oc) {
      T acc{0};
      for (std::size_t i = 0; i < plane; ++i) acc += d[oc * plane + i];
      grad.bias[oc] += acc;
    }
    im2col(g, in.data() + s * g.c * g.h * g.w, cols.data());
    transpose(cols.data(), patch, plane, cols_t.data());
    // dW (oc, patch) += dout (oc, plane) * cols^T (plane, patch)
    simd::gemm<T>(g.oc, patch, plane, d, plane, cols_t.data(), patch, grad.weight.data(), patch);
    // dcols (patch, plane) = W^T (patch, oc) * dout (oc, plane)
    std::fill(dcols.begin(), dcols.end(), T{0});
    simd::gemm<T>(patch, plane, g.oc, wt.data(), g.oc, d, plane, dcols.data(), plane);
    col2im(g, dcols.data(), din.data() + s * g.c * g.h * g.w);
  }
}

template <typename T>
void dense_forward(const LayerParams<T>& p, const Tensor<T>& in, Tensor<T>& out) {
  const std::size_t n = in.dim(0), fin = p.weight.dim(0), fout = p.weight.dim(1);
  require(in.size() == n * fin, Errc::ShapeMismatch, "dense input width differs from weights");
  out = Tensor<T>(Shape{n, fout});
  for (std::size_t s = 0; s < n; ++s) std::copy(p.bias.data(), p.bias.data() + fout, out.data() + s * fout);
  simd::gemm<T>(n, fout, fin, in.data(), fin, p.weight.data(), fout, out.data(), fout);
}

template <typename T>
void dense_backward(const LayerParams<T>& p, const Tensor<T>& in, const Tensor<T>& dout, LayerParams<T>& grad,
                    Tensor<T>& din) {
  const std::size_t n = in.dim(0), fin = p.weight.dim(0), fout = p.weight.dim(1);
  grad.weight = Tensor<T>(p.weight.shape());
  grad.bias = Tensor<T>(p.bias.shape());
  din = Tensor<T>(in.shape());
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t o = 0; o < fout; ++o) grad.bias[o] += dout[s * fout + o];
  std::vector<T> in_t(fin * n);
  transpose(in.data(), n, fin, in_t.data());
  simd::gemm<T>(fin, fout, n, in_t.data(), n, dout.data(), fout, grad.weight.data(), fout);
  std::vector<T> w_t(fout * fin);
  transpose(p.weight.data(), fin, fout, w_t.data());
  simd::gemm<T>(n, fin, fout, dout.data(), fout, w_t.data(), fin, din.data(), fin);
}

template <typename T>
void maxpool_forward(const MaxPool2d& spec, const Tensor<T>& in, Tensor<T>& out, std::vector<std::uint32_t>& argmax) {
  const Shape os = layer_output_shape(spec, per_sample(in.shape()));
  const std::size_t n = in.dim(0), c = in.dim(1), h = in.dim(2), w = in.dim(3);
  const std::size_t oh = os[1], ow = os[2], k = spec.size;
  out = Tensor<T>(Shape{n, c, oh, ow});
  argmax.assign(out.size(), 0);
  std::size_t o = 0;
  for (std::size_t sc = 0; sc < n * c; ++sc) {
    const T* plane = in.data() + sc * h * w;
    for (std::size_t oy = 0; oy < oh; ++oy) {
      for (std::size_t ox = 0; ox < ow; ++ox, ++o) {
        std::size_t best = (oy * k) * w + ox * k;
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) {
            const std::size_t idx = (oy * k + i) * w + ox * k + j;
            if (plane[idx] > plane[best]) best = idx;  // strict: first index wins ties
          }
        out[o] = plane[best];
        argmax[o] = static_cast<std::uint32_t>(sc * h * w + best);
      }
    }
  }
}

template <typename T>
void maxpool_backward(const Tensor<T>& in, const Tensor<T>& dout, std::span<const std::uint32_t> argmax,
                      Tensor<T>& din) {
  din = Tensor<T>(in.shape());
  for (std::size_t o = 0; o < dout.size(); ++o) din[argmax[o]] += dout[o];
}

#define DENTVIS_INSTANTIATE(T)                                                                                   \
  template void conv2d_forward<T>(const Conv2d&, const LayerParams<T>&, const Tensor<T>&, Tensor<T>&);          \
  template void conv2d_backward<T>(const Conv2d&, const LayerParams<T>&, const Tensor<T>&, const Tensor<T>&,    \
                                   LayerParams<T>&, Tensor<T>&);                                                 \
  template void dense_forward<T>(const LayerParams<T>&, const Tensor<T>&, Tensor<T>&);                           \
  template void dense_backward<T>(const LayerParams<T>&, const Tensor<T>&, const Tensor<T>&, LayerParams<T>&,    \
                                  Tensor<T>&);                                                                   \
  template void maxpool_forward<T>(const MaxPool2d&, const Tensor<T>&, Tensor<T>&, std::vector<std::uint32_t>&); \
  template void maxpool_backward<T>(const Tensor<T>&, const Tensor<T>&, std::span<const std::uint32_t>, Tensor<T>&);

DENTVIS_INSTANTIATE(float)
DENTVIS_INSTANTIATE(double)
#undef DENTVIS_INSTANTIATE

}  // namespace dentvis::nn
