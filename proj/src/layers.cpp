#include "avtp_ids/layers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace avtp_ids {

namespace {

// 64-byte SIMD vector of T (GCC/Clang vector extension).
template <typename T>
struct Simd {
  using type [[gnu::vector_size(64)]] = T;
  static constexpr int lanes = 64 / static_cast<int>(sizeof(T));
};

template <typename T>
using vec_t = typename Simd<T>::type;

template <typename T>
inline vec_t<T> load(const T* p) {
  vec_t<T> v;
  std::memcpy(&v, p, sizeof(v));
  return v;
}

template <typename T>
inline void store(T* p, vec_t<T> v) {
  std::memcpy(p, &v, sizeof(v));
}

struct ConvGeometry {
  std::size_t height, width, k, cin, cout;
  std::size_t padded_width() const { return width + k - 1; }
  std::size_t padded_height() const { return height + k - 1; }
};

// Copies one HWC image into a zero-bordered buffer.
template <typename T>
void pad_image(const T* src, const ConvGeometry& g, std::size_t channels, std::vector<T>& dst) {
  const std::size_t pad = g.k / 2;
  const std::size_t pw = g.padded_width();
  dst.assign(g.padded_height() * pw * channels, T(0));
  for (std::size_t h = 0; h < g.height; ++h) {
    std::copy_n(src + h * g.width * channels, g.width * channels,
                dst.data() + ((h + pad) * pw + pad) * channels);
  }
}

// out(h, w, :) = bias + sum_{kh, kw, ci} padded(h + kh, w + kw, ci) * filt(kh, kw, ci, :)
// for TW horizontally adjacent pixels and NV vectors of output channels.
template <typename T, int TW, int NV>
inline void conv_tile_simd(const T* padded, const T* filt, const T* bias, T* out,
                           const ConvGeometry& g, std::size_t h, std::size_t w0, std::size_t cb) {
  constexpr int L = Simd<T>::lanes;
  vec_t<T> acc[TW][NV];
  for (int v = 0; v < NV; ++v) {
    const vec_t<T> b = bias ? load(bias + cb + v * L) : vec_t<T>{};
    for (int t = 0; t < TW; ++t) acc[t][v] = b;
  }
  const std::size_t pw = g.padded_width();
  for (std::size_t kh = 0; kh < g.k; ++kh) {
    for (std::size_t kw = 0; kw < g.k; ++kw) {
      const T* x = padded + ((h + kh) * pw + w0 + kw) * g.cin;
      const T* f = filt + (kh * g.k + kw) * g.cin * g.cout + cb;
      for (std::size_t ci = 0; ci < g.cin; ++ci) {
        vec_t<T> fr[NV];
        for (int v = 0; v < NV; ++v) fr[v] = load(f + ci * g.cout + v * L);
        for (int t = 0; t < TW; ++t) {
          const T xv = x[t * g.cin + ci];
          for (int v = 0; v < NV; ++v) acc[t][v] += xv * fr[v];
        }
      }
    }
  }
  for (int t = 0; t < TW; ++t)
    for (int v = 0; v < NV; ++v) store(out + ((h * g.width) + w0 + t) * g.cout + cb + v * L, acc[t][v]);
}

template <typename T, int NV>
void conv_image_simd(const T* padded, const T* filt, const T* bias, T* out, const ConvGeometry& g) {
  constexpr int tile = 4;
  constexpr std::size_t step = NV * Simd<T>::lanes;
  for (std::size_t h = 0; h < g.height; ++h) {
    std::size_t w = 0;
    for (; w + tile <= g.width; w += tile)
      for (std::size_t cb = 0; cb < g.cout; cb += step)
        conv_tile_simd<T, tile, NV>(padded, filt, bias, out, g, h, w, cb);
    for (; w < g.width; ++w)
      for (std::size_t cb = 0; cb < g.cout; cb += step)
        conv_tile_simd<T, 1, NV>(padded, filt, bias, out, g, h, w, cb);
  }
}

// Scalar path for channel counts that do not fill a vector.
template <typename T>
void conv_image_scalar(const T* padded, const T* filt, const T* bias, T* out,
                       const ConvGeometry& g) {
  const std::size_t pw = g.padded_width();
  for (std::size_t h = 0; h < g.height; ++h) {
    for (std::size_t w = 0; w < g.width; ++w) {
      T* o = out + (h * g.width + w) * g.cout;
      for (std::size_t co = 0; co < g.cout; ++co) o[co] = bias ? bias[co] : T(0);
      for (std::size_t kh = 0; kh < g.k; ++kh) {
        for (std::size_t kw = 0; kw < g.k; ++kw) {
          const T* x = padded + ((h + kh) * pw + w + kw) * g.cin;
          const T* f = filt + (kh * g.k + kw) * g.cin * g.cout;
          for (std::size_t ci = 0; ci < g.cin; ++ci)
            for (std::size_t co = 0; co < g.cout; ++co) o[co] += x[ci] * f[ci * g.cout + co];
        }
      }
    }
  }
}

template <typename T>
void conv_image(const T* padded, const T* filt, const T* bias, T* out, const ConvGeometry& g) {
  constexpr std::size_t L = Simd<T>::lanes;
  if (g.cout % (2 * L) == 0) {
    conv_image_simd<T, 2>(padded, filt, bias, out, g);
  } else if (g.cout % L == 0) {
    conv_image_simd<T, 1>(padded, filt, bias, out, g);
  } else {
    conv_image_scalar(padded, filt, bias, out, g);
  }
}

// d_filt(kh, kw, ci, co) += sum_{h, w} padded(h + kh, w + kw, ci) * d_out(h, w, co)
template <typename T, int CIB, int NV>
void filter_grad_simd(const T* padded, const T* d_out, T* d_filt, const ConvGeometry& g) {
  constexpr int L = Simd<T>::lanes;
  const std::size_t pw = g.padded_width();
  for (std::size_t kh = 0; kh < g.k; ++kh) {
    for (std::size_t kw = 0; kw < g.k; ++kw) {
      T* df = d_filt + (kh * g.k + kw) * g.cin * g.cout;
      for (std::size_t ci = 0; ci < g.cin; ci += CIB) {
        for (std::size_t cb = 0; cb < g.cout; cb += NV * L) {
          vec_t<T> acc[CIB][NV];
          for (int i = 0; i < CIB; ++i)
            for (int v = 0; v < NV; ++v) acc[i][v] = load(df + (ci + i) * g.cout + cb + v * L);
          for (std::size_t h = 0; h < g.height; ++h) {
            const T* xrow = padded + ((h + kh) * pw + kw) * g.cin + ci;
            const T* drow = d_out + h * g.width * g.cout + cb;
            for (std::size_t w = 0; w < g.width; ++w) {
              const T* x = xrow + w * g.cin;
              vec_t<T> d[NV];
              for (int v = 0; v < NV; ++v) d[v] = load(drow + w * g.cout + v * L);
              for (int i = 0; i < CIB; ++i) {
                const T xv = x[i];
                for (int v = 0; v < NV; ++v) acc[i][v] += xv * d[v];
              }
            }
          }
          for (int i = 0; i < CIB; ++i)
            for (int v = 0; v < NV; ++v) store(df + (ci + i) * g.cout + cb + v * L, acc[i][v]);
        }
      }
    }
  }
}

template <typename T>
void filter_grad_scalar(const T* padded, const T* d_out, T* d_filt, const ConvGeometry& g) {
  const std::size_t pw = g.padded_width();
  for (std::size_t h = 0; h < g.height; ++h) {
    for (std::size_t w = 0; w < g.width; ++w) {
      const T* d = d_out + (h * g.width + w) * g.cout;
      for (std::size_t kh = 0; kh < g.k; ++kh) {
        for (std::size_t kw = 0; kw < g.k; ++kw) {
          const T* x = padded + ((h + kh) * pw + w + kw) * g.cin;
          T* df = d_filt + (kh * g.k + kw) * g.cin * g.cout;
          for (std::size_t ci = 0; ci < g.cin; ++ci)
            for (std::size_t co = 0; co < g.cout; ++co) df[ci * g.cout + co] += x[ci] * d[co];
        }
      }
    }
  }
}

template <typename T>
void filter_grad(const T* padded, const T* d_out, T* d_filt, const ConvGeometry& g) {
  constexpr std::size_t L = Simd<T>::lanes;
  if (g.cout % (2 * L) == 0 && g.cin % 4 == 0) {
    filter_grad_simd<T, 4, 2>(padded, d_out, d_filt, g);
  } else if (g.cout % L == 0 && g.cin % 4 == 0) {
    filter_grad_simd<T, 4, 1>(padded, d_out, d_filt, g);
  } else if (g.cout % L == 0) {
    filter_grad_simd<T, 1, 1>(padded, d_out, d_filt, g);
  } else {
    filter_grad_scalar(padded, d_out, d_filt, g);
  }
}

template <typename T>
ConvGeometry conv_geometry(const Tensor<T>& input, const Tensor<T>& filters) {
  if (input.rank() != 4 || filters.rank() != 4) {
    throw Error(Errc::shape_mismatch, "conv2d expects NHWC input and (k, k, cin, cout) filters");
  }
  const ConvGeometry g{input.dim(1), input.dim(2), filters.dim(0), input.dim(3), filters.dim(3)};
  if (filters.dim(1) != g.k || g.k % 2 == 0 || filters.dim(2) != g.cin) {
    throw Error(Errc::shape_mismatch, "filters " + shape_string(filters.shape()) +
                                          " for input " + shape_string(input.shape()));
  }
  return g;
}

}  // namespace

template <typename T>
void conv2d_forward(const Tensor<T>& input, const Tensor<T>& filters, const Tensor<T>& bias,
                    Tensor<T>& output) {
  const ConvGeometry g = conv_geometry(input, filters);
  require_shape(bias.shape(), {g.cout}, "conv2d bias");
  const std::size_t n = input.dim(0);
  output.resize({n, g.height, g.width, g.cout});
  std::vector<T> padded;
  for (std::size_t s = 0; s < n; ++s) {
    pad_image(input.data() + s * g.height * g.width * g.cin, g, g.cin, padded);
    conv_image(padded.data(), filters.data(), bias.data(),
               output.data() + s * g.height * g.width * g.cout, g);
  }
}

template <typename T>
void conv2d_backward(const Tensor<T>& input, const Tensor<T>& filters, const Tensor<T>& d_output,
                     Tensor<T>* d_input, Tensor<T>& d_filters, Tensor<T>& d_bias) {
  const ConvGeometry g = conv_geometry(input, filters);
  const std::size_t n = input.dim(0);
  require_shape(d_output.shape(), {n, g.height, g.width, g.cout}, "conv2d d_output");
  d_filters.resize(filters.shape());
  d_filters.fill(T(0));
  d_bias.resize({g.cout});
  d_bias.fill(T(0));

  const std::size_t pixels = g.height * g.width;
  for (std::size_t p = 0; p < n * pixels; ++p) {
    const T* d = d_output.data() + p * g.cout;
    for (std::size_t c = 0; c < g.cout; ++c) d_bias[c] += d[c];
  }

  std::vector<T> padded;
  for (std::size_t s = 0; s < n; ++s) {
    pad_image(input.data() + s * pixels * g.cin, g, g.cin, padded);
    filter_grad(padded.data(), d_output.data() + s * pixels * g.cout, d_filters.data(), g);
  }

  if (d_input == nullptr) return;
  // The input gradient is a "same" convolution of d_output with the
  // spatially flipped, channel-transposed filters.
  const ConvGeometry gt{g.height, g.width, g.k, g.cout, g.cin};
  std::vector<T> flipped(filters.size());
  for (std::size_t kh = 0; kh < g.k; ++kh)
    for (std::size_t kw = 0; kw < g.k; ++kw)
      for (std::size_t ci = 0; ci < g.cin; ++ci)
        for (std::size_t co = 0; co < g.cout; ++co)
          flipped[(((g.k - 1 - kh) * g.k + (g.k - 1 - kw)) * g.cout + co) * g.cin + ci] =
              filters[((kh * g.k + kw) * g.cin + ci) * g.cout + co];
  d_input->resize(input.shape());
  for (std::size_t s = 0; s < n; ++s) {
    pad_image(d_output.data() + s * pixels * g.cout, gt, g.cout, padded);
    conv_image<T>(padded.data(), flipped.data(), nullptr, d_input->data() + s * pixels * g.cin, gt);
  }
}

template <typename T>
void batchnorm_forward(const Tensor<T>& input, BatchNorm<T>& bn, Mode mode, Tensor<T>& output,
                       BatchNormCache<T>* cache) {
  const std::size_t channels = input.dim(input.rank() - 1);
  require_shape(bn.gamma.shape(), {channels}, "batchnorm gamma");
  const std::size_t rows = input.size() / channels;
  output.resize(input.shape());

  std::vector<T> mean(channels), inv_std(channels);
  if (mode == Mode::train) {
    std::vector<double> sum(channels, 0.0), sq(channels, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      const T* x = input.data() + r * channels;
      for (std::size_t c = 0; c < channels; ++c) sum[c] += x[c];
    }
    for (std::size_t c = 0; c < channels; ++c) mean[c] = static_cast<T>(sum[c] / rows);
    for (std::size_t r = 0; r < rows; ++r) {
      const T* x = input.data() + r * channels;
      for (std::size_t c = 0; c < channels; ++c) {
        const double d = x[c] - mean[c];
        sq[c] += d * d;
      }
    }
    const T keep = bn.updates == 0 ? T(0) : bn.momentum;
    for (std::size_t c = 0; c < channels; ++c) {
      const T var = static_cast<T>(sq[c] / rows);
      inv_std[c] = T(1) / std::sqrt(var + bn.epsilon);
      bn.running_mean[c] = keep * bn.running_mean[c] + (T(1) - keep) * mean[c];
      bn.running_var[c] = keep * bn.running_var[c] + (T(1) - keep) * var;
    }
    ++bn.updates;
  } else {
    for (std::size_t c = 0; c < channels; ++c) {
      mean[c] = bn.running_mean[c];
      inv_std[c] = T(1) / std::sqrt(bn.running_var[c] + bn.epsilon);
    }
  }

  if (cache) {
    cache->x_hat.resize(input.shape());
    cache->inv_std = inv_std;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    const T* x = input.data() + r * channels;
    T* y = output.data() + r * channels;
    T* xh = cache ? cache->x_hat.data() + r * channels : nullptr;
    for (std::size_t c = 0; c < channels; ++c) {
      const T norm = (x[c] - mean[c]) * inv_std[c];
      if (xh) xh[c] = norm;
      y[c] = bn.gamma[c] * norm + bn.beta[c];
    }
  }
}

template <typename T>
void batchnorm_backward(const Tensor<T>& d_output, const BatchNorm<T>& bn,
                        const BatchNormCache<T>& cache, Tensor<T>& d_input, Tensor<T>& d_gamma,
                        Tensor<T>& d_beta) {
  const std::size_t channels = bn.gamma.size();
  require_shape(d_output.shape(), cache.x_hat.shape(), "batchnorm d_output");
  const std::size_t rows = d_output.size() / channels;
  d_gamma.resize({channels});
  d_beta.resize({channels});
  std::vector<double> sum_dy(channels, 0.0), sum_dy_xh(channels, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const T* dy = d_output.data() + r * channels;
    const T* xh = cache.x_hat.data() + r * channels;
    for (std::size_t c = 0; c < channels; ++c) {
      sum_dy[c] += dy[c];
      sum_dy_xh[c] += dy[c] * xh[c];
    }
  }
  for (std::size_t c = 0; c < channels; ++c) {
    d_beta[c] = static_cast<T>(sum_dy[c]);
    d_gamma[c] = static_cast<T>(sum_dy_xh[c]);
  }
  d_input.resize(d_output.shape());
  const T inv_rows = T(1) / static_cast<T>(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const T* dy = d_output.data() + r * channels;
    const T* xh = cache.x_hat.data() + r * channels;
    T* dx = d_input.data() + r * channels;
    for (std::size_t c = 0; c < channels; ++c) {
      dx[c] = bn.gamma[c] * cache.inv_std[c] * inv_rows *
              (static_cast<T>(rows) * dy[c] - d_beta[c] - xh[c] * d_gamma[c]);
    }
  }
}

template <typename T>
void maxpool2x2_forward(const Tensor<T>& input, Tensor<T>& output,
                        std::vector<std::uint32_t>* argmax) {
  if (input.rank() != 4) throw Error(Errc::shape_mismatch, "maxpool expects NHWC input");
  const std::size_t n = input.dim(0), h = input.dim(1), w = input.dim(2), c = input.dim(3);
  if (h % 2 != 0 || w % 2 != 0) {
    throw Error(Errc::odd_dimension, "maxpool input " + shape_string(input.shape()));
  }
  const std::size_t oh = h / 2, ow = w / 2;
  output.resize({n, oh, ow, c});
  if (argmax) argmax->resize(output.size());
  std::size_t o = 0;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        const std::size_t base = ((s * h + 2 * y) * w + 2 * x) * c;
        const std::size_t candidates[4] = {base, base + c, base + w * c, base + w * c + c};
        for (std::size_t ch = 0; ch < c; ++ch, ++o) {
          std::size_t best = candidates[0] + ch;
          for (int q = 1; q < 4; ++q) {
            if (input[candidates[q] + ch] > input[best]) best = candidates[q] + ch;
          }
          output[o] = input[best];
          if (argmax) (*argmax)[o] = static_cast<std::uint32_t>(best);
        }
      }
    }
  }
}

template <typename T>
void maxpool2x2_backward(const Tensor<T>& d_output, const std::vector<std::uint32_t>& argmax,
                         const Shape& input_shape, Tensor<T>& d_input) {
  if (argmax.size() != d_output.size()) {
    throw Error(Errc::shape_mismatch, "maxpool argmax does not match d_output");
  }
  d_input.resize(input_shape);
  d_input.fill(T(0));
  for (std::size_t o = 0; o < d_output.size(); ++o) d_input[argmax[o]] += d_output[o];
}

template <typename T>
void dense_forward(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& bias,
                   Tensor<T>& output) {
  if (input.rank() != 2 || weights.rank() != 2 || weights.dim(0) != input.dim(1)) {
    throw Error(Errc::shape_mismatch, "dense input " + shape_string(input.shape()) +
                                          " weights " + shape_string(weights.shape()));
  }
  const std::size_t n = input.dim(0), d = input.dim(1), m = weights.dim(1);
  require_shape(bias.shape(), {m}, "dense bias");
  output.resize({n, m});
  for (std::size_t s = 0; s < n; ++s) {
    T* out = output.data() + s * m;
    std::copy_n(bias.data(), m, out);
    const T* x = input.data() + s * d;
    for (std::size_t k = 0; k < d; ++k) {
      const T xv = x[k];
      if (xv == T(0)) continue;
      const T* wr = weights.data() + k * m;
      for (std::size_t j = 0; j < m; ++j) out[j] += xv * wr[j];
    }
  }
}

template <typename T>
void dense_backward(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& d_output,
                    Tensor<T>* d_input, Tensor<T>& d_weights, Tensor<T>& d_bias) {
  const std::size_t n = input.dim(0), d = input.dim(1), m = weights.dim(1);
  require_shape(d_output.shape(), {n, m}, "dense d_output");
  d_weights.resize({d, m});
  d_weights.fill(T(0));
  d_bias.resize({m});
  d_bias.fill(T(0));
  for (std::size_t s = 0; s < n; ++s) {
    const T* dy = d_output.data() + s * m;
    const T* x = input.data() + s * d;
    for (std::size_t j = 0; j < m; ++j) d_bias[j] += dy[j];
    for (std::size_t k = 0; k < d; ++k) {
      const T xv = x[k];
      if (xv == T(0)) continue;
      T* dw = d_weights.data() + k * m;
      for (std::size_t j = 0; j < m; ++j) dw[j] += xv * dy[j];
    }
  }
  if (d_input == nullptr) return;
  d_input->resize(input.shape());
  for (std::size_t s = 0; s < n; ++s) {
    const T* dy = d_output.data() + s * m;
    T* dx = d_input->data() + s * d;
    for (std::size_t k = 0; k < d; ++k) {
      const T* wr = weights.data() + k * m;
      T acc = T(0);
      for (std::size_t j = 0; j < m; ++j) acc += wr[j] * dy[j];
      dx[k] = acc;
    }
  }
}

template <typename T>
void relu_forward(Tensor<T>& x) {
  for (auto& v : x) v = v > T(0) ? v : T(0);
}

template <typename T>
void relu_backward(const Tensor<T>& output, Tensor<T>& d) {
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!(output[k] > T(0))) d[k] = T(0);
  }
}

template <typename T>
T sigmoid(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

template <typename T>
void dropout_forward(Tensor<T>& x, double rate, std::mt19937_64& rng, Mode mode,
                     std::vector<T>& mask) {
  mask.assign(x.size(), T(1));
  if (mode == Mode::infer || rate <= 0.0) return;
  const T scale = static_cast<T>(1.0 / (1.0 - rate));
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    mask[k] = u < rate ? T(0) : scale;
    x[k] *= mask[k];
  }
}

template <typename T>
void dropout_backward(Tensor<T>& d, const std::vector<T>& mask) {
  for (std::size_t k = 0; k < d.size(); ++k) d[k] *= mask[k];
}

BceResult bce_loss(std::span<const double> pred, std::span<const double> target, double penalty) {
  if (pred.size() != target.size() || pred.empty()) {
    throw Error(Errc::shape_mismatch, "bce_loss over " + std::to_string(pred.size()) +
                                          " predictions and " + std::to_string(target.size()) +
                                          " targets");
  }
  BceResult result;
  result.d_pred.resize(pred.size());
  const double n = static_cast<double>(pred.size());
  double total = 0.0;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const double p = std::clamp(pred[k], bce_clamp, 1.0 - bce_clamp);
    const double y = target[k];
    total += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
    result.d_pred[k] = (p - y) / (p * (1.0 - p)) / n;
  }
  result.loss = total / n + penalty;
  return result;
}

#define AVTP_IDS_INSTANTIATE(T)                                                                   \
  template void conv2d_forward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,          \
                                  Tensor<T>&);                                                   \
  template void conv2d_backward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,         \
                                   Tensor<T>*, Tensor<T>&, Tensor<T>&);                          \
  template void batchnorm_forward<T>(const Tensor<T>&, BatchNorm<T>&, Mode, Tensor<T>&,          \
                                     BatchNormCache<T>*);                                        \
  template void batchnorm_backward<T>(const Tensor<T>&, const BatchNorm<T>&,                     \
                                      const BatchNormCache<T>&, Tensor<T>&, Tensor<T>&,          \
                                      Tensor<T>&);                                               \
  template void maxpool2x2_forward<T>(const Tensor<T>&, Tensor<T>&, std::vector<std::uint32_t>*); \
  template void maxpool2x2_backward<T>(const Tensor<T>&, const std::vector<std::uint32_t>&,      \
                                       const Shape&, Tensor<T>&);                                \
  template void dense_forward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,           \
                                 Tensor<T>&);                                                    \
  template void dense_backward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,          \
                                  Tensor<T>*, Tensor<T>&, Tensor<T>&);                           \
  template void relu_forward<T>(Tensor<T>&);                                                     \
  template void relu_backward<T>(const Tensor<T>&, Tensor<T>&);                                  \
  template T sigmoid<T>(T);                                                                      \
  template void dropout_forward<T>(Tensor<T>&, double, std::mt19937_64&, Mode,                   \
                                   std::vector<T>&);                                             \
  template void dropout_backward<T>(Tensor<T>&, const std::vector<T>&);

AVTP_IDS_INSTANTIATE(float)
AVTP_IDS_INSTANTIATE(double)

#undef AVTP_IDS_INSTANTIATE

}  // namespace avtp_ids
