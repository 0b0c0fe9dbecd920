// SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
//
// SPDX-License-Identifier: Apache-2.0

#include "s2m/kernels.hpp"

#include <Eigen/Core>
#include <vector>

#include "s2m/error.hpp"

namespace s2m::kernels {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;

struct Geometry {
  std::size_t n, c, h, w;     // input
  std::size_t o, kh, kw;      // filters
  std::size_t sh, sw;
  std::size_t ho, wo;         // output
  bool batched;

  std::size_t patch() const { return c * kh * kw; }
  std::size_t positions() const { return ho * wo; }
};

Geometry geometry(const Tensor& x, const Tensor& filters, Stride2d stride) {
  Geometry g{};
  g.batched = x.rank() == 4;
  if (!g.batched && x.rank() != 3) {
    throw ShapeError("conv2d input must be [N,C,H,W] or [C,H,W], got " + shape_string(x.shape()));
  }
  if (filters.rank() != 4) {
    throw ShapeError("conv2d filters must be [O,C,KH,KW], got " + shape_string(filters.shape()));
  }
  const std::size_t off = g.batched ? 1 : 0;
  g.n = g.batched ? x.dim(0) : 1;
  g.c = x.dim(off);
  g.h = x.dim(off + 1);
  g.w = x.dim(off + 2);
  g.o = filters.dim(0);
  g.kh = filters.dim(2);
  g.kw = filters.dim(3);
  if (filters.dim(1) != g.c) {
    throw ShapeError("conv2d: filters expect " + std::to_string(filters.dim(1)) +
                     " channels, input has " + std::to_string(g.c));
  }
  if (g.kh > g.h || g.kw > g.w) {
    throw ShapeError("conv2d: kernel " + std::to_string(g.kh) + "x" + std::to_string(g.kw) +
                     " larger than input " + std::to_string(g.h) + "x" + std::to_string(g.w));
  }
  if (stride.h == 0 || stride.w == 0) throw ShapeError("conv2d: stride must be at least 1");
  g.sh = stride.h;
  g.sw = stride.w;
  g.ho = (g.h - g.kh) / g.sh + 1;
  g.wo = (g.w - g.kw) / g.sw + 1;
  return g;
}

// cols[(c*kh + i)*kw + j, y*wo + x] = img[c, y*sh + i, x*sw + j]
void im2col(const double* img, const Geometry& g, double* cols) {
  const std::size_t positions = g.positions();
  for (std::size_t c = 0; c < g.c; ++c) {
    for (std::size_t i = 0; i < g.kh; ++i) {
      for (std::size_t j = 0; j < g.kw; ++j) {
        double* row = cols + ((c * g.kh + i) * g.kw + j) * positions;
        for (std::size_t y = 0; y < g.ho; ++y) {
          const double* src = img + (c * g.h + y * g.sh + i) * g.w + j;
          double* dst = row + y * g.wo;
          for (std::size_t x = 0; x < g.wo; ++x) dst[x] = src[x * g.sw];
        }
      }
    }
  }
}

void col2im_add(const double* cols, const Geometry& g, double* img) {
  const std::size_t positions = g.positions();
  for (std::size_t c = 0; c < g.c; ++c) {
    for (std::size_t i = 0; i < g.kh; ++i) {
      for (std::size_t j = 0; j < g.kw; ++j) {
        const double* row = cols + ((c * g.kh + i) * g.kw + j) * positions;
        for (std::size_t y = 0; y < g.ho; ++y) {
          double* dst = img + (c * g.h + y * g.sh + i) * g.w + j;
          const double* src = row + y * g.wo;
          for (std::size_t x = 0; x < g.wo; ++x) dst[x * g.sw] += src[x];
        }
      }
    }
  }
}

void check_like(const Tensor* t, const Tensor& ref, const char* what) {
  if (t && t->shape() != ref.shape()) {
    throw ShapeError(std::string("conv backward: ") + what + " gradient has shape " +
                     shape_string(t->shape()) + ", expected " + shape_string(ref.shape()));
  }
}

}  // namespace

Tensor conv2d(const Tensor& x, const Tensor& filters, const Tensor& bias, Stride2d stride) {
  const Geometry g = geometry(x, filters, stride);
  if (bias.rank() != 1 || bias.dim(0) != g.o) {
    throw ShapeError("conv2d: bias must be [" + std::to_string(g.o) + "], got " +
                     shape_string(bias.shape()));
  }
  Tensor y = g.batched ? Tensor({g.n, g.o, g.ho, g.wo}) : Tensor({g.o, g.ho, g.wo});
  Storage cols(g.patch() * g.positions());
  const ConstMapMat wmat(filters.raw(), g.o, g.patch());
  const ConstMapMat cmat(cols.data(), g.patch(), g.positions());
  const Eigen::Map<const Eigen::VectorXd> bvec(bias.raw(), g.o);
  for (std::size_t s = 0; s < g.n; ++s) {
    im2col(x.raw() + s * g.c * g.h * g.w, g, cols.data());
    MapMat ymat(y.raw() + s * g.o * g.positions(), g.o, g.positions());
    ymat.noalias() = wmat * cmat;
    ymat.colwise() += bvec;
  }
  return y;
}

void conv2d_backward(const Tensor& x, const Tensor& filters, const Tensor& dy, Stride2d stride,
                     Tensor* dx, Tensor* dfilters, Tensor* dbias) {
  const Geometry g = geometry(x, filters, stride);
  const Shape expected =
      g.batched ? Shape{g.n, g.o, g.ho, g.wo} : Shape{g.o, g.ho, g.wo};
  if (dy.shape() != expected) {
    throw ShapeError("conv2d backward: upstream gradient " + shape_string(dy.shape()) +
                     ", expected " + shape_string(expected));
  }
  check_like(dx, x, "input");
  check_like(dfilters, filters, "filter");
  if (dbias && (dbias->rank() != 1 || dbias->dim(0) != g.o)) {
    throw ShapeError("conv2d backward: bias gradient shape mismatch");
  }

  Storage cols(g.patch() * g.positions());
  const ConstMapMat wmat(filters.raw(), g.o, g.patch());
  for (std::size_t s = 0; s < g.n; ++s) {
    const ConstMapMat dymat(dy.raw() + s * g.o * g.positions(), g.o, g.positions());
    if (dbias) {
      Eigen::Map<Eigen::VectorXd>(dbias->raw(), g.o) += dymat.rowwise().sum();
    }
    if (dfilters) {
      im2col(x.raw() + s * g.c * g.h * g.w, g, cols.data());
      const ConstMapMat cmat(cols.data(), g.patch(), g.positions());
      MapMat(dfilters->raw(), g.o, g.patch()).noalias() += dymat * cmat.transpose();
    }
    if (dx) {
      MapMat cmat(cols.data(), g.patch(), g.positions());
      cmat.noalias() = wmat.transpose() * dymat;
      col2im_add(cols.data(), g, dx->raw() + s * g.c * g.h * g.w);
    }
  }
}

namespace {

// Views a conv1d problem as a conv2d one with a unit character axis.
Tensor as_2d_input(const Tensor& x) {
  if (x.rank() == 3) return x.reshaped({x.dim(0), x.dim(1), 1, x.dim(2)});
  if (x.rank() == 2) return x.reshaped({x.dim(0), 1, x.dim(1)});
  throw ShapeError("conv1d input must be [N,C,L] or [C,L], got " + shape_string(x.shape()));
}

Tensor as_2d_filters(const Tensor& f) {
  if (f.rank() != 3) {
    throw ShapeError("conv1d filters must be [O,C,K], got " + shape_string(f.shape()));
  }
  return f.reshaped({f.dim(0), f.dim(1), 1, f.dim(2)});
}

}  // namespace

Tensor conv1d(const Tensor& x, const Tensor& filters, const Tensor& bias, std::size_t stride) {
  Tensor y = conv2d(as_2d_input(x), as_2d_filters(filters), bias, {1, stride});
  if (y.rank() == 4) return std::move(y).reshaped({y.dim(0), y.dim(1), y.dim(3)});
  return std::move(y).reshaped({y.dim(0), y.dim(2)});
}

void conv1d_backward(const Tensor& x, const Tensor& filters, const Tensor& dy,
                     std::size_t stride, Tensor* dx, Tensor* dfilters, Tensor* dbias) {
  const Tensor x2 = as_2d_input(x);
  const Tensor f2 = as_2d_filters(filters);
  Tensor dy2 = dy.rank() == 3 ? dy.reshaped({dy.dim(0), dy.dim(1), 1, dy.dim(2)})
                              : dy.reshaped({dy.dim(0), 1, dy.dim(1)});
  Tensor dx2, df2;
  if (dx) dx2 = dx->reshaped(x2.shape());
  if (dfilters) df2 = dfilters->reshaped(f2.shape());
  conv2d_backward(x2, f2, dy2, {1, stride}, dx ? &dx2 : nullptr, dfilters ? &df2 : nullptr,
                  dbias);
  if (dx) *dx = std::move(dx2).reshaped(dx->shape());
  if (dfilters) *dfilters = std::move(df2).reshaped(dfilters->shape());
}

}  // namespace s2m::kernels
