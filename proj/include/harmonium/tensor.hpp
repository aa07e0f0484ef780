#pragma once

#include <Eigen/Dense>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "harmonium/errors.hpp"

namespace harmonium {

/// Dense tensor of runtime rank, stored flat in row-major order over Eigen
/// storage. Rank 0 is a scalar (one element). Contractions reshape to
/// matrices and run through Eigen's matrix product.
class Tensor {
 public:
  using Shape = std::vector<Eigen::Index>;

  Tensor() : data_(Eigen::VectorXd::Zero(1)) {}
  explicit Tensor(Shape shape, double fill = 0.0) : shape_(std::move(shape)) {
    data_ = Eigen::VectorXd::Constant(flat_size(shape_), fill);
  }

  static Tensor scalar(double v) {
    Tensor t;
    t.data_[0] = v;
    return t;
  }

  std::size_t rank() const { return shape_.size(); }
  Eigen::Index size() const { return data_.size(); }
  const Shape& shape() const { return shape_; }
  Eigen::VectorXd& data() { return data_; }
  const Eigen::VectorXd& data() const { return data_; }

  double& operator[](Eigen::Index flat) { return data_[flat]; }
  double operator[](Eigen::Index flat) const { return data_[flat]; }

  /// Row-major strides; the last axis is contiguous.
  std::vector<Eigen::Index> strides() const {
    std::vector<Eigen::Index> s(shape_.size(), 1);
    for (std::size_t k = shape_.size(); k-- > 1;) s[k - 1] = s[k] * shape_[k];
    return s;
  }

  double at(std::span<const Eigen::Index> idx) const {
    return data_[flat_index(idx)];
  }
  double& at(std::span<const Eigen::Index> idx) { return data_[flat_index(idx)]; }

  Eigen::Index flat_index(std::span<const Eigen::Index> idx) const {
    Eigen::Index flat = 0;
    const auto s = strides();
    for (std::size_t k = 0; k < shape_.size(); ++k) flat += idx[k] * s[k];
    return flat;
  }

  /// Axes reordered so that new axis k is old axis perm[k].
  Tensor permuted(std::span<const std::size_t> perm) const {
    Shape out_shape(rank());
    for (std::size_t k = 0; k < rank(); ++k) out_shape[k] = shape_[perm[k]];
    Tensor out(std::move(out_shape));
    if (rank() == 0) {
      out.data_[0] = data_[0];
      return out;
    }
    const auto src_strides = strides();
    std::vector<Eigen::Index> step(rank());
    for (std::size_t k = 0; k < rank(); ++k) step[k] = src_strides[perm[k]];

    std::vector<Eigen::Index> idx(rank(), 0);
    Eigen::Index src = 0;
    for (Eigen::Index dst = 0; dst < out.size(); ++dst) {
      out.data_[dst] = data_[src];
      for (std::size_t k = rank(); k-- > 0;) {  // odometer
        src += step[k];
        if (++idx[k] < out.shape_[k]) break;
        src -= step[k] * out.shape_[k];
        idx[k] = 0;
      }
    }
    return out;
  }

  static Eigen::Index flat_size(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), Eigen::Index{1},
                           std::multiplies<>());
  }

 private:
  Shape shape_;
  Eigen::VectorXd data_;
};

namespace detail {
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// [0..rank) with `axis` removed.
inline std::vector<std::size_t> axes_without(std::size_t rank, std::size_t axis) {
  std::vector<std::size_t> out;
  out.reserve(rank - 1);
  for (std::size_t k = 0; k < rank; ++k)
    if (k != axis) out.push_back(k);
  return out;
}
}  // namespace detail

/// Outer product; result shape is the concatenation of both shapes.
inline Tensor outer(const Tensor& a, const Tensor& b) {
  Tensor::Shape shape = a.shape();
  shape.insert(shape.end(), b.shape().begin(), b.shape().end());
  Tensor out(std::move(shape));
  Eigen::Map<detail::RowMat> C(out.data().data(), a.size(), b.size());
  C.noalias() = a.data() * b.data().transpose();
  return out;
}

/// Contraction of one axis of a against one axis of b (sizes must match).
/// Remaining axes keep their order: a's first, then b's.
inline Tensor contract(const Tensor& a, std::size_t axis_a, const Tensor& b,
                       std::size_t axis_b) {
  if (axis_a >= a.rank() || axis_b >= b.rank())
    throw ShapeMismatchError("contraction axis out of range");
  const Eigen::Index d = a.shape()[axis_a];
  if (d != b.shape()[axis_b])
    throw ShapeMismatchError("contracted axes differ in size: " +
                             std::to_string(d) + " vs " +
                             std::to_string(b.shape()[axis_b]));
  auto perm_a = detail::axes_without(a.rank(), axis_a);
  perm_a.push_back(axis_a);  // contracted axis last
  auto perm_b = detail::axes_without(b.rank(), axis_b);
  perm_b.insert(perm_b.begin(), axis_b);  // contracted axis first
  const Tensor pa = a.permuted(perm_a);
  const Tensor pb = b.permuted(perm_b);

  Tensor::Shape shape;
  for (std::size_t k : detail::axes_without(a.rank(), axis_a))
    shape.push_back(a.shape()[k]);
  for (std::size_t k : detail::axes_without(b.rank(), axis_b))
    shape.push_back(b.shape()[k]);
  Tensor out(std::move(shape));

  Eigen::Map<const detail::RowMat> A(pa.data().data(), pa.size() / d, d);
  Eigen::Map<const detail::RowMat> B(pb.data().data(), d, pb.size() / d);
  Eigen::Map<detail::RowMat> C(out.data().data(), A.rows(), B.cols());
  C.noalias() = A * B;
  return out;
}

/// Trace over two equal-sized axes of one tensor.
inline Tensor trace(const Tensor& a, std::size_t ax1, std::size_t ax2) {
  if (ax1 == ax2 || ax1 >= a.rank() || ax2 >= a.rank())
    throw ShapeMismatchError("invalid trace axes");
  const Eigen::Index d = a.shape()[ax1];
  if (d != a.shape()[ax2])
    throw ShapeMismatchError("traced axes differ in size");
  std::vector<std::size_t> perm;
  for (std::size_t k = 0; k < a.rank(); ++k)
    if (k != ax1 && k != ax2) perm.push_back(k);
  perm.push_back(ax1);
  perm.push_back(ax2);
  const Tensor p = a.permuted(perm);

  Tensor::Shape shape;
  for (std::size_t k = 0; k < a.rank(); ++k)
    if (k != ax1 && k != ax2) shape.push_back(a.shape()[k]);
  Tensor out(std::move(shape));
  const Eigen::Index block = d * d;
  for (Eigen::Index m = 0; m < out.size(); ++m) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) acc += p[m * block + k * d + k];
    out[m] = acc;
  }
  return out;
}

}  // namespace harmonium
