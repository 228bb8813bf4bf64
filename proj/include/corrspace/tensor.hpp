// Copyright 2026 The corrspace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "corrspace/linalg.hpp"

namespace corrspace {

/// Dense complex tensor whose indices carry names. Data is row-major with
/// respect to the label order: the first label is the slowest index.
class LabeledTensor {
 public:
  LabeledTensor() : data_(1, Complex{1.0, 0.0}) {}

  LabeledTensor(std::vector<std::string> labels, std::vector<int> dims,
                std::vector<Complex> data)
      : labels_(std::move(labels)), dims_(std::move(dims)), data_(std::move(data)) {
    validate();
  }

  static LabeledTensor scalar(Complex value) {
    return LabeledTensor({}, {}, {value});
  }

  static LabeledTensor from_vector(const std::string& label, const Vector& v) {
    return LabeledTensor({label}, {static_cast<int>(v.size())},
                         std::vector<Complex>(v.data(), v.data() + v.size()));
  }

  /// Entry (i, j) of m lands at (row_label=i, col_label=j).
  static LabeledTensor from_matrix(const std::string& row_label,
                                   const std::string& col_label,
                                   const Matrix& m) {
    std::vector<Complex> data(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        data[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
      }
    }
    return LabeledTensor({row_label, col_label},
                         {static_cast<int>(m.rows()), static_cast<int>(m.cols())},
                         std::move(data));
  }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<Complex>& data() const { return data_; }
  std::size_t rank() const { return labels_.size(); }
  std::size_t size() const { return data_.size(); }

  bool has_label(const std::string& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
  }

  std::size_t axis(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
      throw Error(ErrorCode::kUnknownLabel, "unknown tensor label '" + label + "'");
    }
    return static_cast<std::size_t>(it - labels_.begin());
  }

  int dim(const std::string& label) const { return dims_[axis(label)]; }

  Complex at(const std::vector<int>& index) const {
    return data_[offset(index)];
  }

  Complex scalar_value() const {
    if (!labels_.empty()) {
      throw Error(ErrorCode::kDimensionMismatch, "tensor is not a scalar");
    }
    return data_[0];
  }

  LabeledTensor relabeled(const std::map<std::string, std::string>& renames) const {
    std::vector<std::string> labels = labels_;
    for (auto& l : labels) {
      auto it = renames.find(l);
      if (it != renames.end()) l = it->second;
    }
    return LabeledTensor(std::move(labels), dims_, data_);
  }

  /// Reorders axes so that labels() == order.
  LabeledTensor permuted(const std::vector<std::string>& order) const {
    if (order.size() != labels_.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "permute: label count mismatch");
    }
    std::vector<std::size_t> src_axis(order.size());
    std::vector<int> new_dims(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      src_axis[i] = axis(order[i]);
      new_dims[i] = dims_[src_axis[i]];
    }
    const auto strides = row_major_strides(dims_);
    std::vector<Complex> out(data_.size());
    std::vector<int> idx(order.size(), 0);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
      std::size_t src = 0;
      for (std::size_t a = 0; a < idx.size(); ++a) src += idx[a] * strides[src_axis[a]];
      out[flat] = data_[src];
      for (std::size_t a = idx.size(); a-- > 0;) {
        if (++idx[a] < new_dims[a]) break;
        idx[a] = 0;
      }
    }
    return LabeledTensor(order, std::move(new_dims), std::move(out));
  }

  /// Flattens into a matrix with the given row labels (slowest first) and
  /// column labels.
  Matrix to_matrix(const std::vector<std::string>& rows,
                   const std::vector<std::string>& cols) const {
    std::vector<std::string> order = rows;
    order.insert(order.end(), cols.begin(), cols.end());
    const LabeledTensor p = permuted(order);
    Eigen::Index nr = 1, nc = 1;
    for (const auto& l : rows) nr *= dim(l);
    for (const auto& l : cols) nc *= dim(l);
    Matrix m(nr, nc);
    for (Eigen::Index i = 0; i < nr; ++i) {
      for (Eigen::Index j = 0; j < nc; ++j) {
        m(i, j) = p.data_[static_cast<std::size_t>(i * nc + j)];
      }
    }
    return m;
  }

  /// Flattens into a vector in the given label order.
  Vector to_vector(const std::vector<std::string>& order) const {
    const LabeledTensor p = permuted(order);
    return Eigen::Map<const Vector>(p.data_.data(),
                                    static_cast<Eigen::Index>(p.data_.size()));
  }

  double max_abs_diff(const LabeledTensor& other) const {
    const LabeledTensor p = other.permuted(labels_);
    if (p.dims_ != dims_) {
      throw Error(ErrorCode::kDimensionMismatch, "compare: dims mismatch");
    }
    double m = 0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
      m = std::max(m, std::abs(data_[i] - p.data_[i]));
    }
    return m;
  }

  static std::vector<std::size_t> row_major_strides(const std::vector<int>& dims) {
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t a = dims.size(); a-- > 1;) {
      strides[a - 1] = strides[a] * static_cast<std::size_t>(dims[a]);
    }
    return strides;
  }

 private:
  std::size_t offset(const std::vector<int>& index) const {
    if (index.size() != dims_.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "index rank mismatch");
    }
    std::size_t off = 0;
    for (std::size_t a = 0; a < index.size(); ++a) {
      if (index[a] < 0 || index[a] >= dims_[a]) {
        throw Error(ErrorCode::kInvalidArgument, "index out of range");
      }
      off = off * static_cast<std::size_t>(dims_[a]) + static_cast<std::size_t>(index[a]);
    }
    return off;
  }

  void validate() const {
    if (labels_.size() != dims_.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "labels/dims length mismatch");
    }
    std::size_t total = 1;
    for (int d : dims_) {
      if (d <= 0) throw Error(ErrorCode::kInvalidArgument, "dims must be positive");
      total *= static_cast<std::size_t>(d);
    }
    if (total != data_.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "product(dims) != data length");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      for (std::size_t j = i + 1; j < labels_.size(); ++j) {
        if (labels_[i] == labels_[j]) {
          throw Error(ErrorCode::kDuplicateLabel, "duplicate label '" + labels_[i] + "'");
        }
      }
    }
    for (const Complex& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::kInvalidArgument, "non-finite tensor entry");
      }
    }
  }

  std::vector<std::string> labels_;
  std::vector<int> dims_;
  std::vector<Complex> data_;
};

/// Sums over each (label-in-a, label-in-b) pair. The result carries the
/// unpaired labels of a followed by those of b.
inline LabeledTensor contract(const LabeledTensor& a, const LabeledTensor& b,
                              const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::string> a_paired, b_paired;
  for (const auto& [la, lb] : pairs) {
    if (a.dim(la) != b.dim(lb)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "contract: dimension mismatch on pair (" + la + ", " + lb + ")");
    }
    if (std::find(a_paired.begin(), a_paired.end(), la) != a_paired.end() ||
        std::find(b_paired.begin(), b_paired.end(), lb) != b_paired.end()) {
      throw Error(ErrorCode::kDuplicateLabel, "contract: label paired twice");
    }
    a_paired.push_back(la);
    b_paired.push_back(lb);
  }
  std::vector<std::string> a_free, b_free;
  for (const auto& l : a.labels()) {
    if (std::find(a_paired.begin(), a_paired.end(), l) == a_paired.end()) a_free.push_back(l);
  }
  for (const auto& l : b.labels()) {
    if (std::find(b_paired.begin(), b_paired.end(), l) == b_paired.end()) b_free.push_back(l);
  }
  for (const auto& l : b_free) {
    if (std::find(a_free.begin(), a_free.end(), l) != a_free.end()) {
      throw Error(ErrorCode::kDuplicateLabel,
                  "contract: label '" + l + "' would appear twice in the result");
    }
  }
  const Matrix ma = a.to_matrix(a_free, a_paired);
  const Matrix mb = b.to_matrix(b_paired, b_free);
  const Matrix prod = ma * mb;

  std::vector<std::string> labels = a_free;
  labels.insert(labels.end(), b_free.begin(), b_free.end());
  std::vector<int> dims;
  for (const auto& l : a_free) dims.push_back(a.dim(l));
  for (const auto& l : b_free) dims.push_back(b.dim(l));
  std::vector<Complex> data(static_cast<std::size_t>(prod.size()));
  for (Eigen::Index i = 0; i < prod.rows(); ++i) {
    for (Eigen::Index j = 0; j < prod.cols(); ++j) {
      data[static_cast<std::size_t>(i * prod.cols() + j)] = prod(i, j);
    }
  }
  return LabeledTensor(std::move(labels), std::move(dims), std::move(data));
}

/// Contracts every label the two tensors have in common.
inline LabeledTensor contract_shared(const LabeledTensor& a, const LabeledTensor& b) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& l : a.labels()) {
    if (b.has_label(l)) pairs.emplace_back(l, l);
  }
  return contract(a, b, pairs);
}

}  // namespace corrspace
