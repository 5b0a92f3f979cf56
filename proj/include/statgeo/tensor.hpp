#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace statgeo {

// Dense rank-3 array with all dimensions equal to n (tensors here always
// live on one tangent space).
class Tensor3 {
  public:
    Tensor3() = default;
    explicit Tensor3(std::size_t n) : n_(n), data_(n * n * n, 0.0) {}

    std::size_t dim() const { return n_; }

    double& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * n_ + j) * n_ + k];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * n_ + j) * n_ + k];
    }

    const std::vector<double>& flat() const { return data_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

  private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

class Tensor4 {
  public:
    Tensor4() = default;
    explicit Tensor4(std::size_t n) : n_(n), data_(n * n * n * n, 0.0) {}

    std::size_t dim() const { return n_; }

    double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return data_[((i * n_ + j) * n_ + k) * n_ + l];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        return data_[((i * n_ + j) * n_ + k) * n_ + l];
    }

    const std::vector<double>& flat() const { return data_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

  private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

inline double max_abs_diff(const Tensor3& a, const Tensor3& b) {
    assert(a.dim() == b.dim());
    double m = 0.0;
    for (std::size_t i = 0; i < a.flat().size(); ++i)
        m = std::max(m, std::abs(a.flat()[i] - b.flat()[i]));
    return m;
}

inline double max_abs_diff(const Tensor4& a, const Tensor4& b) {
    assert(a.dim() == b.dim());
    double m = 0.0;
    for (std::size_t i = 0; i < a.flat().size(); ++i)
        m = std::max(m, std::abs(a.flat()[i] - b.flat()[i]));
    return m;
}

}  // namespace statgeo
