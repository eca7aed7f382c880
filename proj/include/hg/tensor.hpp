#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace hg {

/// Dense tensor of equal extent `dim` in every one of `rank` slots, stored
/// row-major (last index fastest). Used for both ScalarField and double
/// components.
template <class T>
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, int rank, const T& fill = T{})
      : dim_(dim), rank_(rank), data_(count(dim, rank), fill) {}

  int dim() const noexcept { return dim_; }
  int rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return data_.size(); }

  template <class... I>
  T& operator()(I... idx) {
    return data_[offset(idx...)];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    return data_[offset(idx...)];
  }

  T& flat(std::size_t k) { return data_[k]; }
  const T& flat(std::size_t k) const { return data_[k]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

 private:
  static std::size_t count(int dim, int rank) {
    std::size_t c = 1;
    for (int r = 0; r < rank; ++r) c *= static_cast<std::size_t>(dim);
    return c;
  }

  template <class... I>
  std::size_t offset(I... idx) const {
    static_assert(sizeof...(I) > 0);
    if (static_cast<int>(sizeof...(I)) != rank_) throw std::out_of_range("Tensor: wrong index count");
    std::size_t off = 0;
    for (int i : std::array<int, sizeof...(I)>{static_cast<int>(idx)...}) {
      off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    }
    return off;
  }

  int dim_ = 0;
  int rank_ = 0;
  std::vector<T> data_;
};

}  // namespace hg
