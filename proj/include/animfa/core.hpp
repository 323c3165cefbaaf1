#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace animfa {

/// Error raised by every validation and numerical failure in the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense row-major n x n matrix. Communities are indexed 0..n-1.
template <class T>
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

    std::size_t size() const noexcept { return n_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    std::vector<T>& data() noexcept { return data_; }
    const std::vector<T>& data() const noexcept { return data_; }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<T> data_;
};

using Matrix = SquareMatrix<double>;

/// Link support: a nonzero entry (i, j) means the pair carries a link density z_ij.
using Mask = SquareMatrix<std::uint8_t>;

inline Mask full_mask(std::size_t n) { return Mask(n, 1); }

inline std::string pair_name(std::size_t i, std::size_t j)
{
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

} // namespace animfa
