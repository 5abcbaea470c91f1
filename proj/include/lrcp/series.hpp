#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "lrcp/errors.hpp"

namespace lrcp {

/// An ordered sequence of finite real observations X_1..X_n.
///
/// Validation happens once at construction: the series must be nonempty and
/// every value finite. Statistical kernels accept `std::span<const double>`
/// so that segment views never copy; Series converts implicitly.
class Series {
public:
    explicit Series(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) {
            throw InputError("series must contain at least one observation");
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw InputError("series value at position " + std::to_string(i + 1) +
                                 " is not finite");
            }
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    [[nodiscard]] std::span<const double> prefix(std::size_t k) const noexcept {
        return std::span<const double>(values_).first(k);
    }
    [[nodiscard]] std::span<const double> suffix_from(std::size_t k) const noexcept {
        return std::span<const double>(values_).subspan(k);
    }

    operator std::span<const double>() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

}  // namespace lrcp
