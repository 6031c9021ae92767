#pragma once

#include <cstddef>
#include <vector>

namespace mouldkit {

/// Pairwise (cascade) summation: O(log n) error growth instead of O(n),
/// which keeps large reductions comparable against naive oracles at 1e-12.
inline double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& values) {
    return pairwise_sum(values.data(), values.size());
}

}  // namespace mouldkit
