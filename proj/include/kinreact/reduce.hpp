#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace kinreact {

/// Neumaier-compensated accumulator. Conservation residuals are asserted at
/// 1e-10 and below, so every global reduction in the library goes through
/// this instead of a bare +=.
struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

inline double compensated_sum(std::span<const double> xs) {
    Accumulator acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

/// Deterministic parallel reduction: row partials are computed independently
/// (one spatial cell per row) and combined serially in index order, so the
/// result is bitwise identical for any thread count.
template <class RowValue>
double reduce_rows(int n_rows, RowValue&& row_value) {
    std::vector<double> partial(static_cast<std::size_t>(n_rows));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_rows; ++i) partial[static_cast<std::size_t>(i)] = row_value(i);
    return compensated_sum(partial);
}

inline double sup_abs(std::span<const double> xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
}

} // namespace kinreact
