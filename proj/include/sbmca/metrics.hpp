#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbmca/blocking.hpp"
#include "sbmca/types.hpp"

namespace sbmca {

// Reconstruction SNR; `exact` marks a zero-error reconstruction (infinite dB).
struct SnrValue {
    double db = 0.0;
    bool exact = false;
};

inline SnrValue reconstruction_snr(const Vector& ref, const Vector& est) {
    if (ref.size() != est.size())
        throw std::invalid_argument("reconstruction_snr: length mismatch");
    const double ref_sq = ref.squaredNorm();
    if (ref_sq == 0.0)
        throw std::invalid_argument("reconstruction_snr: zero-norm reference");
    const double err_sq = (ref - est).squaredNorm();
    if (err_sq == 0.0) return {std::numeric_limits<double>::infinity(), true};
    return {10.0 * std::log10(ref_sq / err_sq), false};
}

// Sentinel for blocks whose reference has zero norm (excluded from histograms).
inline constexpr double kZeroBlockSentinel = -1.0;

inline Vector per_block_errors(const BlockMatrix& ref, const BlockMatrix& est,
                               int* zero_block_count = nullptr) {
    if (ref.rows() != est.rows() || ref.cols() != est.cols())
        throw std::invalid_argument("per_block_errors: shape mismatch");
    Vector errors(ref.cols());
    int zeros = 0;
    for (Index j = 0; j < ref.cols(); ++j) {
        const double ref_norm = ref.data.col(j).norm();
        if (ref_norm == 0.0) {
            errors(j) = kZeroBlockSentinel;
            ++zeros;
        } else {
            errors(j) = (ref.data.col(j) - est.data.col(j)).norm() / ref_norm;
        }
    }
    if (zero_block_count != nullptr) *zero_block_count = zeros;
    return errors;
}

struct HistogramBin {
    double lo, hi;
    long count;
};

// Left-closed right-open bins, last bin closed; out-of-range values are
// clamped into the end bins so counts conserve cardinality. Sentinel
// (negative) entries are skipped.
inline std::vector<HistogramBin> histogram(const Vector& values, int bins,
                                           double lo, double hi) {
    if (bins < 1 || !(lo < hi)) throw std::invalid_argument("histogram: bad bins or range");
    std::vector<HistogramBin> out(static_cast<std::size_t>(bins));
    const double width = (hi - lo) / bins;
    for (int b = 0; b < bins; ++b)
        out[static_cast<std::size_t>(b)] = {lo + b * width, lo + (b + 1) * width, 0};
    for (Index i = 0; i < values.size(); ++i) {
        const double v = values(i);
        if (v == kZeroBlockSentinel) continue;
        int b = static_cast<int>(std::floor((v - lo) / width));
        if (b < 0) b = 0;
        if (b >= bins) b = bins - 1;
        ++out[static_cast<std::size_t>(b)].count;
    }
    return out;
}

struct EvalReport {
    SnrValue snr_xp, snr_xu;
    Vector block_errors_xp, block_errors_xu;
    int zero_blocks_xp = 0, zero_blocks_xu = 0;
    std::string method;
    std::string params; // snapshot, e.g. "lambda=0.25"
};

// Default clairvoyant lambda grid: log-spaced with `per_decade` points per
// decade over [1e-3, 1e1] * scale, where scale is max |D^T X|.
inline std::vector<double> default_lambda_grid(double scale, int per_decade = 7,
                                               double lo = 1e-3, double hi = 1e1) {
    if (per_decade < 1 || !(lo < hi) || scale <= 0.0)
        throw std::invalid_argument("default_lambda_grid: bad parameters");
    std::vector<double> grid;
    const double step = 1.0 / per_decade;
    for (double e = std::log10(lo); e <= std::log10(hi) + 1e-12; e += step)
        grid.push_back(scale * std::pow(10.0, e));
    return grid;
}

} // namespace sbmca
