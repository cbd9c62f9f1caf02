#pragma once

#include <stdexcept>

#include "sbmca/types.hpp"

namespace sbmca {

// m x q matrix of non-overlapping length-m signal segments. Column j holds
// samples [j*m, (j+1)*m) of the zero-padded signal.
struct BlockMatrix {
    Matrix data;        // m rows, q columns
    Index block_len{0}; // m
    Index orig_len{0};  // n, before padding
    Index pad{0};       // trailing zeros, 0 <= pad < m

    Index rows() const { return data.rows(); }
    Index cols() const { return data.cols(); }

    bool consistent() const {
        return data.rows() == block_len && pad >= 0 && pad < block_len &&
               block_len * data.cols() == orig_len + pad;
    }
};

inline BlockMatrix blockify(const Vector& x, Index m) {
    if (m <= 0) throw std::invalid_argument("blockify: block length must be positive");
    const Index n = x.size();
    if (n <= 0) throw std::invalid_argument("blockify: signal must be non-empty");

    const Index pad = (m - n % m) % m;
    const Index q = (n + pad) / m;

    BlockMatrix B;
    B.block_len = m;
    B.orig_len = n;
    B.pad = pad;
    B.data = Matrix::Zero(m, q);
    for (Index j = 0; j < q; ++j) {
        const Index start = j * m;
        const Index len = std::min(m, n - start);
        B.data.col(j).head(len) = x.segment(start, len);
    }
    return B;
}

inline Vector deblockify(const BlockMatrix& B) {
    if (!B.consistent())
        throw std::runtime_error("deblockify: inconsistent block metadata");
    Vector x(B.orig_len);
    const Index m = B.block_len;
    for (Index j = 0; j < B.cols(); ++j) {
        const Index start = j * m;
        const Index len = std::min(m, B.orig_len - start);
        if (len <= 0) break;
        x.segment(start, len) = B.data.col(j).head(len);
    }
    return x;
}

} // namespace sbmca
