#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "sbmca/dictionary.hpp"
#include "sbmca/solvers.hpp"
#include "sbmca/types.hpp"

namespace sbmca {

struct DictLearnOptions {
    Index num_atoms = 64;             // ell
    double lambda2 = 0.1;
    int inner_iters = 20;
    double dead_atom_threshold = 1e-8; // max |row of A2| below which an atom is dead
    std::uint64_t seed = 0;
    LassoOptions lasso;
};

struct DictLearnResult {
    Dictionary dict;                  // m x ell, unit-norm atoms
    SparseCode code;                  // ell x q
    std::vector<double> objective;    // per round, after the atom update
    std::vector<int> dead_replaced;   // per round, atoms re-initialized
    bool degenerate = false;          // R was all zero
};

// Seeds atoms from ell distinct columns of R chosen uniformly at random;
// zero columns fall back to random Gaussian unit vectors.
inline Dictionary init_atoms(const Matrix& R, Index num_atoms, std::uint64_t seed) {
    if (R.cols() < 1 || num_atoms < 1)
        throw std::invalid_argument("init_atoms: need at least one column and one atom");
    std::mt19937_64 rng(seed);
    std::vector<Index> perm(static_cast<std::size_t>(R.cols()));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);

    std::normal_distribution<double> gauss(0.0, 1.0);
    Dictionary D;
    D.id = "learned";
    D.atoms.resize(R.rows(), num_atoms);
    for (Index k = 0; k < num_atoms; ++k) {
        Vector atom;
        if (k < R.cols()) atom = R.col(perm[static_cast<std::size_t>(k)]);
        if (k >= R.cols() || atom.norm() == 0.0) {
            atom.resize(R.rows());
            do {
                for (Index t = 0; t < atom.size(); ++t) atom(t) = gauss(rng);
            } while (atom.norm() == 0.0);
        }
        D.atoms.col(k) = atom / atom.norm();
        D.labels.push_back("learned-" + std::to_string(k));
    }
    return D;
}

namespace detail {

inline Vector random_unit_vector(Index m, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(m);
    do {
        for (Index t = 0; t < m; ++t) v(t) = gauss(rng);
    } while (v.norm() == 0.0);
    return v / v.norm();
}

} // namespace detail

// Alternates sparse coding A2 <- lasso(D2, R, lambda2) with sequential
// rank-one least-squares atom updates. Atom update for k on the residual
// E_k = R - D2 A2 + d_k a_k: direction E_k a_k^T / ||a_k||^2, renormalized
// to unit norm with row k of A2 rescaled so D2*A2 is unchanged. An update
// is kept only when it does not increase the full objective
// ||R - D2 A2||_F^2 + lambda2*||A2||_1 (the row rescale perturbs the l1
// term). Dead atoms are replaced by the worst-residual column.
inline DictLearnResult learn_dictionary(const Matrix& R, const DictLearnOptions& opts) {
    if (!R.allFinite()) throw std::invalid_argument("learn_dictionary: non-finite input");
    if (opts.num_atoms < 1 || opts.inner_iters < 1 || opts.lambda2 <= 0.0)
        throw std::invalid_argument("learn_dictionary: invalid options");

    const Index q = R.cols();
    DictLearnResult res;
    res.dict = init_atoms(R, opts.num_atoms, opts.seed);
    res.code.dict_id = res.dict.id;
    res.code.coeffs = Matrix::Zero(opts.num_atoms, q);
    if (R.isZero(0.0)) {
        res.degenerate = true;
        return res;
    }

    std::mt19937_64 rng(opts.seed + 0x9e3779b97f4a7c15ULL);
    Matrix& D = res.dict.atoms;
    Matrix& A = res.code.coeffs;
    double prev_obj = std::numeric_limits<double>::infinity();

    for (int round = 0; round < opts.inner_iters; ++round) {
        res.code = lasso(res.dict, R, opts.lambda2, opts.lasso, &A);

        Matrix E = R - D * A; // running residual, updated per atom
        int dead = 0;
        for (Index k = 0; k < opts.num_atoms; ++k) {
            Vector row = A.row(k).transpose();
            E.noalias() += D.col(k) * row.transpose();
            const double row_sq = row.squaredNorm();
            if (row.lpNorm<Eigen::Infinity>() <= opts.dead_atom_threshold) {
                // re-seed from the column the current model explains worst
                Index worst = 0;
                double worst_err = -1.0;
                for (Index j = 0; j < q; ++j) {
                    const double e = E.col(j).squaredNorm();
                    if (e > worst_err) {
                        worst_err = e;
                        worst = j;
                    }
                }
                Vector col = R.col(worst);
                D.col(k) = (col.norm() > 0.0) ? Vector(col / col.norm())
                                              : detail::random_unit_vector(R.rows(), rng);
                A.row(k).setZero();
                ++dead;
                continue;
            }
            Vector dir = E * row / row_sq;
            const double scale = dir.norm();
            if (scale > 0.0) {
                // keep only if the quadratic gain covers the l1 change
                const double quad_before = (E - D.col(k) * row.transpose()).squaredNorm();
                const double quad_after =
                    (E - (dir / scale) * (scale * row).transpose()).squaredNorm();
                const double l1_change =
                    opts.lambda2 * (scale - 1.0) * row.lpNorm<1>();
                if (quad_before - quad_after >= l1_change) {
                    D.col(k) = dir / scale;
                    A.row(k) = (scale * row).transpose();
                    row = A.row(k).transpose();
                }
            }
            E.noalias() -= D.col(k) * row.transpose();
        }

        const double obj =
            (R - D * A).squaredNorm() + opts.lambda2 * A.lpNorm<1>();
        res.objective.push_back(obj);
        res.dead_replaced.push_back(dead);
        if (dead == 0 && std::isfinite(prev_obj) &&
            std::abs(prev_obj - obj) < 1e-6 * std::max(1.0, std::abs(prev_obj)))
            break;
        prev_obj = obj;
    }
    return res;
}

} // namespace sbmca
