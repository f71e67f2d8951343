#pragma once

// Seeded random generators shared by the unit and acceptance suites.

#include <random>
#include <vector>

#include "sebkit/channel.hpp"
#include "sebkit/nullspace.hpp"
#include "sebkit/rng.hpp"
#include "sebkit/structure.hpp"

namespace testsup {

using sebkit::Complex;
using sebkit::ComplexMatrix;
using sebkit::ComplexVector;
using sebkit::Index;

inline ComplexMatrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
    ComplexMatrix out(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            out(i, j) = Complex(sebkit::gaussian(rng), sebkit::gaussian(rng));
        }
    }
    return out;
}

inline ComplexVector random_vector(std::mt19937_64& rng, Index dim) {
    ComplexVector out(dim);
    for (Index i = 0; i < dim; ++i) {
        out(i) = Complex(sebkit::gaussian(rng), sebkit::gaussian(rng));
    }
    return out;
}

inline ComplexVector random_unit_vector(std::mt19937_64& rng, Index dim) {
    ComplexVector v = random_vector(rng, dim);
    return v / v.norm();
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Index dim) {
    return sebkit::hermitian_part(random_matrix(rng, dim, dim));
}

inline ComplexMatrix random_psd(std::mt19937_64& rng, Index dim) {
    const ComplexMatrix c = random_matrix(rng, dim, dim);
    return c.adjoint() * c;
}

inline ComplexMatrix random_state(std::mt19937_64& rng, Index dim) {
    const ComplexMatrix p = random_psd(rng, dim);
    return p / p.trace().real();
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, Index dim) {
    const ComplexMatrix g = random_matrix(rng, dim, dim);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

// POVM via S^{-1/2} G_k S^{-1/2} with random PSD G_k.
inline std::vector<ComplexMatrix> random_povm(std::mt19937_64& rng, Index dim, Index count) {
    std::vector<ComplexMatrix> parts;
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (Index k = 0; k < count; ++k) {
        parts.push_back(random_psd(rng, dim));
        sum += parts.back();
    }
    const sebkit::EigDecomposition eig = sebkit::eigh(sum);
    sebkit::RealVector inv_roots = eig.eigenvalues;
    for (Index i = 0; i < dim; ++i) inv_roots(i) = 1.0 / std::sqrt(inv_roots(i));
    const ComplexMatrix whiten =
        eig.eigenvectors * inv_roots.asDiagonal() * eig.eigenvectors.adjoint();
    for (ComplexMatrix& part : parts) {
        part = sebkit::hermitian_part(whiten * part * whiten);
    }
    return parts;
}

inline sebkit::HolevoChannel random_holevo(std::mt19937_64& rng, Index dim_in, Index dim_out,
                                           Index count) {
    sebkit::HolevoChannel ch;
    ch.dim_in = dim_in;
    ch.dim_out = dim_out;
    const std::vector<ComplexMatrix> effects = random_povm(rng, dim_in, count);
    for (Index k = 0; k < count; ++k) {
        ch.pairs.push_back({random_state(rng, dim_out), effects[static_cast<std::size_t>(k)]});
    }
    return ch;
}

// Commutative-range construction: preparation states diagonal in one common
// random basis.
inline sebkit::HolevoChannel random_commutative_range_holevo(std::mt19937_64& rng, Index dim,
                                                             Index count) {
    sebkit::HolevoChannel ch;
    ch.dim_in = dim;
    ch.dim_out = dim;
    const ComplexMatrix basis = random_unitary(rng, dim);
    const std::vector<ComplexMatrix> effects = random_povm(rng, dim, count);
    for (Index k = 0; k < count; ++k) {
        sebkit::RealVector probs(dim);
        double total = 0.0;
        for (Index i = 0; i < dim; ++i) {
            probs(i) = sebkit::uniform_unit(rng) + 1e-3;
            total += probs(i);
        }
        probs /= total;
        const ComplexMatrix state = basis * probs.cast<Complex>().asDiagonal() * basis.adjoint();
        ch.pairs.push_back({sebkit::hermitian_part(state), effects[static_cast<std::size_t>(k)]});
    }
    return ch;
}

// Random CPTP channel from a random isometry into dim_out (x) env.
inline sebkit::KrausChannel random_cptp_kraus(std::mt19937_64& rng, Index dim_in, Index dim_out,
                                              Index env) {
    const ComplexMatrix big = random_matrix(rng, dim_out * env, dim_in);
    Eigen::HouseholderQR<ComplexMatrix> qr(big);
    const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim_out * env, dim_in);
    sebkit::KrausChannel ch;
    ch.dim_in = dim_in;
    ch.dim_out = dim_out;
    for (Index k = 0; k < env; ++k) {
        ch.kraus.push_back(q.middleRows(k * dim_out, dim_out));
    }
    return ch;
}

// Rank-one channel with sum v_k v_k* = I via whitened random vectors.
inline sebkit::RankOneKraus random_rank_one(std::mt19937_64& rng, Index dim, Index count) {
    ComplexMatrix g(dim, count);
    for (Index k = 0; k < count; ++k) g.col(k) = random_vector(rng, dim);
    const ComplexMatrix gram = g * g.adjoint();
    const sebkit::EigDecomposition eig = sebkit::eigh(sebkit::hermitian_part(gram));
    sebkit::RealVector inv_roots = eig.eigenvalues;
    for (Index i = 0; i < dim; ++i) inv_roots(i) = 1.0 / std::sqrt(inv_roots(i));
    const ComplexMatrix whiten =
        eig.eigenvectors * inv_roots.asDiagonal() * eig.eigenvectors.adjoint();

    sebkit::RankOneKraus ch;
    ch.dim_in = dim;
    ch.dim_out = dim;
    for (Index k = 0; k < count; ++k) {
        sebkit::RankOneTerm term;
        term.v = whiten * g.col(k);
        term.u = random_unit_vector(rng, dim);
        ch.terms.push_back(std::move(term));
    }
    return ch;
}

// Rank-one channel whose u_k and v_k respect a two-block splitting of the
// space; the block projector then commutes with every Kraus operator.
inline sebkit::RankOneKraus random_block_rank_one(std::mt19937_64& rng, Index block_a,
                                                  Index block_b) {
    const Index dim = block_a + block_b;
    sebkit::RankOneKraus ch;
    ch.dim_in = dim;
    ch.dim_out = dim;

    const ComplexMatrix wa = random_unitary(rng, block_a);
    const ComplexMatrix wb = random_unitary(rng, block_b);
    for (Index k = 0; k < block_a; ++k) {
        sebkit::RankOneTerm term;
        term.v = ComplexVector::Zero(dim);
        term.v.head(block_a) = wa.col(k);
        term.u = ComplexVector::Zero(dim);
        term.u.head(block_a) = random_unit_vector(rng, block_a);
        ch.terms.push_back(std::move(term));
    }
    for (Index k = 0; k < block_b; ++k) {
        sebkit::RankOneTerm term;
        term.v = ComplexVector::Zero(dim);
        term.v.tail(block_b) = wb.col(k);
        term.u = ComplexVector::Zero(dim);
        term.u.tail(block_b) = random_unit_vector(rng, block_b);
        ch.terms.push_back(std::move(term));
    }
    return ch;
}

// Self-adjoint trace-zero subspace of complex dimension `count`, presented
// through complex mixtures of a Hermitian spanning set.
inline sebkit::SubspaceSpec random_subspace(std::mt19937_64& rng, Index dim, Index count) {
    std::vector<ComplexMatrix> hermitians;
    for (Index k = 0; k < count; ++k) {
        ComplexMatrix h = random_hermitian(rng, dim);
        h -= (h.trace() / static_cast<double>(dim)) * ComplexMatrix::Identity(dim, dim);
        hermitians.push_back(std::move(h));
    }
    sebkit::SubspaceSpec spec;
    spec.dim = dim;
    for (Index k = 0; k < count; ++k) {
        ComplexMatrix g = ComplexMatrix::Zero(dim, dim);
        for (Index l = 0; l < count; ++l) {
            g += Complex(sebkit::uniform_pm1(rng), sebkit::uniform_pm1(rng)) *
                 hermitians[static_cast<std::size_t>(l)];
        }
        // Keep the span equal to the Hermitian span: bias toward the k-th.
        g += 2.0 * static_cast<double>(count) * hermitians[static_cast<std::size_t>(k)];
        spec.generators.push_back(std::move(g));
    }
    return spec;
}

}  // namespace testsup
