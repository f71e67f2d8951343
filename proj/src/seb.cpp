#include "sebkit/seb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sebkit {

namespace {

std::vector<ComplexMatrix> matrix_unit_images(const Channel& ch) {
    const Index d = dim_in(ch);
    std::vector<ComplexMatrix> images;
    images.reserve(static_cast<std::size_t>(d * d));
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            images.push_back(apply_channel(ch, matrix_unit(d, i, j)));
        }
    }
    return images;
}

void certify(bool ok, const char* invariant, double residual) {
    if (!ok) {
        throw CertificationFailure(invariant, residual,
                                   std::string("decompose_seb: invariant '") + invariant +
                                       "' violated with residual " + std::to_string(residual));
    }
}

}  // namespace

RangeCommutativityReport range_commutativity_test(const Channel& ch, const Tolerances& tol) {
    const Index d = dim_in(ch);
    const std::vector<ComplexMatrix> images = matrix_unit_images(ch);

    std::vector<double> norms(images.size());
    for (std::size_t a = 0; a < images.size(); ++a) norms[a] = images[a].norm();

    RangeCommutativityReport report;
    for (std::size_t a = 0; a < images.size(); ++a) {
        for (std::size_t b = a + 1; b < images.size(); ++b) {
            const double commutator = (images[a] * images[b] - images[b] * images[a]).norm();
            const double residual = commutator / (1.0 + norms[a] * norms[b]);
            if (residual > report.worst_residual) {
                report.worst_residual = residual;
                const Index ia = static_cast<Index>(a);
                const Index ib = static_cast<Index>(b);
                report.worst_first = {ia / d, ia % d};
                report.worst_second = {ib / d, ib % d};
            }
        }
    }
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            const double closure =
                (images[static_cast<std::size_t>(i * d + j)].adjoint() -
                 images[static_cast<std::size_t>(j * d + i)])
                    .norm();
            report.adjoint_closure_residual = std::max(report.adjoint_closure_residual, closure);
        }
    }
    report.commutes = report.worst_residual <= tol.eps_comm;
    return report;
}

SebDecomposition decompose_seb(const Channel& ch, const std::vector<double>& weights,
                               std::uint64_t seed, const Tolerances& tol) {
    const Index d = dim_in(ch);
    const Index dp = dim_out(ch);

    if (static_cast<Index>(weights.size()) != d) {
        throw BadWeights("decompose_seb: expected " + std::to_string(d) + " weights");
    }
    double weight_sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw BadWeights("decompose_seb: weights must be strictly positive");
        weight_sum += w;
    }
    if (std::abs(weight_sum - 1.0) > 1e-12) {
        throw BadWeights("decompose_seb: weights sum to " + std::to_string(weight_sum));
    }

    const RangeCommutativityReport range = range_commutativity_test(ch, tol);
    if (!range.commutes) {
        throw NotCommutativeRange(
            "decompose_seb: range is not commutative; worst pair (" +
            std::to_string(range.worst_first[0]) + "," + std::to_string(range.worst_first[1]) +
            ")x(" + std::to_string(range.worst_second[0]) + "," +
            std::to_string(range.worst_second[1]) + ") with relative residual " +
            std::to_string(range.worst_residual));
    }

    const std::vector<ComplexMatrix> images = matrix_unit_images(ch);
    const ComplexMatrix u = simultaneous_diagonalize(images, seed, tol);

    // Diagonals of the rotated family: rotated(i*d+j) column k holds
    // (U* M_ij U)_kk. Everything below reads off these numbers.
    ComplexMatrix rotated_diagonals(static_cast<Index>(images.size()), dp);
    for (std::size_t a = 0; a < images.size(); ++a) {
        rotated_diagonals.row(static_cast<Index>(a)) =
            (u.adjoint() * images[a] * u).diagonal().transpose();
    }

    SebDecomposition dec;
    dec.u = u;
    dec.weights = weights;
    dec.effects.reserve(static_cast<std::size_t>(dp));
    dec.preparations.reserve(static_cast<std::size_t>(dp));

    double kept_mass = 0.0;
    for (Index k = 0; k < dp; ++k) {
        ComplexMatrix effect(d, d);
        ComplexMatrix weighted(d, d);  // B_k with (i,j) = sqrt(w_i w_j) (U* M_ij U)_kk
        for (Index i = 0; i < d; ++i) {
            for (Index j = 0; j < d; ++j) {
                const Complex diag_entry = rotated_diagonals(i * d + j, k);
                // The effect satisfying Tr(F_k e_i e_j*) reconstruction is the
                // conjugate of the rotated diagonal (see duality of Tr(X F)).
                effect(i, j) = std::conj(diag_entry);
                weighted(i, j) = std::sqrt(weights[static_cast<std::size_t>(i)] *
                                           weights[static_cast<std::size_t>(j)]) *
                                 diag_entry;
            }
        }
        dec.effects.push_back(hermitian_part(effect));
        dec.preparations.push_back(u.col(k) * u.col(k).adjoint());

        const double p = weighted.trace().real();
        if (p > tol.eps_rank) {
            SebTerm term;
            term.probability = p;
            term.state = hermitian_part(weighted) / p;
            term.vector = u.col(k);
            dec.terms.push_back(std::move(term));
            kept_mass += p;
        } else {
            dec.dropped_mass += p;
        }
    }

    // Certification: the decomposition never leaves this function unchecked.
    certify((u.adjoint() * u - ComplexMatrix::Identity(dp, dp)).norm() <= tol.eps_herm,
            "orthonormal_vectors", (u.adjoint() * u - ComplexMatrix::Identity(dp, dp)).norm());

    const double mass_residual = std::abs(kept_mass + dec.dropped_mass - 1.0);
    certify(mass_residual <= tol.eps_recon, "probability_mass", mass_residual);

    ComplexMatrix effect_sum = ComplexMatrix::Zero(d, d);
    for (const ComplexMatrix& f : dec.effects) effect_sum += f;
    const double povm_residual = (effect_sum - ComplexMatrix::Identity(d, d)).norm();
    certify(povm_residual <= tol.eps_recon, "povm_sum", povm_residual);
    for (const ComplexMatrix& f : dec.effects) {
        const EigDecomposition eig = eigh(f, tol);
        const double lambda_min = eig.eigenvalues(d - 1);
        certify(lambda_min >= -tol.eps_psd, "effect_psd", lambda_min);
    }
    for (const SebTerm& term : dec.terms) {
        const EigDecomposition eig = eigh(term.state, tol);
        certify(eig.eigenvalues(d - 1) >= -tol.eps_psd, "state_psd", eig.eigenvalues(d - 1));
        certify(std::abs(term.state.trace().real() - 1.0) <= tol.eps_recon, "state_trace",
                std::abs(term.state.trace().real() - 1.0));
    }

    double recon_residual = 0.0;
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            ComplexMatrix rebuilt = ComplexMatrix::Zero(dp, dp);
            for (Index k = 0; k < dp; ++k) {
                rebuilt += dec.effects[static_cast<std::size_t>(k)](j, i) *
                           dec.preparations[static_cast<std::size_t>(k)];
            }
            recon_residual = std::max(
                recon_residual,
                (rebuilt - images[static_cast<std::size_t>(i * d + j)]).norm());
        }
    }
    certify(recon_residual <= tol.eps_recon, "reconstruction", recon_residual);

    if (d * dp <= 256) {
        const WeightedChoi sigma = weighted_choi(ch, weights);
        ComplexMatrix rebuilt = ComplexMatrix::Zero(d * dp, d * dp);
        for (const SebTerm& term : dec.terms) {
            rebuilt += term.probability *
                       tensor_product(term.state, term.vector * term.vector.adjoint());
        }
        const double sigma_residual = (rebuilt - sigma.sigma).norm();
        certify(sigma_residual <= tol.eps_recon, "sigma_decomposition", sigma_residual);
    }

    return dec;
}

SebDecomposition decompose_seb(const Channel& ch, std::uint64_t seed, const Tolerances& tol) {
    return decompose_seb(ch, uniform_weights(dim_in(ch)), seed, tol);
}

SeparabilityReport verify_separable_decomposition(const SebDecomposition& dec, const Channel& ch,
                                                  const Tolerances& tol) {
    const Index d = dim_in(ch);
    const Index dp = dim_out(ch);
    if (dec.effects.empty() || dec.preparations.size() != dec.effects.size()) {
        throw DimensionMismatch("verify_separable_decomposition: malformed decomposition");
    }
    if (dec.effects.front().rows() != d || static_cast<Index>(dec.weights.size()) != d) {
        throw DimensionMismatch(
            "verify_separable_decomposition: decomposition input dimension mismatch");
    }
    for (const SebTerm& term : dec.terms) {
        if (term.vector.size() != dp || term.state.rows() != d) {
            throw DimensionMismatch(
                "verify_separable_decomposition: term dimensions do not match channel");
        }
    }

    SeparabilityReport report;

    const WeightedChoi sigma = weighted_choi(ch, dec.weights);
    ComplexMatrix rebuilt_sigma = ComplexMatrix::Zero(d * dp, d * dp);
    for (const SebTerm& term : dec.terms) {
        rebuilt_sigma += term.probability *
                         tensor_product(term.state, term.vector * term.vector.adjoint());
    }
    report.sigma_residual = (rebuilt_sigma - sigma.sigma).norm();

    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            const ComplexMatrix unit = matrix_unit(d, i, j);
            ComplexMatrix rebuilt = ComplexMatrix::Zero(dp, dp);
            for (std::size_t k = 0; k < dec.effects.size(); ++k) {
                rebuilt += (dec.effects[k] * unit).trace() * dec.preparations[k];
            }
            report.reconstruction_residual = std::max(
                report.reconstruction_residual, (rebuilt - apply_channel(ch, unit)).norm());
        }
    }

    ComplexMatrix effect_sum = ComplexMatrix::Zero(d, d);
    double psd_min = std::numeric_limits<double>::infinity();
    for (const ComplexMatrix& f : dec.effects) {
        effect_sum += f;
        const EigDecomposition eig = eigh(hermitian_part(f), tol);
        psd_min = std::min(psd_min, eig.eigenvalues(d - 1));
    }
    report.povm_residual = (effect_sum - ComplexMatrix::Identity(d, d)).norm();
    report.psd_min = psd_min;

    report.ok = report.sigma_residual <= tol.eps_recon &&
                report.reconstruction_residual <= tol.eps_recon &&
                report.povm_residual <= tol.eps_recon && report.psd_min >= -tol.eps_psd;
    return report;
}

HolevoChannel decomposition_to_holevo(const SebDecomposition& dec) {
    HolevoChannel ch;
    ch.dim_in = dec.effects.empty() ? 0 : dec.effects.front().rows();
    ch.dim_out = dec.u.rows();
    for (std::size_t k = 0; k < dec.effects.size(); ++k) {
        ch.pairs.push_back({dec.preparations[k], dec.effects[k]});
    }
    return ch;
}

}  // namespace sebkit
