#include "sebkit/nullspace.hpp"

#include <cmath>
#include <string>

namespace sebkit {

namespace {

// Columns are vec(g) for every generator.
ComplexMatrix span_matrix(const std::vector<ComplexMatrix>& mats, Index dim) {
    ComplexMatrix out(dim * dim, static_cast<Index>(mats.size()));
    for (std::size_t c = 0; c < mats.size(); ++c) {
        out.col(static_cast<Index>(c)) = vec(mats[c]);
    }
    return out;
}

Index numerical_rank(const ComplexMatrix& a, double cutoff_rel) {
    if (a.cols() == 0 || a.rows() == 0) return 0;
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    const RealVector& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cutoff = cutoff_rel * sv(0);
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    return rank;
}

double operator_norm(const ComplexMatrix& a) {
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

}  // namespace

void validate(const SubspaceSpec& spec, const Tolerances& tol) {
    if (spec.dim <= 0) throw DimensionMismatch("subspace: dimension must be positive");
    for (std::size_t j = 0; j < spec.generators.size(); ++j) {
        const ComplexMatrix& g = spec.generators[j];
        if (g.rows() != spec.dim || g.cols() != spec.dim) {
            throw DimensionMismatch("subspace.generators[" + std::to_string(j) + "]: expected " +
                                    std::to_string(spec.dim) + "x" + std::to_string(spec.dim));
        }
        check_finite(g, "subspace.generators[" + std::to_string(j) + "]");
        if (std::abs(g.trace()) > tol.eps_recon) {
            throw NotTraceZero("subspace.generators[" + std::to_string(j) + "]: trace " +
                               std::to_string(std::abs(g.trace())) + " exceeds eps_recon");
        }
    }

    std::vector<ComplexMatrix> with_adjoints = spec.generators;
    for (const ComplexMatrix& g : spec.generators) with_adjoints.push_back(g.adjoint());
    const Index base_rank = numerical_rank(span_matrix(spec.generators, spec.dim), tol.eps_rank);
    const Index closed_rank = numerical_rank(span_matrix(with_adjoints, spec.dim), tol.eps_rank);
    if (closed_rank > base_rank) {
        throw NotSelfAdjoint("subspace: adjoining adjoints raises the span rank from " +
                             std::to_string(base_rank) + " to " + std::to_string(closed_rank));
    }
}

Index subspace_dimension(const SubspaceSpec& spec, const Tolerances& tol) {
    return numerical_rank(span_matrix(spec.generators, spec.dim), tol.eps_rank);
}

std::vector<ComplexMatrix> orthocomplement(const SubspaceSpec& spec, const Tolerances& tol) {
    validate(spec, tol);
    const Index d = spec.dim;
    const Index total = d * d;

    // Complex orthonormal basis of the complement. Under the trace pairing a
    // self-adjoint subspace has the same complement as under the HS inner
    // product, so the SVD of the vectorized span gives it directly.
    std::vector<ComplexMatrix> complement;
    if (spec.generators.empty()) {
        for (Index i = 0; i < total; ++i) {
            complement.push_back(unvec(ComplexVector::Unit(total, i), d, d));
        }
    } else {
        const ComplexMatrix a = span_matrix(spec.generators, d);
        Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU);
        const RealVector& sv = svd.singularValues();
        const double cutoff = sv.size() > 0 && sv(0) > 0.0 ? tol.eps_rank * sv(0) : 0.0;
        Index rank = 0;
        while (rank < sv.size() && sv(rank) > cutoff) ++rank;
        for (Index c = rank; c < total; ++c) {
            complement.push_back(unvec(svd.matrixU().col(c), d, d));
        }
    }
    const std::size_t m = complement.size();

    // Hermitian candidates spanning the complement's Hermitian real form.
    std::vector<ComplexMatrix> candidates;
    candidates.reserve(2 * m);
    const Complex half_over_i(0.0, -0.5);
    for (const ComplexMatrix& y : complement) {
        candidates.push_back(hermitian_part(y));
        candidates.push_back(half_over_i * (y - y.adjoint()));
    }

    // Real Gram-Schmidt under the HS inner product, seeded with I.
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<ComplexMatrix> ortho;  // HS-orthonormal
    ortho.push_back(inv_sqrt_d * ComplexMatrix::Identity(d, d));
    for (const ComplexMatrix& cand : candidates) {
        if (ortho.size() == m) break;
        ComplexMatrix residual = cand;
        for (const ComplexMatrix& q : ortho) {
            const double overlap = (q.adjoint() * residual).trace().real();
            residual -= overlap * q;
        }
        const double norm = residual.norm();
        if (norm > tol.eps_rank * (1.0 + cand.norm())) {
            ortho.push_back(residual / norm);
        }
    }
    if (ortho.size() != m) {
        throw NumericalFailure("orthocomplement: extracted " + std::to_string(ortho.size()) +
                               " Hermitian directions, expected " + std::to_string(m));
    }

    std::vector<ComplexMatrix> basis;
    basis.reserve(m);
    basis.push_back(ComplexMatrix::Identity(d, d));
    for (std::size_t k = 1; k < m; ++k) {
        const ComplexMatrix g = hermitian_part(ortho[k]);
        basis.push_back(g / operator_norm(g));
    }
    return basis;
}

std::vector<ComplexMatrix> build_effects(const std::vector<ComplexMatrix>& basis,
                                         const Tolerances& tol) {
    if (basis.empty()) throw ValidationError("build_effects: empty basis");
    const Index d = basis.front().rows();
    if ((basis.front() - ComplexMatrix::Identity(d, d)).norm() > tol.eps_herm * (1.0 + std::sqrt(static_cast<double>(d)))) {
        throw ValidationError("build_effects: first basis element must be the identity");
    }

    const std::size_t m = basis.size();
    std::vector<ComplexMatrix> effects(m);
    ComplexMatrix tail = ComplexMatrix::Zero(d, d);
    double weight = 1.0;
    for (std::size_t k = 1; k < m; ++k) {
        weight *= 0.5;  // 2^-k with k starting at 2
        const ComplexMatrix f_tilde = ComplexMatrix::Identity(d, d) + 0.5 * basis[k];
        effects[k] = (0.5 * weight) * f_tilde;
        tail += effects[k];
    }
    effects[0] = ComplexMatrix::Identity(d, d) - tail;

    const EigDecomposition eig = eigh(effects[0], tol);
    const double lambda_min = eig.eigenvalues(d - 1);
    if (lambda_min < 0.25 - tol.eps_psd) {
        throw CertificationFailure("f1_lower_bound", lambda_min,
                                   "build_effects: lambda_min(F_1) = " +
                                       std::to_string(lambda_min) + " below 1/4");
    }
    return effects;
}

NullspaceChannel synthesize_channel(const SubspaceSpec& spec, const Tolerances& tol) {
    NullspaceChannel out;
    out.effects_basis = orthocomplement(spec, tol);
    std::vector<ComplexMatrix> effects = build_effects(out.effects_basis, tol);

    const Index d = spec.dim;
    const std::size_t m = effects.size();
    for (std::size_t k = 1; k < m; ++k) {
        out.f_tilde.push_back(ComplexMatrix::Identity(d, d) + 0.5 * out.effects_basis[k]);
    }
    const EigDecomposition eig = eigh(effects[0], tol);
    out.lambda_min_f1 = eig.eigenvalues(d - 1);

    out.channel.dim_in = d;
    out.channel.dim_out = static_cast<Index>(m);
    for (std::size_t k = 0; k < m; ++k) {
        HolevoPair pair;
        pair.state = matrix_unit(static_cast<Index>(m), static_cast<Index>(k),
                                 static_cast<Index>(k));
        pair.effect = std::move(effects[k]);
        out.channel.pairs.push_back(std::move(pair));
    }
    return out;
}

NullspaceReport verify_nullspace(const NullspaceChannel& out, const SubspaceSpec& spec,
                                 const Tolerances& tol) {
    const Index d = spec.dim;
    if (out.channel.dim_in != d) {
        throw DimensionMismatch("verify_nullspace: channel input dimension " +
                                std::to_string(out.channel.dim_in) + " does not match subspace " +
                                std::to_string(d));
    }

    NullspaceReport report;
    bool generators_ok = true;
    for (const ComplexMatrix& g : spec.generators) {
        const ComplexMatrix image = apply_channel(out.channel, g);
        const double image_trace_norm = norms_and_psd_check(image, tol).trace_norm;
        const double generator_trace_norm = norms_and_psd_check(g, tol).trace_norm;
        report.generator_residuals.push_back(image_trace_norm);
        if (image_trace_norm > tol.eps_recon * (1.0 + generator_trace_norm)) {
            generators_ok = false;
        }
    }

    // Effect map X -> (Tr(F_k X))_k, rows normalized: rank is invariant under
    // row scaling and the geometric 2^-k weights would defeat any single
    // SVD cutoff otherwise.
    const std::size_t m = out.channel.pairs.size();
    ComplexMatrix effect_map(static_cast<Index>(m), d * d);
    for (std::size_t k = 0; k < m; ++k) {
        const ComplexMatrix row = out.channel.pairs[k].effect.transpose();
        effect_map.row(static_cast<Index>(k)) = vec(row).transpose();
        const double norm = effect_map.row(static_cast<Index>(k)).norm();
        if (norm > 0.0) effect_map.row(static_cast<Index>(k)) /= norm;
    }
    report.rank_of_effect_map = numerical_rank(effect_map, tol.eps_rank);
    report.expected_rank = d * d - subspace_dimension(spec, tol);

    report.ok = generators_ok && report.rank_of_effect_map == report.expected_rank;
    return report;
}

}  // namespace sebkit
