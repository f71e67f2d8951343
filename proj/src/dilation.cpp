#include "sebkit/dilation.hpp"

#include <algorithm>
#include <string>

namespace sebkit {

DilationResult build_dilation(const HolevoChannel& ch, const Tolerances& tol) {
    if (ch.pairs.empty()) throw ValidationError("build_dilation: channel has no pairs");
    const Index d = ch.dim_in;
    const Index m = static_cast<Index>(ch.pairs.size());

    DilationResult out;
    out.block_count = m;
    out.block_dim = d;
    out.isometry.resize(d * m, d);
    for (Index k = 0; k < m; ++k) {
        try {
            out.isometry.middleRows(k * d, d) =
                psd_sqrt(ch.pairs[static_cast<std::size_t>(k)].effect, tol);
        } catch (const NotPSD& e) {
            throw NotPSDInput("build_dilation: effect " + std::to_string(k) + ": " + e.what());
        }
        out.preparations.push_back(ch.pairs[static_cast<std::size_t>(k)].state);
    }
    return out;
}

ComplexMatrix psi_apply(const DilationResult& dil, const ComplexMatrix& y) {
    const Index dp = dil.preparations.empty() ? 0 : dil.preparations.front().rows();
    if (y.rows() != dp || y.cols() != dp) {
        throw DimensionMismatch("psi_apply: operand is " + std::to_string(y.rows()) + "x" +
                                std::to_string(y.cols()) + ", expected " + std::to_string(dp) +
                                "x" + std::to_string(dp));
    }
    const Index d = dil.block_dim;
    ComplexMatrix out = ComplexMatrix::Zero(d * dil.block_count, d * dil.block_count);
    for (Index k = 0; k < dil.block_count; ++k) {
        const Complex scalar = (y * dil.preparations[static_cast<std::size_t>(k)]).trace();
        out.block(k * d, k * d, d, d) = scalar * ComplexMatrix::Identity(d, d);
    }
    return out;
}

ComplexMatrix predual_apply(const DilationResult& dil, const ComplexMatrix& z) {
    const Index d = dil.block_dim;
    const Index total = d * dil.block_count;
    if (z.rows() != total || z.cols() != total) {
        throw DimensionMismatch("predual_apply: operand is " + std::to_string(z.rows()) + "x" +
                                std::to_string(z.cols()) + ", expected " + std::to_string(total) +
                                "x" + std::to_string(total));
    }
    const Index dp = dil.preparations.front().rows();
    ComplexMatrix out = ComplexMatrix::Zero(dp, dp);
    for (Index k = 0; k < dil.block_count; ++k) {
        out += z.block(k * d, k * d, d, d).trace() * dil.preparations[static_cast<std::size_t>(k)];
    }
    return out;
}

DilationReport verify_dilation(const DilationResult& dil, const HolevoChannel& ch,
                               const Tolerances& tol) {
    const Index d = ch.dim_in;
    if (dil.block_dim != d || dil.block_count != static_cast<Index>(ch.pairs.size())) {
        throw DimensionMismatch("verify_dilation: dilation does not match channel shape");
    }

    DilationReport report;
    const ComplexMatrix& u = dil.isometry;
    report.isometry_residual =
        (u.adjoint() * u - ComplexMatrix::Identity(d, d)).norm();

    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            const ComplexMatrix unit = matrix_unit(d, i, j);
            const ComplexMatrix via_dilation = sebkit::predual_apply(dil, u * unit * u.adjoint());
            report.reconstruction_residual =
                std::max(report.reconstruction_residual,
                         (via_dilation - apply_channel(ch, unit)).norm());
        }
    }

    const std::vector<ComplexMatrix> basis = hermitian_basis(ch.dim_out);
    std::vector<ComplexMatrix> images;
    images.reserve(basis.size());
    for (const ComplexMatrix& h : basis) images.push_back(psi_apply(dil, h));
    for (std::size_t a = 0; a < images.size(); ++a) {
        for (std::size_t b = a + 1; b < images.size(); ++b) {
            report.commutativity_residual =
                std::max(report.commutativity_residual,
                         (images[a] * images[b] - images[b] * images[a]).norm());
        }
    }

    report.ok = report.isometry_residual <= tol.eps_recon &&
                report.reconstruction_residual <= tol.eps_recon &&
                report.commutativity_residual <= tol.eps_comm;
    return report;
}

}  // namespace sebkit
