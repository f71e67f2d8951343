#pragma once

#include <vector>

#include "sebkit/channel.hpp"

namespace sebkit {

// Isometry U: H -> E stacking sqrt(F_k) blocks, E = m copies of the input
// space. Together with the preparations it realizes the channel as the
// predual of a block-scalar (hence commutative-range) map.
struct DilationResult {
    ComplexMatrix isometry;                   // (block_dim * block_count) x block_dim
    Index block_count = 0;                    // m
    Index block_dim = 0;                      // input dimension d
    std::vector<ComplexMatrix> preparations;  // R_k of the source channel

    Index dilation_dim() const { return block_dim * block_count; }
};

DilationResult build_dilation(const HolevoChannel& ch, const Tolerances& tol = {});

// Psi(y) = direct sum over k of Tr(y R_k) I_d; outputs pairwise commute.
ComplexMatrix psi_apply(const DilationResult& dil, const ComplexMatrix& y);

// Predual: z on E maps to sum_k Tr(z_kk) R_k with z_kk the diagonal blocks.
ComplexMatrix predual_apply(const DilationResult& dil, const ComplexMatrix& z);

struct DilationReport {
    double isometry_residual = 0.0;
    double reconstruction_residual = 0.0;
    double commutativity_residual = 0.0;
    bool ok = false;
};

DilationReport verify_dilation(const DilationResult& dil, const HolevoChannel& ch,
                               const Tolerances& tol = {});

}  // namespace sebkit
