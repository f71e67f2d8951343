#pragma once

#include <vector>

#include "sebkit/channel.hpp"

namespace sebkit {

// A self-adjoint subspace of trace-zero operators, given by a spanning set.
struct SubspaceSpec {
    Index dim = 0;
    std::vector<ComplexMatrix> generators;  // each dim x dim
};

// Throws NotTraceZero / NotSelfAdjoint / DimensionMismatch.
void validate(const SubspaceSpec& spec, const Tolerances& tol = {});

// Numerical dimension of the spanned complex subspace.
Index subspace_dimension(const SubspaceSpec& spec, const Tolerances& tol = {});

// Hermitian basis {G_1 = I, G_2, ..., G_m} of the trace-pairing complement,
// m = dim^2 - dim(span); the G_k for k >= 2 are traceless, mutually
// HS-orthogonal, and scaled to operator norm 1.
std::vector<ComplexMatrix> orthocomplement(const SubspaceSpec& spec, const Tolerances& tol = {});

// Geometric-weight POVM spanning the same space as the basis:
// F_k = 2^-k (I + G_k/2) for k >= 2 and F_1 = I - sum of the rest.
std::vector<ComplexMatrix> build_effects(const std::vector<ComplexMatrix>& basis,
                                         const Tolerances& tol = {});

struct NullspaceChannel {
    HolevoChannel channel;                   // dim_in = d, dim_out = m
    std::vector<ComplexMatrix> effects_basis;  // {G_k}
    std::vector<ComplexMatrix> f_tilde;        // I + G_k/2 for k >= 2
    double lambda_min_f1 = 0.0;
};

// Measure-and-prepare channel whose null space is exactly span(spec).
NullspaceChannel synthesize_channel(const SubspaceSpec& spec, const Tolerances& tol = {});

struct NullspaceReport {
    std::vector<double> generator_residuals;  // ||Phi(N_j)||_1, one per generator
    Index rank_of_effect_map = 0;
    Index expected_rank = 0;
    bool ok = false;
};

// Both inclusions: generators are annihilated, and X -> (Tr(F_k X))_k has
// full expected rank so the null space is no larger than the span.
NullspaceReport verify_nullspace(const NullspaceChannel& out, const SubspaceSpec& spec,
                                 const Tolerances& tol = {});

}  // namespace sebkit
