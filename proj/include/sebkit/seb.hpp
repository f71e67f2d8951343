#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sebkit/channel.hpp"

namespace sebkit {

struct RangeCommutativityReport {
    bool commutes = false;
    std::array<Index, 2> worst_first = {0, 0};   // (i, j) of the worst pair
    std::array<Index, 2> worst_second = {0, 0};  // (k, l) of the worst pair
    double worst_residual = 0.0;                 // relative Frobenius
    double adjoint_closure_residual = 0.0;       // max ||M_ij* - M_ji||_F
};

// One kept product term of sigma = sum_k p_k rho_k (x) v_k v_k*.
struct SebTerm {
    double probability = 0.0;  // p_k
    ComplexMatrix state;       // rho_k, dim_in x dim_in
    ComplexVector vector;      // v_k, dim_out
};

// Certified measure-and-prepare decomposition of a commutative-range channel.
// `effects` and `preparations` cover every k (complete POVM); `terms` keeps
// only the product terms with probability above eps_rank.
struct SebDecomposition {
    ComplexMatrix u;  // unitary diagonalizing the range, dim_out x dim_out
    std::vector<double> weights;
    std::vector<SebTerm> terms;
    std::vector<ComplexMatrix> effects;       // F_k, dim_in x dim_in
    std::vector<ComplexMatrix> preparations;  // R_k = v_k v_k*
    double dropped_mass = 0.0;
};

struct SeparabilityReport {
    double sigma_residual = 0.0;
    double reconstruction_residual = 0.0;
    double povm_residual = 0.0;
    double psd_min = 0.0;
    bool ok = false;
};

// Scans all matrix-unit images M_ij = Phi(e_i e_j*) for pairwise commutation.
RangeCommutativityReport range_commutativity_test(const Channel& ch, const Tolerances& tol = {});

// The constructive decomposition: joint-diagonalize the range, read the
// effects off the rotated diagonals, certify everything before returning.
SebDecomposition decompose_seb(const Channel& ch, const std::vector<double>& weights,
                               std::uint64_t seed, const Tolerances& tol = {});
SebDecomposition decompose_seb(const Channel& ch, std::uint64_t seed, const Tolerances& tol = {});

SeparabilityReport verify_separable_decomposition(const SebDecomposition& dec, const Channel& ch,
                                                  const Tolerances& tol = {});

// The decomposition as a measure-and-prepare channel, pairs (R_k, F_k).
HolevoChannel decomposition_to_holevo(const SebDecomposition& dec);

}  // namespace sebkit
