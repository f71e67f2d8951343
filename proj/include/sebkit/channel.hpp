#pragma once

#include <variant>
#include <vector>

#include "sebkit/matrix.hpp"

namespace sebkit {

// Operator-sum form: Phi(X) = sum_k E_k X E_k*.
struct KrausChannel {
    Index dim_in = 0;
    Index dim_out = 0;
    std::vector<ComplexMatrix> kraus;  // each dim_out x dim_in
};

// Measure-and-prepare pair: measure effect, prepare state.
struct HolevoPair {
    ComplexMatrix state;   // R_k, dim_out x dim_out
    ComplexMatrix effect;  // F_k, dim_in x dim_in
};

// Holevo form: Phi(X) = sum_k R_k Tr(F_k X) with sum_k F_k = I.
struct HolevoChannel {
    Index dim_in = 0;
    Index dim_out = 0;
    std::vector<HolevoPair> pairs;
};

// Weighted Choi state sigma = sum_ij sqrt(w_i w_j) e_i e_j* (x) Phi(e_i e_j*),
// input factor indexed slowest.
struct WeightedChoi {
    Index dim_in = 0;
    Index dim_out = 0;
    std::vector<double> weights;  // length dim_in, positive, sums to 1
    ComplexMatrix sigma;          // (dim_in*dim_out) x (dim_in*dim_out)
};

using Channel = std::variant<KrausChannel, HolevoChannel, WeightedChoi>;

inline constexpr std::size_t kKrausCap = 4096;

Index dim_in(const Channel& ch);
Index dim_out(const Channel& ch);
const char* representation_name(const Channel& ch);

// Structural invariants of each representation; throw ValidationError /
// NotPSDInput / DimensionMismatch with a description of the offending part.
void validate(const KrausChannel& ch, const Tolerances& tol = {});
void validate(const HolevoChannel& ch, const Tolerances& tol = {});
void validate(const WeightedChoi& ch, const Tolerances& tol = {});
void validate(const Channel& ch, const Tolerances& tol = {});

ComplexMatrix apply_channel(const KrausChannel& ch, const ComplexMatrix& x);
ComplexMatrix apply_channel(const HolevoChannel& ch, const ComplexMatrix& x);
ComplexMatrix apply_channel(const WeightedChoi& ch, const ComplexMatrix& x);
ComplexMatrix apply_channel(const Channel& ch, const ComplexMatrix& x);

// Adjoint action: Phi*(Y) = sum_k Tr(R_k Y) F_k, unital for a valid POVM.
ComplexMatrix dual_apply(const HolevoChannel& ch, const ComplexMatrix& y);
ComplexMatrix dual_apply(const KrausChannel& ch, const ComplexMatrix& y);

WeightedChoi weighted_choi(const Channel& ch, const std::vector<double>& weights);
WeightedChoi weighted_choi(const Channel& ch);  // uniform weights 1/d

std::vector<double> uniform_weights(Index dim);

struct CptpReport {
    double tp_residual = 0.0;
    double cp_lambda_min = 0.0;
    bool ok = false;
};

// Trace preservation residual plus the smallest eigenvalue of the
// uniform-weight Choi state (CP at finite dimension <=> Choi PSD).
CptpReport verify_cptp(const Channel& ch, const Tolerances& tol = {});

// Rank-one operator-sum form of a Holevo channel: spectral-decomposes every
// pair and emits sqrt(q_a mu_b) u_a w_b* per retained eigenvalue product.
KrausChannel holevo_to_kraus(const HolevoChannel& ch, const Tolerances& tol = {});

// Inverse direction; requires every Kraus operator to be numerically rank one
// (the operator-sum form of a measure-and-prepare channel), else NotRankOne.
HolevoChannel kraus_to_holevo(const KrausChannel& ch, const Tolerances& tol = {});

// Spectral Kraus extraction from the Choi state; standard conversion used by
// the CLI's `convert` command.
KrausChannel choi_to_kraus(const WeightedChoi& ch, const Tolerances& tol = {});

KrausChannel to_kraus(const Channel& ch, const Tolerances& tol = {});
HolevoChannel to_holevo(const Channel& ch, const Tolerances& tol = {});

}  // namespace sebkit
