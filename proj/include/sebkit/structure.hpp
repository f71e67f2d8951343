#pragma once

#include <cstdint>
#include <vector>

#include "sebkit/channel.hpp"

namespace sebkit {

// Rank-one operator-sum form: E_k = u_k v_k* with ||u_k|| = 1 and
// sum_k v_k v_k* = I.
struct RankOneTerm {
    ComplexVector u;  // unit vector, dim_out
    ComplexVector v;  // dim_in, scale absorbed
};

struct RankOneKraus {
    Index dim_in = 0;
    Index dim_out = 0;
    std::vector<RankOneTerm> terms;
};

void validate(const RankOneKraus& ch, const Tolerances& tol = {});

RankOneKraus to_rank_one(const KrausChannel& ch, const Tolerances& tol = {});
RankOneKraus to_rank_one(const HolevoChannel& ch, const Tolerances& tol = {});
KrausChannel to_kraus(const RankOneKraus& ch);

ComplexMatrix apply_channel(const RankOneKraus& ch, const ComplexMatrix& x);
ComplexMatrix dual_apply(const RankOneKraus& ch, const ComplexMatrix& y);

struct EigenStructureEntry {
    Index k = 0;
    double v_eigenvalue = 0.0;  // <v_k, p v_k> / ||v_k||^2
    double u_eigenvalue = 0.0;  // <u_k, p u_k>
};

struct FixedPointReport {
    bool fixed = false;
    double residual = 0.0;  // ||Phi*(p) - p||_F
    bool commutes_with_all_kraus = false;
    double worst_commutator = 0.0;  // max_k ||[p, E_k]||_F
    std::vector<EigenStructureEntry> eigen_structure;
};

// A projection is fixed by the adjoint channel exactly when it commutes with
// every Kraus operator; the report carries both sides of that equivalence.
FixedPointReport adjoint_fixed_check(const RankOneKraus& ch, const ComplexMatrix& p,
                                     const Tolerances& tol = {});

struct CommutantReport {
    std::vector<ComplexMatrix> basis;        // spans {A : [A,E_k] = [A,E_k*] = 0}
    std::vector<ComplexMatrix> projections;  // maximal commuting family
    double pairwise_comm_residual = 0.0;
};

// Null space of A -> ([A, E_k], [A, E_k*])_k over the full operator space,
// with projections extracted from seeded random commutant elements.
CommutantReport commutant_projections(const RankOneKraus& ch, std::uint64_t seed,
                                      const Tolerances& tol = {});

struct MultiplicativeDomainReport {
    bool in_domain = false;
    double worst_product_residual = 0.0;
    double fix_of_dual_circ_phi = 0.0;  // ||(Phi* . Phi)(p) - p||_F
    bool v_eigen_ok = false;
};

// Membership in the multiplicative domain tested on the matrix-unit basis
// (complete by linearity), plus the two necessary conditions it implies.
MultiplicativeDomainReport multiplicative_projection_check(const RankOneKraus& ch,
                                                           const ComplexMatrix& p,
                                                           const Tolerances& tol = {});

}  // namespace sebkit
