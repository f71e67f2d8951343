#include "sebkit/structure.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sebkit/rng.hpp"

namespace sebkit {

namespace {

void require_projection(const ComplexMatrix& p, const Tolerances& tol) {
    if (p.rows() != p.cols() || p.rows() == 0) {
        throw NotProjection("operand is not square");
    }
    const double herm = hermiticity_residual(p);
    if (herm > tol.eps_herm * (1.0 + p.norm())) {
        throw NotProjection("Hermiticity residual " + std::to_string(herm));
    }
    const double idem = (p * p - p).norm();
    if (idem > tol.eps_recon * (1.0 + p.norm())) {
        throw NotProjection("idempotency residual " + std::to_string(idem));
    }
}

void require_square_channel(const RankOneKraus& ch, const char* who) {
    if (ch.dim_in != ch.dim_out) {
        throw DimensionMismatch(std::string(who) + ": requires dim_in == dim_out, got " +
                                std::to_string(ch.dim_in) + " -> " + std::to_string(ch.dim_out));
    }
}

ComplexMatrix kraus_operator(const RankOneTerm& term) {
    return term.u * term.v.adjoint();
}

// Random Hermitian combination of a *-closed basis; lands in the algebra the
// basis spans.
ComplexMatrix random_hermitian_element(const std::vector<ComplexMatrix>& basis,
                                       std::mt19937_64& rng) {
    const Index d = basis.front().rows();
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    const Complex half_over_i(0.0, -0.5);
    for (const ComplexMatrix& a : basis) {
        out += Complex(uniform_pm1(rng), 0.0) * hermitian_part(a);
        out += Complex(uniform_pm1(rng), 0.0) * (half_over_i * (a - a.adjoint()));
    }
    return hermitian_part(out);
}

}  // namespace

void validate(const RankOneKraus& ch, const Tolerances& tol) {
    if (ch.dim_in <= 0 || ch.dim_out <= 0) {
        throw ValidationError("rank-one form: dimensions must be positive");
    }
    if (ch.terms.empty()) throw ValidationError("rank-one form: no terms");
    ComplexMatrix completeness = ComplexMatrix::Zero(ch.dim_in, ch.dim_in);
    for (std::size_t k = 0; k < ch.terms.size(); ++k) {
        const RankOneTerm& term = ch.terms[k];
        if (term.u.size() != ch.dim_out || term.v.size() != ch.dim_in) {
            throw ValidationError("rank-one form: term " + std::to_string(k) +
                                  " has mismatched vector lengths");
        }
        if (std::abs(term.u.norm() - 1.0) > tol.eps_herm * 10.0) {
            throw ValidationError("rank-one form: ||u_" + std::to_string(k) + "|| = " +
                                  std::to_string(term.u.norm()) + ", expected 1");
        }
        completeness += term.v * term.v.adjoint();
    }
    const double residual =
        (completeness - ComplexMatrix::Identity(ch.dim_in, ch.dim_in)).norm();
    if (residual > tol.eps_recon) {
        throw ValidationError("rank-one form: sum v_k v_k* deviates from identity by " +
                              std::to_string(residual));
    }
}

RankOneKraus to_rank_one(const KrausChannel& ch, const Tolerances& tol) {
    const HolevoChannel holevo = kraus_to_holevo(ch, tol);
    return to_rank_one(holevo, tol);
}

RankOneKraus to_rank_one(const HolevoChannel& ch, const Tolerances& tol) {
    const KrausChannel kraus = holevo_to_kraus(ch, tol);
    RankOneKraus out;
    out.dim_in = ch.dim_in;
    out.dim_out = ch.dim_out;
    for (const ComplexMatrix& e : kraus.kraus) {
        // holevo_to_kraus emits exact rank-one products sqrt(q mu) u w*.
        Eigen::JacobiSVD<ComplexMatrix> svd(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
        RankOneTerm term;
        ComplexVector u = svd.matrixU().col(0);
        for (Index r = 0; r < u.size(); ++r) {
            const double mag = std::abs(u(r));
            if (mag > 1e-12) {
                u *= std::conj(u(r)) / mag;
                break;
            }
        }
        term.u = u;
        term.v = e.adjoint() * u;
        out.terms.push_back(std::move(term));
    }
    validate(out, tol);
    return out;
}

KrausChannel to_kraus(const RankOneKraus& ch) {
    KrausChannel out;
    out.dim_in = ch.dim_in;
    out.dim_out = ch.dim_out;
    for (const RankOneTerm& term : ch.terms) out.kraus.push_back(kraus_operator(term));
    return out;
}

ComplexMatrix apply_channel(const RankOneKraus& ch, const ComplexMatrix& x) {
    if (x.rows() != ch.dim_in || x.cols() != ch.dim_in) {
        throw DimensionMismatch("apply: operand does not match channel input dimension");
    }
    ComplexMatrix out = ComplexMatrix::Zero(ch.dim_out, ch.dim_out);
    for (const RankOneTerm& term : ch.terms) {
        out += (term.v.adjoint() * x * term.v)(0) * (term.u * term.u.adjoint());
    }
    return out;
}

ComplexMatrix dual_apply(const RankOneKraus& ch, const ComplexMatrix& y) {
    if (y.rows() != ch.dim_out || y.cols() != ch.dim_out) {
        throw DimensionMismatch("dual_apply: operand does not match channel output dimension");
    }
    ComplexMatrix out = ComplexMatrix::Zero(ch.dim_in, ch.dim_in);
    for (const RankOneTerm& term : ch.terms) {
        out += (term.u.adjoint() * y * term.u)(0) * (term.v * term.v.adjoint());
    }
    return out;
}

FixedPointReport adjoint_fixed_check(const RankOneKraus& ch, const ComplexMatrix& p,
                                     const Tolerances& tol) {
    require_square_channel(ch, "adjoint_fixed_check");
    require_projection(p, tol);
    if (p.rows() != ch.dim_in) {
        throw DimensionMismatch("adjoint_fixed_check: projection dimension mismatch");
    }

    FixedPointReport report;
    report.residual = (sebkit::dual_apply(ch, p) - p).norm();
    report.fixed = report.residual <= tol.eps_recon;

    for (std::size_t k = 0; k < ch.terms.size(); ++k) {
        const ComplexMatrix e = kraus_operator(ch.terms[k]);
        report.worst_commutator = std::max(report.worst_commutator, (p * e - e * p).norm());

        EigenStructureEntry entry;
        entry.k = static_cast<Index>(k);
        const double v_norm2 = ch.terms[k].v.squaredNorm();
        entry.v_eigenvalue =
            v_norm2 > 0.0
                ? (ch.terms[k].v.adjoint() * p * ch.terms[k].v)(0).real() / v_norm2
                : 0.0;
        entry.u_eigenvalue = (ch.terms[k].u.adjoint() * p * ch.terms[k].u)(0).real();
        report.eigen_structure.push_back(entry);
    }
    report.commutes_with_all_kraus = report.worst_commutator <= tol.eps_comm;
    return report;
}

CommutantReport commutant_projections(const RankOneKraus& ch, std::uint64_t seed,
                                      const Tolerances& tol) {
    require_square_channel(ch, "commutant_projections");
    validate(ch, tol);
    const Index d = ch.dim_in;
    const Index total = d * d;

    // Constraint matrix of A -> ([A, E_k], [A, E_k*])_k acting on vec(A):
    // vec(AE - EA) = (E^T (x) I - I (x) E) vec(A).
    const Index rows = static_cast<Index>(2 * ch.terms.size()) * total;
    ComplexMatrix constraint(rows, total);
    const ComplexMatrix eye = ComplexMatrix::Identity(d, d);
    Index row = 0;
    for (const RankOneTerm& term : ch.terms) {
        const ComplexMatrix e = kraus_operator(term);
        constraint.middleRows(row, total) =
            tensor_product(e.transpose(), eye) - tensor_product(eye, e);
        row += total;
        const ComplexMatrix ea = e.adjoint();
        constraint.middleRows(row, total) =
            tensor_product(ea.transpose(), eye) - tensor_product(eye, ea);
        row += total;
    }

    Eigen::JacobiSVD<ComplexMatrix> svd(constraint, Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 && sv(0) > 0.0 ? tol.eps_rank * sv(0) : 0.0;
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;

    CommutantReport report;
    for (Index c = rank; c < total; ++c) {
        report.basis.push_back(unvec(svd.matrixV().col(c), d, d));
    }
    if (report.basis.empty()) {
        // The identity always commutes; an empty null space is numerical noise.
        report.basis.push_back(eye / std::sqrt(static_cast<double>(d)));
    }

    // Spectral projections of a random Hermitian commutant element; refine
    // clusters with further elements until the family stops growing.
    std::mt19937_64 rng(seed);
    std::vector<ComplexMatrix> blocks;  // isometries onto current clusters
    {
        const ComplexMatrix t = random_hermitian_element(report.basis, rng);
        const EigDecomposition eig = eigh(t, tol);
        const double gap = tol.eps_rank * std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
        Index start = 0;
        while (start < d) {
            Index stop = start + 1;
            while (stop < d && eig.eigenvalues(stop - 1) - eig.eigenvalues(stop) < gap) ++stop;
            blocks.push_back(eig.eigenvectors.middleCols(start, stop - start));
            start = stop;
        }
    }
    const std::size_t max_rounds = report.basis.size();
    for (std::size_t round = 0; round < max_rounds; ++round) {
        if (static_cast<Index>(blocks.size()) >= static_cast<Index>(report.basis.size())) break;
        bool refined = false;
        const ComplexMatrix t = random_hermitian_element(report.basis, rng);
        std::vector<ComplexMatrix> next;
        for (const ComplexMatrix& w : blocks) {
            const Index width = w.cols();
            if (width == 1) {
                next.push_back(w);
                continue;
            }
            const ComplexMatrix sub = hermitian_part(w.adjoint() * t * w);
            const EigDecomposition eig = eigh(sub, tol);
            const double gap =
                tol.eps_rank * std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
            Index start = 0;
            while (start < width) {
                Index stop = start + 1;
                while (stop < width && eig.eigenvalues(stop - 1) - eig.eigenvalues(stop) < gap) {
                    ++stop;
                }
                next.push_back(w * eig.eigenvectors.middleCols(start, stop - start));
                if (stop - start < width) refined = true;
                start = stop;
            }
        }
        blocks = std::move(next);
        if (!refined) break;
    }

    for (const ComplexMatrix& w : blocks) {
        report.projections.push_back(w * w.adjoint());
    }
    for (std::size_t a = 0; a < report.projections.size(); ++a) {
        for (std::size_t b = a + 1; b < report.projections.size(); ++b) {
            const ComplexMatrix& p = report.projections[a];
            const ComplexMatrix& q = report.projections[b];
            report.pairwise_comm_residual =
                std::max(report.pairwise_comm_residual, (p * q - q * p).norm());
        }
    }
    if (report.pairwise_comm_residual > tol.eps_comm) {
        throw CertificationFailure("projection_commutativity", report.pairwise_comm_residual,
                                   "commutant_projections: extracted projections do not commute");
    }
    return report;
}

MultiplicativeDomainReport multiplicative_projection_check(const RankOneKraus& ch,
                                                           const ComplexMatrix& p,
                                                           const Tolerances& tol) {
    require_square_channel(ch, "multiplicative_projection_check");
    require_projection(p, tol);
    if (p.rows() != ch.dim_in) {
        throw DimensionMismatch("multiplicative_projection_check: projection dimension mismatch");
    }
    const Index d = ch.dim_in;

    MultiplicativeDomainReport report;
    const ComplexMatrix phi_p = apply_channel(ch, p);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            const ComplexMatrix unit = matrix_unit(d, i, j);
            const ComplexMatrix phi_unit = apply_channel(ch, unit);
            const double left = (apply_channel(ch, p * unit) - phi_p * phi_unit).norm();
            const double right = (apply_channel(ch, unit * p) - phi_unit * phi_p).norm();
            report.worst_product_residual =
                std::max(report.worst_product_residual, std::max(left, right));
        }
    }
    const double scale = 1.0 + p.squaredNorm();
    report.in_domain = report.worst_product_residual <= tol.eps_recon * scale;

    report.fix_of_dual_circ_phi = (sebkit::dual_apply(ch, phi_p) - p).norm();

    report.v_eigen_ok = true;
    for (const RankOneTerm& term : ch.terms) {
        const double v_norm = term.v.norm();
        if (v_norm <= tol.eps_rank) continue;
        const Complex rayleigh = (term.v.adjoint() * p * term.v)(0) / (v_norm * v_norm);
        if ((p * term.v - rayleigh * term.v).norm() > tol.eps_recon * (1.0 + v_norm)) {
            report.v_eigen_ok = false;
        }
    }
    return report;
}

}  // namespace sebkit
