#include <doctest.h>

#include <random>

#include "sebkit/structure.hpp"
#include "support.hpp"

using namespace sebkit;
using testsup::random_block_rank_one;
using testsup::random_rank_one;

namespace {

RankOneKraus dephasing_rank_one(Index d) {
    RankOneKraus ch;
    ch.dim_in = d;
    ch.dim_out = d;
    for (Index k = 0; k < d; ++k) {
        RankOneTerm term;
        term.u = ComplexVector::Unit(d, k);
        term.v = ComplexVector::Unit(d, k);
        ch.terms.push_back(std::move(term));
    }
    return ch;
}

ComplexMatrix half_mix() {
    // (I + sigma_x)/2: a projection that does not commute with e_k e_k*.
    ComplexMatrix p(2, 2);
    p << 0.5, 0.5, 0.5, 0.5;
    return p;
}

}  // namespace

TEST_CASE("adjoint_fixed_check accepts a diagonal projection of dephasing") {
    const RankOneKraus ch = dephasing_rank_one(2);
    const FixedPointReport report = adjoint_fixed_check(ch, matrix_unit(2, 0, 0));
    CHECK(report.fixed);
    CHECK(report.residual <= 1e-14);
    CHECK(report.commutes_with_all_kraus);
    REQUIRE(report.eigen_structure.size() == 2);
    CHECK(report.eigen_structure[0].v_eigenvalue == doctest::Approx(1.0));
    CHECK(report.eigen_structure[0].u_eigenvalue == doctest::Approx(1.0));
    CHECK(report.eigen_structure[1].v_eigenvalue == doctest::Approx(0.0));
    CHECK(report.eigen_structure[1].u_eigenvalue == doctest::Approx(0.0));
}

TEST_CASE("adjoint_fixed_check rejects a rotated projection of dephasing") {
    const RankOneKraus ch = dephasing_rank_one(2);
    const FixedPointReport report = adjoint_fixed_check(ch, half_mix());
    CHECK_FALSE(report.fixed);
    CHECK_FALSE(report.commutes_with_all_kraus);
}

TEST_CASE("adjoint_fixed_check validates the projection input") {
    const RankOneKraus ch = dephasing_rank_one(2);
    CHECK_THROWS_AS(adjoint_fixed_check(ch, 0.5 * ComplexMatrix::Identity(2, 2)),
                    NotProjection);
    CHECK_THROWS_AS(adjoint_fixed_check(ch, matrix_unit(2, 0, 1)), NotProjection);
}

TEST_CASE("fixed iff commuting on constructed instances") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 6; ++trial) {
        const Index block_a = 2, block_b = 2;
        const RankOneKraus ch = random_block_rank_one(rng, block_a, block_b);
        ComplexMatrix p = ComplexMatrix::Zero(4, 4);
        p.block(0, 0, 2, 2) = ComplexMatrix::Identity(2, 2);

        const FixedPointReport positive = adjoint_fixed_check(ch, p);
        CHECK(positive.fixed);
        CHECK(positive.commutes_with_all_kraus);
        for (const EigenStructureEntry& entry : positive.eigen_structure) {
            const double v = entry.v_eigenvalue;
            const double u = entry.u_eigenvalue;
            CHECK((std::abs(v) <= 1e-10 || std::abs(v - 1.0) <= 1e-10));
            CHECK((std::abs(u) <= 1e-10 || std::abs(u - 1.0) <= 1e-10));
        }

        // Rotate the projection across the blocks: both sides must flip.
        ComplexMatrix q = ComplexMatrix::Zero(4, 4);
        q(0, 0) = 0.5;
        q(2, 2) = 0.5;
        q(0, 2) = 0.5;
        q(2, 0) = 0.5;
        q(1, 1) = 1.0;
        const FixedPointReport negative = adjoint_fixed_check(ch, q);
        CHECK_FALSE(negative.fixed);
        CHECK_FALSE(negative.commutes_with_all_kraus);
    }
}

TEST_CASE("commutant of dephasing is the diagonal algebra") {
    const RankOneKraus ch = dephasing_rank_one(3);
    const CommutantReport report = commutant_projections(ch, 7);
    CHECK(report.basis.size() == 3);
    REQUIRE(report.projections.size() == 3);
    for (const ComplexMatrix& p : report.projections) {
        bool is_unit = false;
        for (Index k = 0; k < 3; ++k) {
            if ((p - matrix_unit(3, k, k)).norm() <= 1e-10) is_unit = true;
        }
        CHECK(is_unit);
    }
    CHECK(report.pairwise_comm_residual <= 1e-13);
}

TEST_CASE("generic channels have trivial commutant") {
    std::mt19937_64 rng(5);
    const RankOneKraus ch = random_rank_one(rng, 3, 4);
    const CommutantReport report = commutant_projections(ch, 11);
    CHECK(report.basis.size() == 1);
    REQUIRE(report.projections.size() == 1);
    CHECK((report.projections[0] - ComplexMatrix::Identity(3, 3)).norm() <= 1e-10);
}

TEST_CASE("block channels have a two-dimensional commutant") {
    std::mt19937_64 rng(7);
    const RankOneKraus ch = random_block_rank_one(rng, 2, 3);
    const CommutantReport report = commutant_projections(ch, 13);
    CHECK(report.basis.size() == 2);
    REQUIRE(report.projections.size() == 2);
    ComplexMatrix block_projector = ComplexMatrix::Zero(5, 5);
    block_projector.block(0, 0, 2, 2) = ComplexMatrix::Identity(2, 2);
    bool found = false;
    for (const ComplexMatrix& p : report.projections) {
        if ((p - block_projector).norm() <= 1e-10) found = true;
    }
    CHECK(found);
}

TEST_CASE("every commutant projection is a fixed point of the adjoint") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const RankOneKraus ch = trial % 2 == 0 ? random_block_rank_one(rng, 2, 2)
                                               : random_rank_one(rng, 4, 5);
        const CommutantReport report = commutant_projections(ch, 17 + trial);
        for (const ComplexMatrix& p : report.projections) {
            const FixedPointReport fp = adjoint_fixed_check(ch, p);
            CHECK(fp.fixed);
            CHECK(fp.residual <= 1e-10);
        }
        CHECK(report.pairwise_comm_residual <= 1e-10);
    }
}

TEST_CASE("multiplicative domain membership for dephasing projections") {
    const RankOneKraus ch = dephasing_rank_one(2);
    const MultiplicativeDomainReport in = multiplicative_projection_check(ch, matrix_unit(2, 0, 0));
    CHECK(in.in_domain);
    CHECK(in.worst_product_residual <= 1e-12);
    CHECK(in.fix_of_dual_circ_phi <= 1e-12);
    CHECK(in.v_eigen_ok);

    const MultiplicativeDomainReport out = multiplicative_projection_check(ch, half_mix());
    CHECK_FALSE(out.in_domain);
    CHECK_FALSE(out.v_eigen_ok);
}

TEST_CASE("membership implies the dual-fixed and eigenvector conditions") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 6; ++trial) {
        const RankOneKraus ch = random_block_rank_one(rng, 2, 2);
        ComplexMatrix p = ComplexMatrix::Zero(4, 4);
        p.block(0, 0, 2, 2) = ComplexMatrix::Identity(2, 2);
        const MultiplicativeDomainReport report = multiplicative_projection_check(ch, p);
        if (report.in_domain) {
            CHECK(report.fix_of_dual_circ_phi <= 1e-8);
            CHECK(report.v_eigen_ok);
        }
        // The necessary eigenvector condition holds for the block projector
        // regardless (v_k lie inside the blocks).
        CHECK(report.v_eigen_ok);
    }
}

TEST_CASE("rank-one form round trips through conversions") {
    std::mt19937_64 rng(17);
    const RankOneKraus source = random_rank_one(rng, 3, 4);
    const KrausChannel kraus = to_kraus(source);
    const RankOneKraus round = to_rank_one(kraus);
    const ComplexMatrix x = testsup::random_matrix(rng, 3, 3);
    CHECK((apply_channel(source, x) - apply_channel(round, x)).norm() <= 1e-9);
    CHECK((dual_apply(source, x) - dual_apply(round, x)).norm() <= 1e-9);
}

TEST_CASE("rank-one validation enforces the completeness relation") {
    RankOneKraus bad = dephasing_rank_one(2);
    bad.terms.pop_back();
    CHECK_THROWS_AS(validate(bad), ValidationError);

    RankOneKraus scaled = dephasing_rank_one(2);
    scaled.terms[0].u *= 2.0;
    CHECK_THROWS_AS(validate(scaled), ValidationError);
}

TEST_CASE("commutant basis elements commute with every kraus operator") {
    std::mt19937_64 rng(19);
    const RankOneKraus ch = random_block_rank_one(rng, 2, 2);
    const CommutantReport report = commutant_projections(ch, 23);
    for (const ComplexMatrix& a : report.basis) {
        for (const RankOneTerm& term : ch.terms) {
            const ComplexMatrix e = term.u * term.v.adjoint();
            CHECK((a * e - e * a).norm() <= 1e-8);
            const ComplexMatrix ea = e.adjoint();
            CHECK((a * ea - ea * a).norm() <= 1e-8);
        }
    }
}
