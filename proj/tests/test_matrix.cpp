#include <doctest.h>

#include <random>

#include "sebkit/matrix.hpp"
#include "support.hpp"

using namespace sebkit;
using testsup::random_hermitian;
using testsup::random_matrix;
using testsup::random_state;

namespace {

ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

ComplexMatrix pauli_x() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

ComplexMatrix pauli_z() { return diag2(1.0, -1.0); }

}  // namespace

TEST_CASE("tolerances must lie in (0,1)") {
    Tolerances tol;
    CHECK_NOTHROW(tol.validate());
    tol.eps_comm = 0.0;
    CHECK_THROWS_AS(tol.validate(), ValidationError);
    tol.eps_comm = 1.5;
    CHECK_THROWS_AS(tol.validate(), ValidationError);
}

TEST_CASE("eigh on diagonal input") {
    const EigDecomposition eig = eigh(diag2(2.0, 1.0));
    CHECK(eig.eigenvalues(0) == doctest::Approx(2.0));
    CHECK(eig.eigenvalues(1) == doctest::Approx(1.0));
    CHECK((eig.eigenvectors - ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("eigh on pauli x") {
    const EigDecomposition eig = eigh(pauli_x());
    CHECK(eig.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(eig.eigenvalues(1) == doctest::Approx(-1.0));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    ComplexVector plus(2), minus(2);
    plus << inv_sqrt2, inv_sqrt2;
    minus << inv_sqrt2, -inv_sqrt2;
    CHECK((eig.eigenvectors.col(0) - plus).norm() < 1e-14);
    CHECK((eig.eigenvectors.col(1) - minus).norm() < 1e-14);
}

TEST_CASE("eigh residual bounds on random hermitian input") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = random_hermitian(rng, 6);
        const EigDecomposition eig = eigh(a);
        const ComplexMatrix lambda =
            eig.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>();
        CHECK((a * eig.eigenvectors - eig.eigenvectors * lambda).norm() <= 1e-10);
        CHECK((eig.eigenvectors.adjoint() * eig.eigenvectors - ComplexMatrix::Identity(6, 6))
                  .norm() <= 1e-10);
        for (Index i = 1; i < 6; ++i) {
            CHECK(eig.eigenvalues(i - 1) >= eig.eigenvalues(i));
        }
    }
}

TEST_CASE("eigh rejects bad input") {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 1) = 1.0;
    CHECK_THROWS_AS(eigh(a), NotHermitian);
    std::mt19937_64 rng(3);
    CHECK_THROWS_AS(eigh(random_matrix(rng, 3, 2)), DimensionMismatch);
}

TEST_CASE("psd_sqrt on simple inputs") {
    CHECK((psd_sqrt(ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)).norm() <
          1e-14);
    CHECK((psd_sqrt(diag2(4.0, 0.0)) - diag2(2.0, 0.0)).norm() < 1e-14);
}

TEST_CASE("psd_sqrt squares back to the input") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix c = random_matrix(rng, 4, 4);
        const ComplexMatrix b = c.adjoint() * c;
        const ComplexMatrix s = psd_sqrt(b);
        CHECK(hermiticity_residual(s) < 1e-12 * (1.0 + s.norm()));
        CHECK((s * s - b).norm() <= 1e-9);
        CHECK((s * s - b).norm() <= 10.0 * 1e-10 * (1.0 + b.norm()));
    }
}

TEST_CASE("psd_sqrt clamps tolerance-level noise and rejects real negativity") {
    ComplexMatrix nearly = diag2(1.0, -5e-10);  // inside eps_psd
    const ComplexMatrix s = psd_sqrt(nearly);
    CHECK(s(1, 1).real() == doctest::Approx(0.0));
    CHECK_THROWS_AS(psd_sqrt(diag2(1.0, -1.0)), NotPSD);
}

TEST_CASE("simultaneous_diagonalize on an already diagonal family") {
    const std::vector<ComplexMatrix> family = {diag2(1.0, 2.0), diag2(3.0, 3.0)};
    const ComplexMatrix u = simultaneous_diagonalize(family, 5);
    // Permutation-with-phase: every column has exactly one unit entry,
    // normalized to +1 by the phase convention.
    for (Index c = 0; c < 2; ++c) {
        Index nonzero = 0;
        for (Index r = 0; r < 2; ++r) {
            if (std::abs(u(r, c)) > 0.5) {
                ++nonzero;
                CHECK(u(r, c).real() == doctest::Approx(1.0));
                CHECK(u(r, c).imag() == doctest::Approx(0.0));
            } else {
                CHECK(std::abs(u(r, c)) < 1e-12);
            }
        }
        CHECK(nonzero == 1);
    }
    for (const ComplexMatrix& m : family) {
        CHECK(offdiag_norm(u.adjoint() * m * u) < 1e-12);
    }
}

TEST_CASE("simultaneous_diagonalize on {pauli_x, I}") {
    const std::vector<ComplexMatrix> family = {pauli_x(), ComplexMatrix::Identity(2, 2)};
    const ComplexMatrix u = simultaneous_diagonalize(family, 11);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Index c = 0; c < 2; ++c) {
        CHECK(std::abs(u(0, c)) == doctest::Approx(inv_sqrt2));
        CHECK(std::abs(u(1, c)) == doctest::Approx(inv_sqrt2));
    }
    CHECK(offdiag_norm(u.adjoint() * pauli_x() * u) < 1e-12);
}

TEST_CASE("simultaneous_diagonalize on the qutrit dephasing image family") {
    // Matrix-unit images of the qutrit dephasing channel: delta_ij e_i e_i*.
    std::vector<ComplexMatrix> family;
    for (Index i = 0; i < 3; ++i) {
        for (Index j = 0; j < 3; ++j) {
            family.push_back(i == j ? matrix_unit(3, i, i) : ComplexMatrix::Zero(3, 3));
        }
    }
    const ComplexMatrix u = simultaneous_diagonalize(family, 2);
    for (const ComplexMatrix& m : family) {
        CHECK(offdiag_norm(u.adjoint() * m * u) <= 1e-12);
    }
    for (Index c = 0; c < 3; ++c) {
        for (Index r = 0; r < 3; ++r) {
            const double mag = std::abs(u(r, c));
            CHECK((mag < 1e-12 || mag == doctest::Approx(1.0)));
        }
    }
}

TEST_CASE("simultaneous_diagonalize is deterministic bit for bit") {
    std::mt19937_64 rng(13);
    const ComplexMatrix basis = testsup::random_unitary(rng, 5);
    std::vector<ComplexMatrix> family;
    for (int k = 0; k < 4; ++k) {
        RealVector d(5);
        for (Index i = 0; i < 5; ++i) d(i) = sebkit::gaussian(rng);
        family.push_back(basis * d.cast<Complex>().asDiagonal() * basis.adjoint());
    }
    const ComplexMatrix u1 = simultaneous_diagonalize(family, 99);
    const ComplexMatrix u2 = simultaneous_diagonalize(family, 99);
    REQUIRE(u1.rows() == u2.rows());
    for (Index i = 0; i < u1.size(); ++i) {
        CHECK(u1.data()[i].real() == u2.data()[i].real());
        CHECK(u1.data()[i].imag() == u2.data()[i].imag());
    }
    for (const ComplexMatrix& m : family) {
        CHECK(offdiag_norm(u1.adjoint() * m * u1) <= 1e-8 * (1.0 + m.norm()));
    }
}

TEST_CASE("simultaneous_diagonalize refines degenerate combinations") {
    // Commuting pair whose joint eigenspaces only separate after recursion:
    // diag(1,1,2) and diag(3,4,4) conjugated into a random basis.
    std::mt19937_64 rng(29);
    const ComplexMatrix basis = testsup::random_unitary(rng, 3);
    RealVector a(3), b(3);
    a << 1.0, 1.0, 2.0;
    b << 3.0, 4.0, 4.0;
    const std::vector<ComplexMatrix> family = {
        basis * a.cast<Complex>().asDiagonal() * basis.adjoint(),
        basis * b.cast<Complex>().asDiagonal() * basis.adjoint()};
    const ComplexMatrix u = simultaneous_diagonalize(family, 3);
    for (const ComplexMatrix& m : family) {
        CHECK(offdiag_norm(u.adjoint() * m * u) <= 1e-10 * (1.0 + m.norm()));
    }
}

TEST_CASE("simultaneous_diagonalize rejects non-commuting families") {
    const std::vector<ComplexMatrix> family = {pauli_x(), pauli_z()};
    CHECK_THROWS_AS(simultaneous_diagonalize(family, 1), NotCommutingFamily);
    try {
        simultaneous_diagonalize(family, 1);
    } catch (const NotCommutingFamily& e) {
        CHECK(e.first == 0);
        CHECK(e.second == 1);
        CHECK(e.residual == doctest::Approx(2.0 * std::sqrt(2.0)));
    }
}

TEST_CASE("trace is preserved by the diagonalizing rotation") {
    std::mt19937_64 rng(17);
    const ComplexMatrix basis = testsup::random_unitary(rng, 4);
    std::vector<ComplexMatrix> family;
    for (int k = 0; k < 3; ++k) {
        RealVector d(4);
        for (Index i = 0; i < 4; ++i) d(i) = sebkit::gaussian(rng);
        family.push_back(basis * d.cast<Complex>().asDiagonal() * basis.adjoint());
    }
    const ComplexMatrix u = simultaneous_diagonalize(family, 21);
    for (const ComplexMatrix& m : family) {
        CHECK(std::abs((u.adjoint() * m * u).trace() - m.trace()) <= 1e-12);
    }
}

TEST_CASE("partial_trace_second on product operators") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = random_matrix(rng, 3, 3);
        const ComplexMatrix b = random_state(rng, 4);  // trace one
        CHECK((partial_trace_second(tensor_product(a, b), 3, 4) - a).norm() <= 1e-12);

        const ComplexMatrix c = random_matrix(rng, 2, 2);
        const ComplexMatrix d = random_matrix(rng, 5, 5);
        CHECK((partial_trace_second(tensor_product(c, d), 2, 5) - c * d.trace()).norm() <=
              1e-12 * (1.0 + c.norm() * d.norm()));
    }
}

TEST_CASE("partial_trace_second against the index-loop oracle") {
    std::mt19937_64 rng(31);
    const ComplexMatrix x = random_matrix(rng, 4, 4);
    const ComplexMatrix traced = partial_trace_second(x, 2, 2);
    for (Index i = 0; i < 2; ++i) {
        for (Index j = 0; j < 2; ++j) {
            Complex expected = 0.0;
            for (Index m = 0; m < 2; ++m) expected += x(i * 2 + m, j * 2 + m);
            CHECK(std::abs(traced(i, j) - expected) == doctest::Approx(0.0));
        }
    }
    CHECK_THROWS_AS(partial_trace_second(x, 3, 2), DimensionMismatch);
}

TEST_CASE("tensor_product block structure") {
    const ComplexMatrix eye2 = ComplexMatrix::Identity(2, 2);
    CHECK((tensor_product(eye2, eye2) - ComplexMatrix::Identity(4, 4)).norm() == 0.0);

    const ComplexMatrix unit = matrix_unit(2, 0, 1);
    const ComplexMatrix t = tensor_product(unit, eye2);
    CHECK((t.block(0, 2, 2, 2) - eye2).norm() == 0.0);
    CHECK(t.block(0, 0, 2, 2).norm() == 0.0);
    CHECK(t.block(2, 0, 2, 2).norm() == 0.0);
    CHECK(t.block(2, 2, 2, 2).norm() == 0.0);
}

TEST_CASE("tensor_product mixed-product identity") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix a = random_matrix(rng, 3, 3);
        const ComplexMatrix b = random_matrix(rng, 3, 3);
        const ComplexMatrix c = random_matrix(rng, 3, 3);
        const ComplexMatrix d = random_matrix(rng, 3, 3);
        const ComplexMatrix lhs = tensor_product(a, b) * tensor_product(c, d);
        const ComplexMatrix rhs = tensor_product(a * c, b * d);
        CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }
}

TEST_CASE("norms_and_psd_check on small fixed inputs") {
    const NormReport indefinite = norms_and_psd_check(pauli_z());
    CHECK(indefinite.trace_norm == doctest::Approx(2.0));
    CHECK(indefinite.lambda_min == doctest::Approx(-1.0));
    CHECK(indefinite.is_hermitian);
    CHECK_FALSE(indefinite.is_psd);

    const NormReport pure = norms_and_psd_check(matrix_unit(2, 0, 0));
    CHECK(pure.frobenius == doctest::Approx(1.0));
    CHECK(pure.trace_norm == doctest::Approx(1.0));
    CHECK(pure.operator_norm == doctest::Approx(1.0));
    CHECK(pure.is_psd);
}

TEST_CASE("trace norm agrees with an independent spectral oracle") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = random_matrix(rng, 5, 5);
        const NormReport report = norms_and_psd_check(a);
        // Oracle: singular values are the root eigenvalues of A* A.
        const EigDecomposition eig = eigh(hermitian_part(a.adjoint() * a));
        double oracle = 0.0;
        for (Index i = 0; i < 5; ++i) oracle += std::sqrt(std::max(0.0, eig.eigenvalues(i)));
        CHECK(report.trace_norm == doctest::Approx(oracle).epsilon(1e-10));
    }
}
