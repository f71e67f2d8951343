#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sebkit/errors.hpp"

namespace sebkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Every numerical decision in the toolkit goes through one of these bounds.
struct Tolerances {
    double eps_herm = 1e-10;   // Hermiticity residual bound
    double eps_psd = 1e-9;     // allowed negative-eigenvalue magnitude
    double eps_comm = 1e-8;    // commutator Frobenius bound, relative
    double eps_recon = 1e-8;   // reconstruction trace-norm bound
    double eps_rank = 1e-9;    // singular-value cutoff for rank decisions

    // Throws ValidationError unless every field lies in (0, 1).
    void validate() const;
};

// Output of eigh: eigenvalues descending, eigenvector columns matching.
// Ties are broken by lexicographic order of the phase-normalized column,
// so the decomposition is reproducible bit for bit.
struct EigDecomposition {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;
};

struct NormReport {
    double frobenius = 0.0;
    double trace_norm = 0.0;
    double operator_norm = 0.0;
    double lambda_min = 0.0;  // NaN for rectangular input
    bool is_hermitian = false;
    bool is_psd = false;
};

double hermiticity_residual(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, const Tolerances& tol = {});
ComplexMatrix hermitian_part(const ComplexMatrix& a);
double offdiag_norm(const ComplexMatrix& a);
void check_finite(const ComplexMatrix& a, const std::string& what);

// Hermitian eigendecomposition with certified residuals.
EigDecomposition eigh(const ComplexMatrix& a, const Tolerances& tol = {});

// Hermitian PSD square root; eigenvalues in [-eps_psd, 0) are clamped to 0.
ComplexMatrix psd_sqrt(const ComplexMatrix& a, const Tolerances& tol = {});

// Unitary U with U* M U diagonal (within eps_comm) for every family member.
// The family must be pairwise commuting and closed under adjoints; it is
// diagonalized through a seeded random combination of its Hermitian
// generators, recursing on degenerate blocks. Deterministic given the seed.
ComplexMatrix simultaneous_diagonalize(const std::vector<ComplexMatrix>& family,
                                       std::uint64_t seed, const Tolerances& tol = {});

// Partial trace over the second tensor factor; the first factor is indexed
// slowest, i.e. x acts on C^dim_a (x) C^dim_b with index i*dim_b + m.
ComplexMatrix partial_trace_second(const ComplexMatrix& x, Index dim_a, Index dim_b);

// Kronecker product: block (i, j) equals a(i, j) * b.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

NormReport norms_and_psd_check(const ComplexMatrix& a, const Tolerances& tol = {});

// Shared small utilities.
ComplexMatrix matrix_unit(Index dim, Index i, Index j);
std::vector<ComplexMatrix> hermitian_basis(Index dim);  // HS-orthonormal, dim^2 elements
ComplexVector vec(const ComplexMatrix& a);              // column-major flatten
ComplexMatrix unvec(const ComplexVector& v, Index rows, Index cols);

}  // namespace sebkit
