#include "sebkit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "sebkit/rng.hpp"

namespace sebkit {

namespace {

std::string shape_of(const ComplexMatrix& a) {
    std::ostringstream os;
    os << a.rows() << "x" << a.cols();
    return os.str();
}

void require_square(const ComplexMatrix& a, const char* who) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw DimensionMismatch(std::string(who) + ": expected nonempty square matrix, got " +
                                shape_of(a));
    }
}

// Multiplies each column so its first entry above the noise floor is real
// positive. Pure convention; keeps unitaries reproducible.
void normalize_column_phases(ComplexMatrix& v) {
    constexpr double floor = 1e-12;
    for (Index c = 0; c < v.cols(); ++c) {
        for (Index r = 0; r < v.rows(); ++r) {
            const double mag = std::abs(v(r, c));
            if (mag > floor) {
                v.col(c) *= std::conj(v(r, c)) / mag;
                break;
            }
        }
    }
}

bool column_lex_less(const ComplexMatrix& v, Index a, Index b) {
    for (Index r = 0; r < v.rows(); ++r) {
        const Complex x = v(r, a);
        const Complex y = v(r, b);
        if (x.real() != y.real()) return x.real() < y.real();
        if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
    return false;
}

}  // namespace

void Tolerances::validate() const {
    const double fields[] = {eps_herm, eps_psd, eps_comm, eps_recon, eps_rank};
    const char* names[] = {"eps_herm", "eps_psd", "eps_comm", "eps_recon", "eps_rank"};
    for (int i = 0; i < 5; ++i) {
        if (!(fields[i] > 0.0) || !(fields[i] < 1.0)) {
            throw ValidationError(std::string("tolerance ") + names[i] +
                                  " must lie strictly between 0 and 1");
        }
    }
}

double hermiticity_residual(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    return (a - a.adjoint()).norm();
}

bool is_hermitian(const ComplexMatrix& a, const Tolerances& tol) {
    if (a.rows() != a.cols()) return false;
    return hermiticity_residual(a) <= tol.eps_herm * (1.0 + a.norm());
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    return 0.5 * (a + a.adjoint());
}

double offdiag_norm(const ComplexMatrix& a) {
    ComplexMatrix off = a;
    off.diagonal().setZero();
    return off.norm();
}

void check_finite(const ComplexMatrix& a, const std::string& what) {
    if (!a.allFinite()) {
        throw ValidationError(what + ": non-finite entry");
    }
}

EigDecomposition eigh(const ComplexMatrix& a, const Tolerances& tol) {
    require_square(a, "eigh");
    const double scale = 1.0 + a.norm();
    if (hermiticity_residual(a) > tol.eps_herm * scale) {
        throw NotHermitian("eigh: Hermiticity residual " +
                           std::to_string(hermiticity_residual(a)) + " exceeds bound");
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("eigh: eigensolver did not converge");
    }

    const Index n = a.rows();
    ComplexMatrix vectors = solver.eigenvectors();
    RealVector values = solver.eigenvalues();
    normalize_column_phases(vectors);

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index lhs, Index rhs) {
        if (values(lhs) != values(rhs)) return values(lhs) > values(rhs);
        return column_lex_less(vectors, lhs, rhs);
    });

    EigDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Index c = 0; c < n; ++c) {
        out.eigenvalues(c) = values(order[static_cast<std::size_t>(c)]);
        out.eigenvectors.col(c) = vectors.col(order[static_cast<std::size_t>(c)]);
    }

    const double recon = (a * out.eigenvectors -
                          out.eigenvectors * out.eigenvalues.asDiagonal().toDenseMatrix()
                                                 .cast<Complex>())
                             .norm();
    const double unit = (out.eigenvectors.adjoint() * out.eigenvectors -
                         ComplexMatrix::Identity(n, n))
                            .norm();
    if (recon > tol.eps_herm * scale || unit > tol.eps_herm) {
        throw NumericalFailure("eigh: residual certificate failed (recon " +
                               std::to_string(recon) + ", unitarity " + std::to_string(unit) +
                               ")");
    }
    return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a, const Tolerances& tol) {
    require_square(a, "psd_sqrt");
    const EigDecomposition eig = eigh(a, tol);
    const double lambda_min = eig.eigenvalues(a.rows() - 1);
    if (lambda_min < -tol.eps_psd) {
        throw NotPSD("psd_sqrt: smallest eigenvalue " + std::to_string(lambda_min) +
                     " below -eps_psd");
    }
    RealVector roots = eig.eigenvalues;
    for (Index i = 0; i < roots.size(); ++i) {
        roots(i) = roots(i) > 0.0 ? std::sqrt(roots(i)) : 0.0;
    }
    ComplexMatrix s = eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
    return hermitian_part(s);
}

namespace {

// Hermitian generators of a *-closed family: H = (M+M*)/2 and K = (M-M*)/2i.
std::vector<ComplexMatrix> hermitian_generators(const std::vector<ComplexMatrix>& family) {
    std::vector<ComplexMatrix> gens;
    gens.reserve(2 * family.size());
    const Complex half_over_i(0.0, -0.5);
    for (const ComplexMatrix& m : family) {
        ComplexMatrix h = hermitian_part(m);
        ComplexMatrix k = half_over_i * (m - m.adjoint());
        if (h.norm() > 1e-14 * (1.0 + m.norm())) gens.push_back(std::move(h));
        if (k.norm() > 1e-14 * (1.0 + m.norm())) gens.push_back(std::move(k));
    }
    return gens;
}

// Recursively builds a unitary diagonalizing a commuting Hermitian family.
// Each level diagonalizes one random combination and recurses into the
// degenerate eigenvalue clusters with the projected generators.
ComplexMatrix diagonalize_commuting(const std::vector<ComplexMatrix>& gens, Index dim,
                                    std::mt19937_64& rng, int depth, int max_depth,
                                    const Tolerances& tol) {
    if (dim == 1 || gens.empty()) return ComplexMatrix::Identity(dim, dim);

    ComplexMatrix combo = ComplexMatrix::Zero(dim, dim);
    for (const ComplexMatrix& g : gens) {
        combo += Complex(uniform_pm1(rng), 0.0) * g;
    }
    combo = hermitian_part(combo);

    const EigDecomposition eig = eigh(combo, tol);
    ComplexMatrix u = eig.eigenvectors;

    const double value_scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
    const double gap = tol.eps_rank * value_scale;

    Index start = 0;
    while (start < dim) {
        Index stop = start + 1;
        while (stop < dim && eig.eigenvalues(stop - 1) - eig.eigenvalues(stop) < gap) ++stop;
        const Index width = stop - start;
        if (width > 1 && depth + 1 <= max_depth) {
            const ComplexMatrix w = u.middleCols(start, width);
            std::vector<ComplexMatrix> projected;
            projected.reserve(gens.size());
            for (const ComplexMatrix& g : gens) {
                ComplexMatrix sub = w.adjoint() * g * w;
                // A projected generator that is scalar on the block carries no
                // refinement information; keeping it would stall the recursion.
                const Complex mean = sub.trace() / static_cast<double>(width);
                if ((sub - mean * ComplexMatrix::Identity(width, width)).norm() >
                    tol.eps_rank * (1.0 + sub.norm())) {
                    projected.push_back(std::move(sub));
                }
            }
            if (!projected.empty()) {
                const ComplexMatrix u_sub = diagonalize_commuting(projected, width, rng,
                                                                  depth + 1, max_depth, tol);
                u.middleCols(start, width) = w * u_sub;
            }
        }
        start = stop;
    }
    return u;
}

}  // namespace

ComplexMatrix simultaneous_diagonalize(const std::vector<ComplexMatrix>& family,
                                       std::uint64_t seed, const Tolerances& tol) {
    if (family.empty()) {
        throw DimensionMismatch("simultaneous_diagonalize: empty family");
    }
    const Index dim = family.front().rows();
    for (const ComplexMatrix& m : family) {
        require_square(m, "simultaneous_diagonalize");
        if (m.rows() != dim) {
            throw DimensionMismatch("simultaneous_diagonalize: mixed dimensions in family");
        }
    }

    std::vector<double> norms(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) norms[i] = family[i].norm();
    double scale = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            scale = std::max(scale, norms[i] * norms[j]);
        }
    }

    double worst = 0.0;
    std::size_t worst_i = 0, worst_j = 0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            const double r = (family[i] * family[j] - family[j] * family[i]).norm();
            if (r > worst) {
                worst = r;
                worst_i = i;
                worst_j = j;
            }
        }
    }
    if (worst > tol.eps_comm * scale) {
        throw NotCommutingFamily(worst_i, worst_j, worst,
                                 "simultaneous_diagonalize: members " + std::to_string(worst_i) +
                                     " and " + std::to_string(worst_j) +
                                     " have commutator norm " + std::to_string(worst));
    }

    const std::vector<ComplexMatrix> gens = hermitian_generators(family);
    std::mt19937_64 rng(seed);
    const int max_depth = static_cast<int>(family.size());
    ComplexMatrix u = diagonalize_commuting(gens, dim, rng, 0, max_depth, tol);

    for (std::size_t i = 0; i < family.size(); ++i) {
        const double off = offdiag_norm(u.adjoint() * family[i] * u);
        if (off > tol.eps_comm * (1.0 + norms[i])) {
            throw DiagonalizationFailure(
                "simultaneous_diagonalize: member " + std::to_string(i) +
                " keeps off-diagonal residual " + std::to_string(off) + " after refinement");
        }
    }
    return u;
}

ComplexMatrix partial_trace_second(const ComplexMatrix& x, Index dim_a, Index dim_b) {
    if (dim_a <= 0 || dim_b <= 0 || x.rows() != dim_a * dim_b || x.cols() != dim_a * dim_b) {
        throw DimensionMismatch("partial_trace_second: input " + shape_of(x) +
                                " does not factor as (" + std::to_string(dim_a) + "*" +
                                std::to_string(dim_b) + ")^2");
    }
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (Index i = 0; i < dim_a; ++i) {
        for (Index j = 0; j < dim_a; ++j) {
            Complex sum = 0.0;
            for (Index m = 0; m < dim_b; ++m) {
                sum += x(i * dim_b + m, j * dim_b + m);
            }
            out(i, j) = sum;
        }
    }
    return out;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

NormReport norms_and_psd_check(const ComplexMatrix& a, const Tolerances& tol) {
    NormReport report;
    report.frobenius = a.norm();

    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    const RealVector& sv = svd.singularValues();
    report.trace_norm = sv.sum();
    report.operator_norm = sv.size() > 0 ? sv(0) : 0.0;

    if (a.rows() == a.cols() && a.rows() > 0) {
        report.is_hermitian = is_hermitian(a, tol);
        const EigDecomposition eig = eigh(hermitian_part(a), tol);
        report.lambda_min = eig.eigenvalues(a.rows() - 1);
        report.is_psd = report.is_hermitian && report.lambda_min >= -tol.eps_psd;
    } else {
        report.lambda_min = std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

ComplexMatrix matrix_unit(Index dim, Index i, Index j) {
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    out(i, j) = 1.0;
    return out;
}

std::vector<ComplexMatrix> hermitian_basis(Index dim) {
    std::vector<ComplexMatrix> basis;
    basis.reserve(static_cast<std::size_t>(dim * dim));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Index a = 0; a < dim; ++a) {
        basis.push_back(matrix_unit(dim, a, a));
    }
    for (Index a = 0; a < dim; ++a) {
        for (Index b = a + 1; b < dim; ++b) {
            ComplexMatrix sym = ComplexMatrix::Zero(dim, dim);
            sym(a, b) = inv_sqrt2;
            sym(b, a) = inv_sqrt2;
            basis.push_back(sym);
            ComplexMatrix skew = ComplexMatrix::Zero(dim, dim);
            skew(a, b) = Complex(0.0, inv_sqrt2);
            skew(b, a) = Complex(0.0, -inv_sqrt2);
            basis.push_back(skew);
        }
    }
    return basis;
}

ComplexVector vec(const ComplexMatrix& a) {
    return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

ComplexMatrix unvec(const ComplexVector& v, Index rows, Index cols) {
    if (v.size() != rows * cols) {
        throw DimensionMismatch("unvec: vector length does not match target shape");
    }
    return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

}  // namespace sebkit
