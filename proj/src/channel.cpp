#include "sebkit/channel.hpp"

#include <cmath>
#include <string>

namespace sebkit {

namespace {

void require_input_shape(Index dim, const ComplexMatrix& x, const char* who) {
    if (x.rows() != dim || x.cols() != dim) {
        throw DimensionMismatch(std::string(who) + ": operand is " + std::to_string(x.rows()) +
                                "x" + std::to_string(x.cols()) + ", channel input dimension is " +
                                std::to_string(dim));
    }
}

void check_weights(const std::vector<double>& weights, Index dim) {
    if (static_cast<Index>(weights.size()) != dim) {
        throw BadWeights("expected " + std::to_string(dim) + " weights, got " +
                         std::to_string(weights.size()));
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw BadWeights("weights must be strictly positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw BadWeights("weights sum to " + std::to_string(sum) + ", expected 1");
    }
}

// First left singular vector with its phase convention applied, plus the
// sigma2/sigma1 ratio used for the rank-one test.
struct RankOneSplit {
    ComplexVector u;
    ComplexVector v;  // scale absorbed, E = u v*
    double ratio = 0.0;
    bool zero = false;
};

RankOneSplit split_rank_one(const ComplexMatrix& e) {
    RankOneSplit out;
    if (e.norm() == 0.0) {
        out.zero = true;
        return out;
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sv = svd.singularValues();
    out.ratio = sv.size() > 1 && sv(0) > 0.0 ? sv(1) / sv(0) : 0.0;
    ComplexVector u = svd.matrixU().col(0);
    for (Index r = 0; r < u.size(); ++r) {
        const double mag = std::abs(u(r));
        if (mag > 1e-12) {
            u *= std::conj(u(r)) / mag;
            break;
        }
    }
    out.u = u;
    out.v = e.adjoint() * u;  // u (e* u)* = u u* e = e for exact rank one
    return out;
}

}  // namespace

Index dim_in(const Channel& ch) {
    return std::visit([](const auto& c) { return c.dim_in; }, ch);
}

Index dim_out(const Channel& ch) {
    return std::visit([](const auto& c) { return c.dim_out; }, ch);
}

const char* representation_name(const Channel& ch) {
    switch (ch.index()) {
        case 0: return "kraus";
        case 1: return "holevo";
        default: return "choi";
    }
}

void validate(const KrausChannel& ch, const Tolerances& tol) {
    if (ch.dim_in <= 0 || ch.dim_out <= 0) {
        throw ValidationError("kraus: dimensions must be positive");
    }
    if (ch.kraus.empty()) throw ValidationError("kraus: operator sequence is empty");
    if (ch.kraus.size() > kKrausCap) {
        throw ValidationError("kraus: sequence exceeds cap of " + std::to_string(kKrausCap));
    }
    ComplexMatrix sum = ComplexMatrix::Zero(ch.dim_in, ch.dim_in);
    for (std::size_t k = 0; k < ch.kraus.size(); ++k) {
        const ComplexMatrix& e = ch.kraus[k];
        if (e.rows() != ch.dim_out || e.cols() != ch.dim_in) {
            throw ValidationError("kraus[" + std::to_string(k) + "]: expected " +
                                  std::to_string(ch.dim_out) + "x" + std::to_string(ch.dim_in));
        }
        check_finite(e, "kraus[" + std::to_string(k) + "]");
        sum += e.adjoint() * e;
    }
    const double tp = (sum - ComplexMatrix::Identity(ch.dim_in, ch.dim_in)).norm();
    if (tp > tol.eps_recon) {
        throw ValidationError("kraus: sum E_k* E_k deviates from identity by " +
                              std::to_string(tp));
    }
}

void validate(const HolevoChannel& ch, const Tolerances& tol) {
    if (ch.dim_in <= 0 || ch.dim_out <= 0) {
        throw ValidationError("holevo: dimensions must be positive");
    }
    if (ch.pairs.empty()) throw ValidationError("holevo: pair sequence is empty");
    ComplexMatrix effect_sum = ComplexMatrix::Zero(ch.dim_in, ch.dim_in);
    for (std::size_t k = 0; k < ch.pairs.size(); ++k) {
        const std::string tag = "holevo.pairs[" + std::to_string(k) + "]";
        const ComplexMatrix& r = ch.pairs[k].state;
        const ComplexMatrix& f = ch.pairs[k].effect;
        if (r.rows() != ch.dim_out || r.cols() != ch.dim_out) {
            throw ValidationError(tag + ".state: expected " + std::to_string(ch.dim_out) +
                                  "x" + std::to_string(ch.dim_out));
        }
        if (f.rows() != ch.dim_in || f.cols() != ch.dim_in) {
            throw ValidationError(tag + ".effect: expected " + std::to_string(ch.dim_in) + "x" +
                                  std::to_string(ch.dim_in));
        }
        check_finite(r, tag + ".state");
        check_finite(f, tag + ".effect");
        const NormReport rn = norms_and_psd_check(r, tol);
        if (!rn.is_psd) throw NotPSDInput(tag + ".state: not PSD");
        if (std::abs(r.trace().real() - 1.0) > tol.eps_recon ||
            std::abs(r.trace().imag()) > tol.eps_recon) {
            throw ValidationError(tag + ".state: trace deviates from 1");
        }
        const NormReport fn = norms_and_psd_check(f, tol);
        if (!fn.is_psd) throw NotPSDInput(tag + ".effect: not PSD");
        effect_sum += f;
    }
    const double tp = (effect_sum - ComplexMatrix::Identity(ch.dim_in, ch.dim_in)).norm();
    if (tp > tol.eps_recon) {
        throw ValidationError("holevo.effects: sum deviates from identity by " +
                              std::to_string(tp));
    }
}

void validate(const WeightedChoi& ch, const Tolerances& tol) {
    if (ch.dim_in <= 0 || ch.dim_out <= 0) {
        throw ValidationError("choi: dimensions must be positive");
    }
    check_weights(ch.weights, ch.dim_in);
    const Index total = ch.dim_in * ch.dim_out;
    if (ch.sigma.rows() != total || ch.sigma.cols() != total) {
        throw ValidationError("choi.sigma: expected " + std::to_string(total) + "x" +
                              std::to_string(total));
    }
    check_finite(ch.sigma, "choi.sigma");
    if (hermiticity_residual(ch.sigma) > tol.eps_herm * (1.0 + ch.sigma.norm())) {
        throw ValidationError("choi.sigma: not Hermitian");
    }
    if (std::abs(ch.sigma.trace().real() - 1.0) > tol.eps_recon) {
        throw ValidationError("choi.sigma: trace deviates from 1");
    }
}

void validate(const Channel& ch, const Tolerances& tol) {
    std::visit([&](const auto& c) { validate(c, tol); }, ch);
}

ComplexMatrix apply_channel(const KrausChannel& ch, const ComplexMatrix& x) {
    require_input_shape(ch.dim_in, x, "apply");
    ComplexMatrix out = ComplexMatrix::Zero(ch.dim_out, ch.dim_out);
    for (const ComplexMatrix& e : ch.kraus) {
        out += e * x * e.adjoint();
    }
    return out;
}

ComplexMatrix apply_channel(const HolevoChannel& ch, const ComplexMatrix& x) {
    require_input_shape(ch.dim_in, x, "apply");
    ComplexMatrix out = ComplexMatrix::Zero(ch.dim_out, ch.dim_out);
    for (const HolevoPair& pair : ch.pairs) {
        out += (pair.effect * x).trace() * pair.state;
    }
    return out;
}

ComplexMatrix apply_channel(const WeightedChoi& ch, const ComplexMatrix& x) {
    require_input_shape(ch.dim_in, x, "apply");
    // Phi(e_i e_j*) = block(i, j) of sigma / sqrt(w_i w_j), extended linearly.
    ComplexMatrix out = ComplexMatrix::Zero(ch.dim_out, ch.dim_out);
    for (Index i = 0; i < ch.dim_in; ++i) {
        for (Index j = 0; j < ch.dim_in; ++j) {
            const Complex coeff = x(i, j) / std::sqrt(ch.weights[static_cast<std::size_t>(i)] *
                                                      ch.weights[static_cast<std::size_t>(j)]);
            if (coeff != Complex(0.0, 0.0)) {
                out += coeff * ch.sigma.block(i * ch.dim_out, j * ch.dim_out, ch.dim_out,
                                              ch.dim_out);
            }
        }
    }
    return out;
}

ComplexMatrix apply_channel(const Channel& ch, const ComplexMatrix& x) {
    return std::visit([&](const auto& c) { return apply_channel(c, x); }, ch);
}

ComplexMatrix dual_apply(const HolevoChannel& ch, const ComplexMatrix& y) {
    require_input_shape(ch.dim_out, y, "dual_apply");
    ComplexMatrix out = ComplexMatrix::Zero(ch.dim_in, ch.dim_in);
    for (const HolevoPair& pair : ch.pairs) {
        out += (pair.state * y).trace() * pair.effect;
    }
    return out;
}

ComplexMatrix dual_apply(const KrausChannel& ch, const ComplexMatrix& y) {
    require_input_shape(ch.dim_out, y, "dual_apply");
    ComplexMatrix out = ComplexMatrix::Zero(ch.dim_in, ch.dim_in);
    for (const ComplexMatrix& e : ch.kraus) {
        out += e.adjoint() * y * e;
    }
    return out;
}

std::vector<double> uniform_weights(Index dim) {
    return std::vector<double>(static_cast<std::size_t>(dim), 1.0 / static_cast<double>(dim));
}

WeightedChoi weighted_choi(const Channel& ch, const std::vector<double>& weights) {
    const Index d = dim_in(ch);
    const Index dp = dim_out(ch);
    check_weights(weights, d);

    WeightedChoi out;
    out.dim_in = d;
    out.dim_out = dp;
    out.weights = weights;
    out.sigma = ComplexMatrix::Zero(d * dp, d * dp);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            const double scale = std::sqrt(weights[static_cast<std::size_t>(i)] *
                                           weights[static_cast<std::size_t>(j)]);
            out.sigma.block(i * dp, j * dp, dp, dp) = scale * apply_channel(ch, matrix_unit(d, i, j));
        }
    }
    return out;
}

WeightedChoi weighted_choi(const Channel& ch) {
    return weighted_choi(ch, uniform_weights(dim_in(ch)));
}

CptpReport verify_cptp(const Channel& ch, const Tolerances& tol) {
    CptpReport report;
    const Index d = dim_in(ch);

    if (const auto* kraus = std::get_if<KrausChannel>(&ch)) {
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (const ComplexMatrix& e : kraus->kraus) sum += e.adjoint() * e;
        report.tp_residual = (sum - ComplexMatrix::Identity(d, d)).norm();
    } else if (const auto* holevo = std::get_if<HolevoChannel>(&ch)) {
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (const HolevoPair& pair : holevo->pairs) sum += pair.effect;
        report.tp_residual = (sum - ComplexMatrix::Identity(d, d)).norm();
    } else {
        const auto& choi = std::get<WeightedChoi>(ch);
        ComplexMatrix marginal = partial_trace_second(choi.sigma, choi.dim_in, choi.dim_out);
        for (Index i = 0; i < d; ++i) {
            marginal(i, i) -= choi.weights[static_cast<std::size_t>(i)];
        }
        report.tp_residual = marginal.norm();
    }

    const WeightedChoi uniform = weighted_choi(ch);
    const EigDecomposition eig = eigh(hermitian_part(uniform.sigma), tol);
    report.cp_lambda_min = eig.eigenvalues(eig.eigenvalues.size() - 1);

    report.ok = report.tp_residual <= tol.eps_recon && report.cp_lambda_min >= -tol.eps_psd;
    return report;
}

KrausChannel holevo_to_kraus(const HolevoChannel& ch, const Tolerances& tol) {
    KrausChannel out;
    out.dim_in = ch.dim_in;
    out.dim_out = ch.dim_out;

    for (std::size_t k = 0; k < ch.pairs.size(); ++k) {
        const ComplexMatrix& r = ch.pairs[k].state;
        const ComplexMatrix& f = ch.pairs[k].effect;
        EigDecomposition re, fe;
        try {
            re = eigh(r, tol);
            fe = eigh(f, tol);
        } catch (const NotHermitian& e) {
            throw NotPSDInput("holevo_to_kraus: pair " + std::to_string(k) + ": " + e.what());
        }
        if (re.eigenvalues(re.eigenvalues.size() - 1) < -tol.eps_psd) {
            throw NotPSDInput("holevo_to_kraus: state " + std::to_string(k) + " not PSD");
        }
        if (fe.eigenvalues(fe.eigenvalues.size() - 1) < -tol.eps_psd) {
            throw NotPSDInput("holevo_to_kraus: effect " + std::to_string(k) + " not PSD");
        }
        for (Index a = 0; a < re.eigenvalues.size(); ++a) {
            const double q = re.eigenvalues(a);
            if (q <= tol.eps_rank) continue;
            for (Index b = 0; b < fe.eigenvalues.size(); ++b) {
                const double mu = fe.eigenvalues(b);
                if (mu <= tol.eps_rank) continue;
                out.kraus.push_back(std::sqrt(q * mu) * re.eigenvectors.col(a) *
                                    fe.eigenvectors.col(b).adjoint());
                if (out.kraus.size() > kKrausCap) {
                    throw ValidationError("holevo_to_kraus: operator count exceeds cap of " +
                                          std::to_string(kKrausCap));
                }
            }
        }
    }
    if (out.kraus.empty()) {
        throw ValidationError("holevo_to_kraus: all spectral weight below eps_rank");
    }
    return out;
}

HolevoChannel kraus_to_holevo(const KrausChannel& ch, const Tolerances& tol) {
    HolevoChannel out;
    out.dim_in = ch.dim_in;
    out.dim_out = ch.dim_out;

    for (std::size_t k = 0; k < ch.kraus.size(); ++k) {
        if (ch.kraus[k].rows() != ch.dim_out || ch.kraus[k].cols() != ch.dim_in) {
            throw DimensionMismatch("kraus_to_holevo: operator " + std::to_string(k) +
                                    " is " + std::to_string(ch.kraus[k].rows()) + "x" +
                                    std::to_string(ch.kraus[k].cols()) + ", expected " +
                                    std::to_string(ch.dim_out) + "x" +
                                    std::to_string(ch.dim_in));
        }
        RankOneSplit split = split_rank_one(ch.kraus[k]);
        if (split.zero) continue;
        if (split.ratio > tol.eps_rank) {
            throw NotRankOne(k, split.ratio,
                             "kraus_to_holevo: operator " + std::to_string(k) +
                                 " has sigma2/sigma1 = " + std::to_string(split.ratio) +
                                 "; channel is not presented in measure-and-prepare form");
        }
        HolevoPair pair;
        pair.state = split.u * split.u.adjoint();
        pair.effect = split.v * split.v.adjoint();
        out.pairs.push_back(std::move(pair));
    }
    if (out.pairs.empty()) {
        throw ValidationError("kraus_to_holevo: no nonzero Kraus operators");
    }
    return out;
}

KrausChannel choi_to_kraus(const WeightedChoi& ch, const Tolerances& tol) {
    const Index d = ch.dim_in;
    const Index dp = ch.dim_out;

    // Unweighted Choi: block (i, j) = Phi(e_i e_j*).
    ComplexMatrix unweighted(d * dp, d * dp);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            const double scale = std::sqrt(ch.weights[static_cast<std::size_t>(i)] *
                                           ch.weights[static_cast<std::size_t>(j)]);
            unweighted.block(i * dp, j * dp, dp, dp) =
                ch.sigma.block(i * dp, j * dp, dp, dp) / scale;
        }
    }

    const EigDecomposition eig = eigh(hermitian_part(unweighted), tol);
    if (eig.eigenvalues(eig.eigenvalues.size() - 1) < -tol.eps_psd) {
        throw NotPSDInput("choi_to_kraus: Choi matrix has eigenvalue " +
                          std::to_string(eig.eigenvalues(eig.eigenvalues.size() - 1)));
    }

    KrausChannel out;
    out.dim_in = d;
    out.dim_out = dp;
    for (Index idx = 0; idx < eig.eigenvalues.size(); ++idx) {
        const double w = eig.eigenvalues(idx);
        if (w <= tol.eps_rank) continue;
        const double root = std::sqrt(w);
        ComplexMatrix e(dp, d);
        for (Index i = 0; i < d; ++i) {
            for (Index m = 0; m < dp; ++m) {
                e(m, i) = root * eig.eigenvectors(i * dp + m, idx);
            }
        }
        out.kraus.push_back(std::move(e));
    }
    if (out.kraus.empty()) {
        throw ValidationError("choi_to_kraus: all spectral weight below eps_rank");
    }
    return out;
}

KrausChannel to_kraus(const Channel& ch, const Tolerances& tol) {
    if (const auto* kraus = std::get_if<KrausChannel>(&ch)) return *kraus;
    if (const auto* holevo = std::get_if<HolevoChannel>(&ch)) return holevo_to_kraus(*holevo, tol);
    return choi_to_kraus(std::get<WeightedChoi>(ch), tol);
}

HolevoChannel to_holevo(const Channel& ch, const Tolerances& tol) {
    if (const auto* holevo = std::get_if<HolevoChannel>(&ch)) return *holevo;
    if (const auto* kraus = std::get_if<KrausChannel>(&ch)) return kraus_to_holevo(*kraus, tol);
    return kraus_to_holevo(choi_to_kraus(std::get<WeightedChoi>(ch), tol), tol);
}

}  // namespace sebkit
