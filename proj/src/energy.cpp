#include "conespectra/energy.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "conespectra/errors.hpp"

namespace conespectra {

namespace {

constexpr double kGramConditionLimit = 1e12;

void require_positive_radius(double r) {
    if (!(r > 0.0)) throw DomainError("radius must be positive");
}

void require_same_cone(const HarmonicExpansion& u, const HarmonicExpansion& v) {
    if (u.cone() != v.cone())
        throw MismatchedConeError("expansions live over different cones");
}

// Eigendecomposition of a Gram matrix, rejected when indefinite or with
// condition number above 1e12.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> checked_gram_eigen(
    const Eigen::MatrixXd& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi > lo * kGramConditionLimit)
        throw SingularGramError("Gram matrix numerically singular (eigenvalue range [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "])");
    return es;
}

}  // namespace

HarmonicExpansion::HarmonicExpansion(std::shared_ptr<const ConeGeometry> cone,
                                     std::vector<ExpansionTerm> terms)
    : cone_(std::move(cone)), terms_(std::move(terms)) {
    if (!cone_) throw DomainError("expansion requires a cone");
    std::sort(terms_.begin(), terms_.end(),
              [](const ExpansionTerm& a, const ExpansionTerm& b) { return a.index < b.index; });
    lambda_.reserve(terms_.size());
    alpha_.reserve(terms_.size());
    long long prev = 0;
    for (const auto& t : terms_) {
        if (t.index < 1)
            throw DomainError("expansion indices must be >= 1 (vanishing at the vertex)");
        if (t.index == prev)
            throw DomainError("duplicate expansion index " + std::to_string(t.index));
        prev = t.index;
        const double lam = eigenvalue_at(cone_->cross_section, t.index);
        lambda_.push_back(lam);
        alpha_.push_back(exponent_of_eigenvalue(lam, cone_->n));
    }
}

double energy(const HarmonicExpansion& u, const HarmonicExpansion& v, double r) {
    require_same_cone(u, v);
    require_positive_radius(r);
    const int n = u.cone()->n;
    double acc = 0.0;
    size_t a = 0, b = 0;
    while (a < u.terms().size() && b < v.terms().size()) {
        const long long ia = u.terms()[a].index, ib = v.terms()[b].index;
        if (ia < ib) { ++a; continue; }
        if (ib < ia) { ++b; continue; }
        const double alpha = u.alpha(a);
        acc += u.terms()[a].coeff * v.terms()[b].coeff * alpha *
               std::pow(r, 2.0 * alpha + n - 2);
        ++a; ++b;
    }
    return acc;
}

double energy_derivative(const HarmonicExpansion& u, const HarmonicExpansion& v, double r) {
    require_same_cone(u, v);
    require_positive_radius(r);
    const int n = u.cone()->n;
    double acc = 0.0;
    size_t a = 0, b = 0;
    while (a < u.terms().size() && b < v.terms().size()) {
        const long long ia = u.terms()[a].index, ib = v.terms()[b].index;
        if (ia < ib) { ++a; continue; }
        if (ib < ia) { ++b; continue; }
        const double alpha = u.alpha(a);
        acc += u.terms()[a].coeff * v.terms()[b].coeff * (alpha * alpha + u.lambda(a)) *
               std::pow(r, 2.0 * alpha + n - 3);
        ++a; ++b;
    }
    return acc;
}

double section_l2(const HarmonicExpansion& u, double r) {
    require_positive_radius(r);
    double acc = 0.0;
    for (size_t a = 0; a < u.terms().size(); ++a) {
        const double c = u.terms()[a].coeff;
        acc += c * c * std::pow(r, 2.0 * u.alpha(a));
    }
    return acc;
}

double section_dirichlet(const HarmonicExpansion& u, double r) {
    require_positive_radius(r);
    double acc = 0.0;
    for (size_t a = 0; a < u.terms().size(); ++a) {
        const double c = u.terms()[a].coeff;
        acc += c * c * std::pow(r, 2.0 * u.alpha(a)) * u.lambda(a);
    }
    return acc;
}

GramForm gram(const std::vector<HarmonicExpansion>& basis, double r) {
    if (basis.empty()) throw DomainError("Gram assembly needs a nonempty basis");
    require_positive_radius(r);
    const size_t k = basis.size();
    GramForm g;
    g.basis = basis;
    g.radius = r;
    g.matrix.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (size_t a = 0; a < k; ++a)
        for (size_t b = a; b < k; ++b) {
            const double e = energy(basis[a], basis[b], r);
            g.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = e;
            g.matrix(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = e;
        }
    return g;
}

double log_det_ratio(const std::vector<HarmonicExpansion>& basis, double s, double t) {
    const auto es_s = checked_gram_eigen(gram(basis, s).matrix);
    const auto es_t = checked_gram_eigen(gram(basis, t).matrix);
    double out = 0.0;
    for (Eigen::Index i = 0; i < es_s.eigenvalues().size(); ++i)
        out += std::log(es_t.eigenvalues()(i)) - std::log(es_s.eigenvalues()(i));
    return out;
}

std::vector<HarmonicExpansion> orthonormalize(const std::vector<HarmonicExpansion>& basis,
                                              double r) {
    const GramForm g = gram(basis, r);
    checked_gram_eigen(g.matrix);  // condition gate
    const Eigen::LLT<Eigen::MatrixXd> llt(g.matrix);
    if (llt.info() != Eigen::Success)
        throw SingularGramError("Cholesky factorization of the Gram matrix failed");
    const auto k = g.matrix.rows();
    // v_i = sum_j basis_j * W(j,i) with W = L^{-T}.
    Eigen::MatrixXd w = Eigen::MatrixXd::Identity(k, k);
    llt.matrixU().solveInPlace(w);

    std::vector<HarmonicExpansion> out;
    out.reserve(static_cast<size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) {
        std::map<long long, double> combined;
        for (Eigen::Index j = 0; j < k; ++j) {
            const double wj = w(j, i);
            if (wj == 0.0) continue;
            for (const auto& term : basis[static_cast<size_t>(j)].terms())
                combined[term.index] += wj * term.coeff;
        }
        std::vector<ExpansionTerm> terms;
        terms.reserve(combined.size());
        for (const auto& [idx, c] : combined) terms.push_back({idx, c});
        out.emplace_back(basis.front().cone(), std::move(terms));
    }
    return out;
}

double log_det_derivative(const std::vector<HarmonicExpansion>& basis, double r) {
    const auto ortho = orthonormalize(basis, r);
    double acc = 0.0;
    for (const auto& v : ortho) acc += energy_derivative(v, v, r);
    return acc;
}

std::vector<Eigen::VectorXd> constrained_orthonormalize(
    const std::vector<Eigen::VectorXd>& basis, const Eigen::MatrixXd& L,
    const Eigen::MatrixXd& Phi, const std::vector<Eigen::VectorXd>& w) {
    const Eigen::Index k = static_cast<Eigen::Index>(basis.size());
    if (k == 0) throw DimensionError("empty basis");
    if (static_cast<Eigen::Index>(w.size()) != k - 1)
        throw DimensionError("need exactly k-1 constraint vectors");
    const Eigen::Index dim = basis.front().size();

    Eigen::MatrixXd b(dim, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        if (basis[static_cast<size_t>(i)].size() != dim)
            throw DimensionError("basis vectors have inconsistent dimensions");
        b.col(i) = basis[static_cast<size_t>(i)];
    }

    // L-orthonormal coordinates for the subspace: u = b * s * y with
    // s = Q Lambda^{-1/2} from the spectral factorization of the L-Gram.
    const Eigen::MatrixXd lgram = b.transpose() * L * b;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lgram);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi > lo * kGramConditionLimit)
        throw DimensionError("basis numerically rank-deficient under L");
    const Eigen::MatrixXd s =
        es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();

    // Constraint images p_j(y) = <y, p_j> for Phi(u, w_j).
    Eigen::MatrixXd p(k, k - 1);
    for (Eigen::Index j = 0; j < k - 1; ++j)
        p.col(j) = s.transpose() * b.transpose() * (Phi * w[static_cast<size_t>(j)]);

    std::vector<Eigen::VectorXd> ycoords(static_cast<size_t>(k));
    Eigen::MatrixXd sub = Eigen::MatrixXd::Identity(k, k);  // current subspace frame
    const double pscale = std::max(1.0, p.norm());
    for (Eigen::Index i = k; i >= 2; --i) {
        // Annihilate w_1..w_{i-1} inside the current i-dimensional frame.
        const Eigen::MatrixXd m = sub.transpose() * p.leftCols(i - 1);  // i x (i-1)
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU);
        const Eigen::VectorXd z = svd.matrixU().col(i - 1);
        if ((m.transpose() * z).norm() > 1e-8 * pscale)
            throw DimensionError("nested annihilator dropped below required dimension");
        ycoords[static_cast<size_t>(i - 1)] = sub * z;
        sub = sub * svd.matrixU().leftCols(i - 1);
    }
    ycoords[0] = sub.col(0);

    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) out.push_back(b * (s * ycoords[static_cast<size_t>(i)]));

    // Reverse-order Gram-Schmidt refinement under L. Adding multiples of
    // v_j (j > i) to v_i preserves the annihilation contract, since v_j
    // already annihilates a superset of v_i's constraints; two passes
    // restore L-orthonormality lost to roundoff on ill-conditioned input.
    for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index i = k - 1; i >= 0; --i) {
            auto& vi = out[static_cast<size_t>(i)];
            for (Eigen::Index j = i + 1; j < k; ++j) {
                const auto& vj = out[static_cast<size_t>(j)];
                vi -= vj.dot(L * vi) * vj;
            }
            const double norm = std::sqrt(vi.dot(L * vi));
            if (!(norm > 0.0))
                throw DimensionError("basis numerically rank-deficient under L");
            vi /= norm;
        }
    return out;
}

EigensumCheck eigensum_inequality_check(const std::shared_ptr<const ConeGeometry>& cone,
                                        const std::vector<HarmonicExpansion>& subspace,
                                        double r) {
    if (subspace.empty()) throw DomainError("subspace must be nonempty");
    for (const auto& u : subspace)
        if (u.cone() != cone) throw MismatchedConeError("subspace expansion over a different cone");
    EigensumCheck out;
    const long long k = static_cast<long long>(subspace.size());
    for (long long i = 1; i <= k; ++i)
        out.lhs += std::sqrt(eigenvalue_at(cone->cross_section, i));
    out.rhs = 0.5 * r * log_det_derivative(subspace, r);
    out.holds = out.lhs <= out.rhs + 1e-9 * std::abs(out.rhs);
    return out;
}

}  // namespace conespectra
