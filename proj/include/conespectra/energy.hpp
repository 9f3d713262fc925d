#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "conespectra/cone.hpp"

namespace conespectra {

struct ExpansionTerm {
    long long index = 1;   // addresses the i-th positive eigenvalue slot, i >= 1
    double coeff = 0.0;
};

// Finite harmonic expansion u(x,r) = sum_i c_i r^{alpha_i} phi_i(x) on a
// cone, vanishing at the vertex (all indices >= 1). Eigenfunctions enter
// only through their index and L^2-orthonormality.
class HarmonicExpansion {
public:
    HarmonicExpansion(std::shared_ptr<const ConeGeometry> cone,
                      std::vector<ExpansionTerm> terms);

    const std::shared_ptr<const ConeGeometry>& cone() const { return cone_; }
    const std::vector<ExpansionTerm>& terms() const { return terms_; }
    double lambda(size_t term) const { return lambda_[term]; }
    double alpha(size_t term) const { return alpha_[term]; }

private:
    std::shared_ptr<const ConeGeometry> cone_;
    std::vector<ExpansionTerm> terms_;  // sorted by index, indices distinct
    std::vector<double> lambda_;
    std::vector<double> alpha_;
};

// Dirichlet energy inner product over the r-ball:
// E_r(u,v) = sum_i c_i cbar_i alpha_i r^{2 alpha_i + n - 2}.
double energy(const HarmonicExpansion& u, const HarmonicExpansion& v, double r);

// d/ds E_s(u,v) at s=r: sum_i c_i cbar_i (alpha_i^2 + lambda_i) r^{2 alpha_i + n - 3}.
double energy_derivative(const HarmonicExpansion& u, const HarmonicExpansion& v, double r);

// L^2 norm of the radius-r section: sum_i c_i^2 r^{2 alpha_i}.
double section_l2(const HarmonicExpansion& u, double r);

// Cross-section Dirichlet energy of the section: sum_i c_i^2 r^{2 alpha_i} lambda_i.
double section_dirichlet(const HarmonicExpansion& u, double r);

struct GramForm {
    std::vector<HarmonicExpansion> basis;
    double radius = 1.0;
    Eigen::MatrixXd matrix;  // matrix(a,b) = energy(basis[a], basis[b], radius)
};

GramForm gram(const std::vector<HarmonicExpansion>& basis, double r);

// ln det gram(basis,t) - ln det gram(basis,s), via Cholesky of each Gram
// matrix. SingularGramError on (numerically) dependent bases.
double log_det_ratio(const std::vector<HarmonicExpansion>& basis, double s, double t);

// d/ds ln det_1 E_s at s=r, evaluated as sum_i energy_derivative(v_i,v_i,r)
// over an E_r-orthonormal basis {v_i}.
double log_det_derivative(const std::vector<HarmonicExpansion>& basis, double r);

// E_r-orthonormal basis spanning the same subspace (columns of the Cholesky
// inverse-transpose applied to the input basis).
std::vector<HarmonicExpansion> orthonormalize(const std::vector<HarmonicExpansion>& basis,
                                              double r);

// Given a basis of a k-dimensional subspace, an inner product L and a
// bilinear form Phi on the ambient space, and k-1 independent vectors w,
// returns an L-orthonormal basis {v_1..v_k} of the subspace with
// Phi(v_i, w_j) = 0 for all j < i. Phi(u, w) = u^T Phi w.
std::vector<Eigen::VectorXd> constrained_orthonormalize(
    const std::vector<Eigen::VectorXd>& basis, const Eigen::MatrixXd& L,
    const Eigen::MatrixXd& Phi, const std::vector<Eigen::VectorXd>& w);

struct EigensumCheck {
    double lhs = 0.0;  // sum of sqrt(lambda_i), i = 1..k
    double rhs = 0.0;  // (r/2) d/ds ln det_1 E_s
    bool holds = false;
};

// Eigenvalue-sum bound for a k-dimensional subspace of harmonics.
EigensumCheck eigensum_inequality_check(const std::shared_ptr<const ConeGeometry>& cone,
                                        const std::vector<HarmonicExpansion>& subspace,
                                        double r);

}  // namespace conespectra
