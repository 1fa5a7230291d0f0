#include "linflow/closed_forms.hpp"

#include <cmath>
#include <stdexcept>

namespace linflow {

AlignedParams::AlignedParams(double lambda_, double r_, double k_)
    : lambda(lambda_), r(r_), k(k_) {
    if (!(lambda > 0.0)) throw std::domain_error("AlignedParams: lambda must be positive");
}

StrainVorticityPair aligned_pair(const AlignedParams& p) {
    const SymMat3 s = SymMat3::diag(-(p.r + 1.0) * p.lambda, p.r * p.lambda, p.lambda);
    return {s, {0.0, 2.0 * p.k * p.lambda, 0.0}};
}

TraceFreeMatrix aligned_matrix(const AlignedParams& p) {
    Mat3 m = Mat3::diag(-(1.0 + p.r), p.r, 1.0);
    m(0, 2) = p.k;
    m(2, 0) = -p.k;
    return TraceFreeMatrix(p.lambda * m);
}

double family_k(double r) {
    const double k_sq = 1.0 + r - 2.0 * r * r;
    if (k_sq < 0.0)
        throw std::domain_error("family_k: r outside [-1/2, 1]");
    return std::sqrt(k_sq);
}

FamilySolution::FamilySolution(double lambda0, double r) : lambda0_(lambda0), r_(r) {
    if (!(lambda0 > 0.0)) throw std::domain_error("FamilySolution: lambda0 must be positive");
    k_ = family_k(r);  // throws off [-1/2, 1]
    if (r > 0.0)
        t_max_ = 1.0 / (r * lambda0);
    else
        t_max_ = std::nullopt;
}

double FamilySolution::lambda_at(double t) const {
    if (t < 0.0 || (t_max_ && t >= *t_max_))
        throw std::domain_error("FamilySolution: t outside [0, t_max)");
    return lambda0_ / (1.0 - r_ * lambda0_ * t);
}

AlignedParams FamilySolution::state_at(double t) const {
    return {lambda_at(t), r_, k_};
}

double FamilySolution::dlambda_at(double t) const {
    const double lam = lambda_at(t);
    return r_ * lam * lam;
}

LimitConstants limit_constants(double m0) {
    const double m0_sq = m0 * m0;
    if (m0_sq > 0.25)
        throw std::domain_error("limit_constants: |m0| must be <= 1/2");
    const double s = std::sqrt(1.0 - 4.0 * m0_sq);
    const double den = 2.0 * m0_sq + 4.0;
    return {(1.0 - 4.0 * m0_sq + 3.0 * s) / den,
            m0 * (9.0 + 3.0 * s) / den,
            (1.0 - 4.0 * m0_sq - 3.0 * s) / den,
            m0_sq == 0.25};
}

DefectiveState defective_closed_form(double lambda0, double t) {
    if (!(lambda0 > 0.0))
        throw std::domain_error("defective_closed_form: lambda0 must be positive");
    const double u = 1.0 - lambda0 * t;
    if (t < 0.0 || u <= 0.0)
        throw std::domain_error("defective_closed_form: t outside [0, 1/lambda0)");
    return {lambda0 / u, u * u};
}

double boundary_invariant(double lambda, double r) {
    if (!(r > 0.0)) throw std::domain_error("boundary_invariant: r must be positive");
    if (!(lambda > 0.0)) throw std::domain_error("boundary_invariant: lambda must be positive");
    return lambda * std::cbrt(r * r * (r + 2.0));
}

RBracket boundary_r_bounds(double r0, double lambda0, double t) {
    if (!(r0 > 0.0)) throw std::domain_error("boundary_r_bounds: r0 must be positive");
    if (t < 0.0) throw std::domain_error("boundary_r_bounds: t must be nonnegative");
    const double c0 = boundary_invariant(lambda0, r0);
    const double base = 0.25 * c0 * std::cbrt(r0) * t;
    const double lo_den = 1.0 + base * std::pow(r0 + 2.0, 2.0 / 3.0);
    const double up_den = 1.0 + base * std::pow(2.0, 2.0 / 3.0);
    return {r0 / (lo_den * lo_den * lo_den), r0 / (up_den * up_den * up_den)};
}

double lambda_asymptotic_check(const std::vector<double>& times,
                               const std::vector<double>& lambdas, double t_max_est) {
    if (times.size() != lambdas.size() || times.empty())
        throw std::invalid_argument("lambda_asymptotic_check: mismatched or empty samples");
    double lam_max = 0.0;
    for (double l : lambdas) lam_max = std::max(lam_max, l);
    const double gate = lam_max / 10.0;
    double sup = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (lambdas[i] < gate) continue;
        sup = std::max(sup, std::abs((t_max_est - times[i]) * lambdas[i] - 1.0));
        any = true;
    }
    if (!any) throw std::runtime_error("lambda_asymptotic_check: no samples in final decade");
    return sup;
}

}  // namespace linflow
