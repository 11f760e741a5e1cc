#ifndef NUTAXIS_MODEL_HPP
#define NUTAXIS_MODEL_HPP

#include <Eigen/Dense>

#include <concepts>

namespace nutaxis {

using Field = Eigen::VectorXd;

/// Coefficients of the two-species nutrient-taxis system
///
///   u_t = D_u Δu - χ ∇·(u F_ε'(u) ∇w) + δ F_ε(u) w
///   v_t = α v w
///   w_t = D_w Δw - β F_ε(u) w - γ v w
///
/// with no-flux boundaries for u and w. eps_reg = 0 is the unregularized system;
/// D_w = δ = 1 is the normalized form.
struct ModelParams {
    double D_u = 1.0;
    double D_w = 1.0;
    double chi = 0.0;
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    double delta = 1.0;
    double eps_reg = 0.0;

    /// Requires positive diffusivities and nonnegative everything else.
    /// Reduced problems (pure heat flow, frozen nutrient) switch rates off.
    void validate() const;

    /// Physical runs: every rate strictly positive.
    void validate_strict() const;

    bool normalized() const { return D_w == 1.0 && delta == 1.0; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Saturated uptake F_ε(s) = s / (1 + ε s).
template <std::floating_point Scalar>
inline Scalar f_eps(Scalar s, double eps) {
    return s / (Scalar(1) + eps * s);
}

/// F_ε'(s) = 1 / (1 + ε s)^2, in (0, 1].
template <std::floating_point Scalar>
inline Scalar f_eps_prime(Scalar s, double eps) {
    const Scalar q = Scalar(1) + eps * s;
    return Scalar(1) / (q * q);
}

template <typename Derived>
inline Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> f_eps(
    const Eigen::MatrixBase<Derived>& s, double eps) {
    return (s.array() / (1.0 + eps * s.array())).matrix();
}

template <typename Derived>
inline Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> f_eps_prime(
    const Eigen::MatrixBase<Derived>& s, double eps) {
    return (1.0 + eps * s.array()).square().inverse().matrix();
}

}  // namespace nutaxis

#endif  // NUTAXIS_MODEL_HPP
