#pragma once

#include <span>

#include "pmivec/vecops.hpp"

namespace pmivec::losses {

/// Squared dot-product residual against a scalar target.
///   loss = (v.v' - target)^2
/// Gradients overwrite grad_v / grad_vp. The negative-sample update and the
/// shifted variant both reduce to this with a different target.
inline double dot_residual(std::span<const double> v, std::span<const double> vp,
                           double target, std::span<double> grad_v,
                           std::span<double> grad_vp) {
    const double r = dot(v, vp) - target;
    const double g = 2.0 * r;
    for (std::size_t k = 0; k < v.size(); ++k) {
        grad_v[k] = g * vp[k];
        grad_vp[k] = g * v[k];
    }
    return r * r;
}

inline double loss_and_grad_dot(std::span<const double> v, std::span<const double> vp,
                                double pmi_ij, std::span<double> grad_v,
                                std::span<double> grad_vp) {
    return dot_residual(v, vp, pmi_ij, grad_v, grad_vp);
}

inline double loss_and_grad_shifted(std::span<const double> v, std::span<const double> vp,
                                    double pmi_ij, double shift, std::span<double> grad_v,
                                    std::span<double> grad_vp) {
    return dot_residual(v, vp, pmi_ij - shift, grad_v, grad_vp);
}

/// Adds the norm penalty alpha*(||v|| - target_len)^2 into grad and returns
/// its loss. Subgradient at ||v|| = 0 is defined as zero.
inline double add_norm_penalty(std::span<const double> v, double target_len, double alpha,
                               std::span<double> grad) {
    const double len = norm(v);
    const double r = len - target_len;
    if (len > 0.0) {
        const double g = 2.0 * alpha * r / len;
        for (std::size_t k = 0; k < v.size(); ++k) grad[k] += g * v[k];
    }
    return alpha * r * r;
}

/// Dot residual plus length penalties toward sqrt(self-PMI) on both vectors.
/// Preconditions: self_pmi_i, self_pmi_j already clamped positive by the caller.
inline double loss_and_grad_length(std::span<const double> v, std::span<const double> vp,
                                   double pmi_ij, double self_pmi_i, double self_pmi_j,
                                   double alpha1, double alpha2, std::span<double> grad_v,
                                   std::span<double> grad_vp) {
    double loss = dot_residual(v, vp, pmi_ij, grad_v, grad_vp);
    loss += add_norm_penalty(v, std::sqrt(self_pmi_i), alpha1, grad_v);
    loss += add_norm_penalty(vp, std::sqrt(self_pmi_j), alpha2, grad_vp);
    return loss;
}

/// Dot residual plus a self-pair dot penalty and a norm-equality penalty:
///   (v_i.v_j' - PMI_ij)^2 + a1*(v_i.v_i' - PMI_ii)^2 + a2*(||v_i|| - ||v_i'||)^2
/// Gradients flow to all three vectors (v_i receives all three terms).
inline double loss_and_grad_paired(std::span<const double> v_i, std::span<const double> v_ip,
                                   std::span<const double> v_jp, double pmi_ij,
                                   double self_pmi_i, double alpha1, double alpha2,
                                   std::span<double> grad_vi, std::span<double> grad_vip,
                                   std::span<double> grad_vjp) {
    const std::size_t d = v_i.size();
    const double r_dot = dot(v_i, v_jp) - pmi_ij;
    const double r_self = dot(v_i, v_ip) - self_pmi_i;
    const double ni = norm(v_i);
    const double nip = norm(v_ip);
    const double r_norm = ni - nip;

    for (std::size_t k = 0; k < d; ++k) {
        grad_vi[k] = 2.0 * r_dot * v_jp[k] + 2.0 * alpha1 * r_self * v_ip[k];
        grad_vip[k] = 2.0 * alpha1 * r_self * v_i[k];
        grad_vjp[k] = 2.0 * r_dot * v_i[k];
    }
    if (ni > 0.0) {
        const double g = 2.0 * alpha2 * r_norm / ni;
        for (std::size_t k = 0; k < d; ++k) grad_vi[k] += g * v_i[k];
    }
    if (nip > 0.0) {
        const double g = -2.0 * alpha2 * r_norm / nip;
        for (std::size_t k = 0; k < d; ++k) grad_vip[k] += g * v_ip[k];
    }
    return r_dot * r_dot + alpha1 * r_self * r_self + alpha2 * r_norm * r_norm;
}

} // namespace pmivec::losses
