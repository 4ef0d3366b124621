#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "sitevec/errors.hpp"
#include "sitevec/vec_ops.hpp"

namespace sitevec {

template <class T>
inline T sigmoid(T z) {
    return T(1) / (T(1) + std::exp(-z));
}

// log(sigmoid(x)), stable across the whole real line.
template <class T>
inline T log_sigmoid(T x) {
    return x >= T(0) ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// L = -log sig(u_o . v_c) - sum_k log sig(-u_k . v_c)
template <class T>
T sgns_loss(std::span<const T> center, std::span<const T> context,
            std::span<const std::span<const T>> negatives) {
    const std::size_t m = center.size();
    if (context.size() != m) throw std::invalid_argument("sgns: dimension mismatch");
    T z = dot(context.data(), center.data(), m);
    if (!std::isfinite(z)) throw numerical_error("sgns: non-finite activation");
    T loss = -log_sigmoid(z);
    for (const auto& neg : negatives) {
        if (neg.size() != m) throw std::invalid_argument("sgns: dimension mismatch");
        T zk = dot(neg.data(), center.data(), m);
        if (!std::isfinite(zk)) throw numerical_error("sgns: non-finite activation");
        loss += -log_sigmoid(-zk);
    }
    return loss;
}

// One SGD step on the negative-sampling objective. Updates v_c (center input
// vector), u_o (context output vector), and every u_k in place; returns the
// loss at the pre-step weights. All gradients are evaluated at the old
// weights, so (old - new) / lr recovers the analytic gradient exactly.
// scratch must hold center.size() elements.
template <class T>
T sgns_update(std::span<T> center, std::span<T> context,
              std::span<const std::span<T>> negatives, T lr, std::span<T> scratch) {
    const std::size_t m = center.size();
    if (context.size() != m || scratch.size() != m)
        throw std::invalid_argument("sgns: dimension mismatch");
    if (!(lr > T(0))) throw std::invalid_argument("sgns: learning rate must be positive");

    T z = dot(context.data(), center.data(), m);
    if (!std::isfinite(z)) throw numerical_error("sgns: non-finite activation");
    T loss = -log_sigmoid(z);
    T g = sigmoid(z) - T(1);  // dL/dz for the positive term
    for (std::size_t d = 0; d < m; ++d) scratch[d] = g * context[d];
    axpy(-lr * g, center.data(), context.data(), m);

    for (const auto& neg : negatives) {
        if (neg.size() != m) throw std::invalid_argument("sgns: dimension mismatch");
        T zk = dot(neg.data(), center.data(), m);
        if (!std::isfinite(zk)) throw numerical_error("sgns: non-finite activation");
        loss += -log_sigmoid(-zk);
        T gk = sigmoid(zk);
        axpy(gk, neg.data(), scratch.data(), m);
        axpy(-lr * gk, center.data(), neg.data(), m);
    }

    axpy(-lr, scratch.data(), center.data(), m);
    return loss;
}

}  // namespace sitevec
