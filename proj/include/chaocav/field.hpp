#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "chaocav/errors.hpp"

namespace chaocav {

// How the user-facing field parameter maps onto the coherent amplitude.
//   amplitude: the parameter is alpha itself (mean photon number alpha^2).
//   mean:      the parameter is the mean photon number, alpha = sqrt(param).
enum class FieldConvention { amplitude, mean };

inline double coherent_amplitude(double field_parameter, FieldConvention convention) {
    if (field_parameter < 0.0) throw ValidationError("field parameter must be >= 0");
    return convention == FieldConvention::mean ? std::sqrt(field_parameter) : field_parameter;
}

// Truncated coherent state sum_n W_n |n>, W_n = alpha^n / sqrt(n!) e^{-alpha^2/2}.
struct CoherentField {
    double alpha = 0.0;
    std::size_t n_max = 0;
    std::vector<double> weights;  // W_0 .. W_{n_max}

    // W_n, zero beyond the cutoff.
    double weight(long n) const {
        if (n < 0 || static_cast<std::size_t>(n) > n_max) return 0.0;
        return weights[static_cast<std::size_t>(n)];
    }

    double norm_squared() const {
        double s = 0.0;
        for (double w : weights) s += w * w;
        return s;
    }

    double mean_photon_number() const {
        double s = 0.0;
        for (std::size_t n = 0; n < weights.size(); ++n) s += static_cast<double>(n) * weights[n] * weights[n];
        return s;
    }
};

namespace detail {
inline double log_weight_squared(double alpha, std::size_t n) {
    const double dn = static_cast<double>(n);
    return 2.0 * dn * std::log(alpha) - std::lgamma(dn + 1.0) - alpha * alpha;
}
}  // namespace detail

// Smallest cutoff whose discarded tail sum_{n > n_max} W_n^2 is below eps_trunc.
inline CoherentField coherent_weights(double alpha, double eps_trunc) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("coherent_weights: alpha must be finite and >= 0");
    if (!(eps_trunc > 0.0 && eps_trunc < 1.0)) throw ValidationError("coherent_weights: eps_trunc must lie in (0, 1)");

    CoherentField field;
    field.alpha = alpha;
    if (alpha == 0.0) {
        field.weights = {1.0};
        return field;
    }

    // Far enough past the Poisson bulk that the remaining tail underflows.
    const auto n_hi = static_cast<std::size_t>(std::ceil(alpha * alpha + 40.0 * alpha + 60.0));
    std::vector<double> w2(n_hi + 1);
    for (std::size_t n = 0; n <= n_hi; ++n) w2[n] = std::exp(detail::log_weight_squared(alpha, n));

    // Summed from the far end so the tail is not a difference of O(1) numbers.
    std::vector<double> tail(n_hi + 2, 0.0);  // tail[k] = sum_{n >= k} W_n^2
    for (std::size_t k = n_hi + 1; k-- > 0;) tail[k] = tail[k + 1] + w2[k];

    std::size_t cut = 0;
    while (cut < n_hi && tail[cut + 1] >= eps_trunc) ++cut;

    field.n_max = cut;
    field.weights.resize(cut + 1);
    for (std::size_t n = 0; n <= cut; ++n) field.weights[n] = std::sqrt(w2[n]);
    return field;
}

}  // namespace chaocav
