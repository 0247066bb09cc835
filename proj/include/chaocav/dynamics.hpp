#pragma once

// Two atoms sharing one cavity mode whose coupling carries a random phase.
//
// The Hamiltonian preserves the excitation number, so the joint state splits
// into sectors n = 0, 1, ... spanned by
//     |gg,n+1>, |ge,n>, |eg,n>, |ee,n-1>
// whose amplitudes are (A_n, B_n, C_n, D_n), plus the ground state |gg,0>
// (stored as A_{-1}). All amplitudes live in the frame rotating with the bare
// atom and field energies.
//
// The random coupling enters through the phase factor Q(t) of the bright
// atom-field doublet. Averaging over realizations replaces Q and Q^{-1} with
// the real scalar <Q>(t, gamma) before any products are formed.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "chaocav/errors.hpp"
#include "chaocav/field.hpp"
#include "chaocav/linalg.hpp"

namespace chaocav {

// verbatim:  closed-form amplitudes exactly as printed in the source model.
// corrected: the exact sector solution; reproduces the initial state at t = 0
//            and conserves the norm when |Q| = 1.
enum class Variant { verbatim, corrected };

// mean_field: Q -> <Q>(t, gamma) in every sector.
// coherent:   Q -> <Q>(t, gamma) e^{+i w_n t}, keeping the deterministic
//             rotation of sector n; at gamma = 0 this is the exact dynamics.
enum class PhaseModel { mean_field, coherent };

struct ModelParams {
    double gamma = 0.0;           // chaotic parameter
    double omega_rabi = 1.0;      // atom-atom exchange Omega
    double g0 = 1.0;              // atom-field coupling
    double alpha = 5.0;           // coherent amplitude of the field
    double eps_trunc = 1e-12;     // Fock truncation tail
    double coupling_phase = 0.0;  // k_f x, enters as cos(k_f x)
    Variant variant = Variant::corrected;
    PhaseModel phase_model = PhaseModel::mean_field;

    void validate() const {
        if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma must be finite and >= 0");
        if (!(eps_trunc > 0.0 && eps_trunc < 1.0)) throw ValidationError("eps_trunc must lie in (0, 1)");
        if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("field amplitude must be finite and >= 0");
        if (!std::isfinite(omega_rabi) || !std::isfinite(g0) || !std::isfinite(coupling_phase))
            throw ValidationError("model parameters must be finite");
    }
};

// c00|gg> + c01|ge> + c10|eg> + c11|ee>
struct AtomicInit {
    Complex c00{}, c01{}, c10{}, c11{};

    double norm_squared() const {
        return std::norm(c00) + std::norm(c01) + std::norm(c10) + std::norm(c11);
    }

    ComplexVector<4> as_vector() const { return {c00, c01, c10, c11}; }

    void validate(double tolerance = 1e-12) const {
        const double n2 = norm_squared();
        if (!std::isfinite(n2) || std::abs(n2 - 1.0) > tolerance)
            throw ValidationError("atomic initial state is not normalized: |c00|^2+|c01|^2+|c10|^2+|c11|^2 = " +
                                  std::to_string(n2));
    }
};

struct DressedAmplitudes {
    long n = 0;
    Complex a{};  // |gg,n+1>
    Complex b{};  // |ge,n>
    Complex c{};  // |eg,n>
    Complex d{};  // |ee,n-1>, zero for n = 0
};

inline double erf(double x) { return std::erf(x); }

// <Q>(t, gamma) = exp(-(t/2) sqrt(pi gamma) erf(t sqrt(gamma)))
inline double averaged_q(double t, double gamma) {
    if (!(t >= 0.0) || !(gamma >= 0.0)) throw ValidationError("averaged_q: t and gamma must be >= 0");
    if (t == 0.0 || gamma == 0.0) return 1.0;
    const double root = std::sqrt(gamma);
    return std::exp(-0.5 * t * std::sqrt(std::numbers::pi * gamma) * erf(t * root));
}

// Coupling of the bright doublet in sector n: sqrt(2(2n+1)) g0 cos(k_f x).
inline double doublet_coupling(long n, const ModelParams& p) {
    return std::sqrt(2.0 * (2.0 * static_cast<double>(n) + 1.0)) * p.g0 * std::cos(p.coupling_phase);
}

// Rotation frequency carried by Q in sector n. With Omega != 0 the exact
// doublet frequency is sqrt(w^2 + Omega^2/4); the verbatim form ignores Omega.
inline double doublet_frequency(long n, const ModelParams& p) {
    const double w = doublet_coupling(n, p);
    if (p.variant == Variant::verbatim) return w;
    return std::sqrt(w * w + 0.25 * p.omega_rabi * p.omega_rabi);
}

// Number of sectors carrying amplitude for a field cut at n_max. The
// corrected variant needs n_max + 1 to hold |ee, n_max>.
inline std::size_t sector_count(const CoherentField& field, Variant variant) {
    return variant == Variant::corrected ? field.n_max + 2 : field.n_max + 1;
}

namespace detail {

inline DressedAmplitudes verbatim_amplitudes(long n, double t, Complex q_plus, Complex q_minus,
                                             const AtomicInit& in, const CoherentField& field,
                                             const ModelParams& p) {
    const double w = field.weight(n);
    const double dn = static_cast<double>(n);
    const double k = 2.0 * std::numbers::sqrt2 * (2.0 * dn + 1.0);
    const Complex em = std::polar(1.0, -p.omega_rabi * t);
    const Complex ep = std::polar(1.0, p.omega_rabi * t);
    const Complex x = in.c00 * q_plus - in.c01 * q_minus;

    DressedAmplitudes r;
    r.n = n;
    r.a = w * (std::sqrt(dn + 1.0) / k * em * x +
               em / (2.0 * std::sqrt(dn + 1.0)) * (in.c11 - (in.c00 - in.c01) / k));
    r.b = w * (em / (4.0 * std::sqrt(2.0 * dn + 1.0)) * x - 0.5 * in.c10 * ep);
    r.c = w * (em / (4.0 * std::sqrt(2.0 * dn + 1.0)) * x + 0.5 * in.c10 * ep);
    if (n > 0)
        r.d = w * (std::sqrt(dn) / k * em * x -
                   em / (2.0 * std::sqrt(dn + 1.0)) * (in.c11 - (in.c01 - in.c00) / k));
    return r;
}

inline DressedAmplitudes corrected_amplitudes(long n, double t, Complex q_plus, Complex q_minus,
                                              const AtomicInit& in, const CoherentField& field,
                                              const ModelParams& p) {
    const double dn = static_cast<double>(n);
    const double root = std::sqrt(2.0 * dn + 1.0);
    const double up = std::sqrt(dn + 1.0);
    const double down = std::sqrt(dn);

    // Sector content of sum_k W_k |k> (x) |psi_12>.
    const Complex a0 = field.weight(n + 1) * in.c00;
    const Complex b0 = field.weight(n) * in.c01;
    const Complex c0 = field.weight(n) * in.c10;
    const Complex d0 = field.weight(n - 1) * in.c11;

    const Complex sym0 = (b0 + c0) / std::numbers::sqrt2;
    const Complex anti0 = (b0 - c0) / std::numbers::sqrt2;
    const Complex bright0 = (up * a0 + down * d0) / root;
    const Complex dark = (down * a0 - up * d0) / root;

    // Doublet (bright, sym) under [[0, -G], [-G, Omega]]:
    //   U = e^{-i Omega t/2} [ (Q + Q^-1)/2 - (Q - Q^-1)/2 * M/R ],
    //   M = [[-Omega/2, -G], [-G, Omega/2]], R^2 = G^2 + Omega^2/4.
    const double omega = p.omega_rabi;
    const double g = doublet_coupling(n, p);
    const double r = std::sqrt(g * g + 0.25 * omega * omega);
    const Complex even = 0.5 * (q_plus + q_minus);
    const Complex odd = 0.5 * (q_plus - q_minus);
    double m11 = 0.0, m12 = 0.0, m22 = 0.0;
    if (r > 0.0) {
        m11 = -0.5 * omega / r;
        m12 = -g / r;
        m22 = 0.5 * omega / r;
    }
    const Complex global = std::polar(1.0, -0.5 * omega * t);
    const Complex bright = global * (even * bright0 - odd * (m11 * bright0 + m12 * sym0));
    const Complex sym = global * (even * sym0 - odd * (m12 * bright0 + m22 * sym0));
    const Complex anti = std::polar(1.0, omega * t) * anti0;

    DressedAmplitudes out;
    out.n = n;
    out.a = (up * bright + down * dark) / root;
    out.d = n > 0 ? (down * bright - up * dark) / root : Complex{};
    out.b = (sym + anti) / std::numbers::sqrt2;
    out.c = (sym - anti) / std::numbers::sqrt2;
    return out;
}

}  // namespace detail

// Amplitudes (A_n, B_n, C_n, D_n) of sector n at time t. q_plus / q_minus are
// the values standing in for Q and Q^{-1}: exact phases e^{+-i w t} for the
// deterministic problem, or the averaged scalar.
inline DressedAmplitudes dressed_amplitudes(long n, double t, Complex q_plus, Complex q_minus,
                                            const AtomicInit& init, const CoherentField& field,
                                            const ModelParams& params) {
    const auto count = static_cast<long>(sector_count(field, params.variant));
    if (n < 0 || n >= count)
        throw ValidationError("dressed_amplitudes: sector " + std::to_string(n) + " outside truncation range [0, " +
                              std::to_string(count - 1) + "]");
    if (params.variant == Variant::verbatim)
        return detail::verbatim_amplitudes(n, t, q_plus, q_minus, init, field, params);
    return detail::corrected_amplitudes(n, t, q_plus, q_minus, init, field, params);
}

// Amplitude of |gg,0>; it never couples to anything. The verbatim form has no
// such term.
inline Complex ground_amplitude(const AtomicInit& init, const CoherentField& field, Variant variant) {
    return variant == Variant::corrected ? field.weight(0) * init.c00 : Complex{};
}

// All sectors at one instant, with zero-padded index access so that shifted
// sums like sum_n A_n D*_{n+2} need no boundary cases.
struct AmplitudeStream {
    Complex ground{};
    std::vector<DressedAmplitudes> sectors;

    long size() const { return static_cast<long>(sectors.size()); }
    bool has(long n) const { return n >= 0 && n < size(); }

    Complex A(long n) const {
        if (n == -1) return ground;
        return has(n) ? sectors[static_cast<std::size_t>(n)].a : Complex{};
    }
    Complex B(long n) const { return has(n) ? sectors[static_cast<std::size_t>(n)].b : Complex{}; }
    Complex C(long n) const { return has(n) ? sectors[static_cast<std::size_t>(n)].c : Complex{}; }
    Complex D(long n) const { return has(n) ? sectors[static_cast<std::size_t>(n)].d : Complex{}; }

    // sum over every n where any shifted term can be nonzero
    template <class F>
    Complex sum(F&& term) const {
        Complex s{};
        for (long n = -3; n <= size() + 2; ++n) s += term(n);
        return s;
    }
};

// (Q, Q^{-1}) substitutes for sector n under the chosen phase model.
inline std::pair<Complex, Complex> sector_phase(long n, double t, const ModelParams& params) {
    const double q = averaged_q(t, params.gamma);
    if (params.phase_model == PhaseModel::mean_field) return {q, q};
    const double w = doublet_frequency(n, params);
    return {q * std::polar(1.0, w * t), q * std::polar(1.0, -w * t)};
}

inline AmplitudeStream amplitude_stream(double t, const AtomicInit& init, const CoherentField& field,
                                        const ModelParams& params) {
    AmplitudeStream s;
    s.ground = ground_amplitude(init, field, params.variant);
    const auto count = static_cast<long>(sector_count(field, params.variant));
    s.sectors.reserve(static_cast<std::size_t>(count));
    for (long n = 0; n < count; ++n) {
        const auto [qp, qm] = sector_phase(n, t, params);
        s.sectors.push_back(dressed_amplitudes(n, t, qp, qm, init, field, params));
    }
    return s;
}

// Reduced atomic operator tr_field |psi(t)><psi(t)| written out as the
// index-shifted sums over sector amplitudes. Not normalized.
inline ComplexMatrix4 assemble_density(const AmplitudeStream& s) {
    enum { gg = 0, ge = 1, eg = 2, ee = 3 };
    auto cj = [](Complex z) { return std::conj(z); };
    ComplexMatrix4 r;

    r(gg, gg) = s.sum([&](long n) { return Complex{std::norm(s.A(n))}; });
    r(gg, ge) = s.sum([&](long n) { return s.A(n) * cj(s.B(n + 1)); });
    r(gg, eg) = s.sum([&](long n) { return s.A(n) * cj(s.C(n + 1)); });
    r(gg, ee) = s.sum([&](long n) { return s.A(n) * cj(s.D(n + 2)); });

    r(ge, gg) = s.sum([&](long n) { return s.B(n) * cj(s.A(n - 1)); });
    r(ge, ge) = s.sum([&](long n) { return Complex{std::norm(s.B(n))}; });
    r(ge, eg) = s.sum([&](long n) { return s.B(n) * cj(s.C(n)); });
    r(ge, ee) = s.sum([&](long n) { return s.B(n) * cj(s.D(n + 1)); });

    r(eg, gg) = s.sum([&](long n) { return s.C(n) * cj(s.A(n - 1)); });
    r(eg, ge) = s.sum([&](long n) { return s.C(n) * cj(s.B(n)); });
    r(eg, eg) = s.sum([&](long n) { return Complex{std::norm(s.C(n))}; });
    r(eg, ee) = s.sum([&](long n) { return s.C(n) * cj(s.D(n + 1)); });

    r(ee, gg) = s.sum([&](long n) { return s.D(n) * cj(s.A(n - 2)); });
    r(ee, ge) = s.sum([&](long n) { return s.D(n) * cj(s.B(n - 1)); });
    r(ee, eg) = s.sum([&](long n) { return s.D(n) * cj(s.C(n - 1)); });
    r(ee, ee) = s.sum([&](long n) { return Complex{std::norm(s.D(n))}; });
    return r;
}

struct DensityResult {
    ComplexMatrix4 rho;           // unit trace
    double pre_norm_trace = 0.0;  // trace before renormalization
};

inline DensityResult normalize_density(const ComplexMatrix4& raw) {
    const double tr = raw.trace().real();
    if (!(tr > 0.0)) throw ValidationError("reduced atomic state has vanishing trace");
    return {raw * Complex{1.0 / tr}, tr};
}

inline DensityResult atomic_density(double t, const AtomicInit& init, const ModelParams& params) {
    if (!(t >= 0.0)) throw ValidationError("atomic_density: t must be >= 0");
    params.validate();
    init.validate();
    const CoherentField field = coherent_weights(params.alpha, params.eps_trunc);
    return normalize_density(assemble_density(amplitude_stream(t, init, field, params)));
}

}  // namespace chaocav
