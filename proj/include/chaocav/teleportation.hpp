#pragma once

// Standard one-qubit teleportation through the two-atom channel. Atom 1 is
// Alice's qubit, atom 2 is Bob's. Alice jointly measures the unknown qubit
// and atom 1 in the Bell basis
//     phi+- = (|ee> +- |gg>)/sqrt2,  psi+- = (|eg> +- |ge>)/sqrt2
// and Bob applies I, Z, X or XZ respectively.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaocav/dynamics.hpp"
#include "chaocav/errors.hpp"
#include "chaocav/linalg.hpp"
#include "chaocav/parallel.hpp"

namespace chaocav {

enum class BellLabel { phi_plus, phi_minus, psi_plus, psi_minus };

inline constexpr std::array<BellLabel, 4> all_bell_labels{BellLabel::phi_plus, BellLabel::phi_minus,
                                                          BellLabel::psi_plus, BellLabel::psi_minus};

inline std::string_view to_string(BellLabel b) {
    switch (b) {
        case BellLabel::phi_plus: return "phi+";
        case BellLabel::phi_minus: return "phi-";
        case BellLabel::psi_plus: return "psi+";
        case BellLabel::psi_minus: return "psi-";
    }
    return "?";
}

inline ComplexVector<4> bell_vector(BellLabel b) {
    const double h = 1.0 / std::numbers::sqrt2;
    switch (b) {
        case BellLabel::phi_plus: return {h, 0.0, 0.0, h};
        case BellLabel::phi_minus: return {-h, 0.0, 0.0, h};
        case BellLabel::psi_plus: return {0.0, h, h, 0.0};
        case BellLabel::psi_minus: return {0.0, -h, h, 0.0};
    }
    return {};
}

inline ComplexMatrix2 bell_correction(BellLabel b) {
    switch (b) {
        case BellLabel::phi_plus: return ComplexMatrix2::identity();
        case BellLabel::phi_minus: return pauli::z();
        case BellLabel::psi_plus: return pauli::x();
        case BellLabel::psi_minus: return pauli::x() * pauli::z();
    }
    return ComplexMatrix2::identity();
}

// alpha|g> + beta|e>
struct UnknownQubit {
    Complex alpha_u{1.0};
    Complex beta_u{};

    static UnknownQubit from_real_alpha(double a) {
        if (!(std::abs(a) <= 1.0)) throw ValidationError("unknown qubit: |alpha| must not exceed 1");
        return {a, std::sqrt(1.0 - a * a)};
    }

    void validate() const {
        const double n2 = std::norm(alpha_u) + std::norm(beta_u);
        if (!std::isfinite(n2) || std::abs(n2 - 1.0) > 1e-12)
            throw ValidationError("unknown qubit is not normalized: |alpha|^2+|beta|^2 = " + std::to_string(n2));
    }

    ComplexVector<2> as_vector() const { return {alpha_u, beta_u}; }
    ComplexMatrix2 density() const { return ComplexMatrix2::projector(as_vector()); }
};

struct TeleportOutcome {
    BellLabel bell_label = BellLabel::phi_plus;
    ComplexMatrix2 bob_state;     // normalized, after correction; zero if !defined
    double outcome_weight = 0.0;  // probability of this measurement result
    double fidelity = 0.0;        // tr(rho_u rho_b)
    bool defined = true;          // false when outcome_weight vanishes
};

inline constexpr double degenerate_weight = 1e-15;

// All four measurement branches by explicit projection of rho_u (x) channel.
inline std::array<TeleportOutcome, 4> bell_project_teleport(const ComplexMatrix4& channel, const UnknownQubit& u) {
    require_density(channel, "bell_project_teleport");
    u.validate();
    const ComplexMatrix2 rho_u = u.density();
    const ComplexMatrix8 joint = tensor(rho_u, channel);

    std::array<TeleportOutcome, 4> out;
    for (std::size_t k = 0; k < 4; ++k) {
        const BellLabel label = all_bell_labels[k];
        const ComplexMatrix8 p = tensor(ComplexMatrix4::projector(bell_vector(label)), ComplexMatrix2::identity());
        const ComplexMatrix2 bob = partial_trace<3>(p * joint * p, std::array{3});

        TeleportOutcome& o = out[k];
        o.bell_label = label;
        o.outcome_weight = bob.trace().real();
        if (o.outcome_weight <= degenerate_weight) {
            o.defined = false;
            o.outcome_weight = std::max(0.0, o.outcome_weight);
            continue;
        }
        const ComplexMatrix2 fix = bell_correction(label);
        o.bob_state = fix * bob * fix.adjoint() * Complex{1.0 / o.outcome_weight};
        o.fidelity = purity_overlap(rho_u, o.bob_state);
    }
    return out;
}

struct ClosedFormTeleport {
    TeleportOutcome outcome;       // phi+ branch
    std::array<Complex, 4> kappa;  // kappa_1..kappa_4 for the unit-trace channel
    double pre_norm_trace = 0.0;   // trace of the channel before renormalization
};

// phi+ branch straight from the sector amplitudes:
//   kappa_1 = 1/2 sum |a|^2|A_n|^2 + a b* A_n C*_{n+1} + b a* C_n A*_{n-1} + |b|^2|C_n|^2
//   kappa_2 = 1/2 sum |a|^2 A_n B*_{n+1} + a b* A_n D*_{n+2} + b a* C_n B*_n + |b|^2 C_n D*_{n+s}
//   kappa_3 = 1/2 sum |a|^2 B_n A*_{n-1} + a b* B_n C*_n + b a* D_n A*_{n-2} + |b|^2 D_n C*_{n+s-2}
//   kappa_4 = 1/2 sum |a|^2|B_n|^2 + a b* B_n D*_{n+1} + b a* D_n B*_{n-1} + |b|^2|D_n|^2
// with (a, b) the unknown qubit and s = 1 (corrected) or 2 (verbatim).
inline ClosedFormTeleport closed_form_from_stream(const AmplitudeStream& s, const UnknownQubit& u, Variant variant) {
    auto cj = [](Complex z) { return std::conj(z); };
    const Complex a = u.alpha_u;
    const Complex b = u.beta_u;
    const double aa = std::norm(a);
    const double bb = std::norm(b);
    const Complex ab = a * cj(b);
    const Complex ba = b * cj(a);
    const long shift = variant == Variant::corrected ? 1 : 2;

    std::array<Complex, 4> k{};
    k[0] = 0.5 * s.sum([&](long n) {
        return aa * std::norm(s.A(n)) + ab * s.A(n) * cj(s.C(n + 1)) + ba * s.C(n) * cj(s.A(n - 1)) +
               bb * std::norm(s.C(n));
    });
    k[1] = 0.5 * s.sum([&](long n) {
        return aa * s.A(n) * cj(s.B(n + 1)) + ab * s.A(n) * cj(s.D(n + 2)) + ba * s.C(n) * cj(s.B(n)) +
               bb * s.C(n) * cj(s.D(n + shift));
    });
    k[2] = 0.5 * s.sum([&](long n) {
        return aa * s.B(n) * cj(s.A(n - 1)) + ab * s.B(n) * cj(s.C(n)) + ba * s.D(n) * cj(s.A(n - 2)) +
               bb * s.D(n) * cj(s.C(n + shift - 2));
    });
    k[3] = 0.5 * s.sum([&](long n) {
        return aa * std::norm(s.B(n)) + ab * s.B(n) * cj(s.D(n + 1)) + ba * s.D(n) * cj(s.B(n - 1)) +
               bb * std::norm(s.D(n));
    });

    ClosedFormTeleport r;
    r.pre_norm_trace = s.sum([&](long n) {
        return Complex{std::norm(s.A(n)) + std::norm(s.B(n)) + std::norm(s.C(n)) + std::norm(s.D(n))};
    }).real();
    if (!(r.pre_norm_trace > 0.0)) throw DegenerateOutcome("closed-form teleportation: channel has zero trace");
    for (auto& z : k) z /= r.pre_norm_trace;
    r.kappa = k;

    const double weight = (k[0] + k[3]).real();
    r.outcome.bell_label = BellLabel::phi_plus;
    r.outcome.outcome_weight = weight;
    if (weight <= degenerate_weight)
        throw DegenerateOutcome("closed-form teleportation: phi+ outcome has zero probability (kappa_1 + kappa_4 = " +
                                std::to_string(weight) + ")");
    ComplexMatrix2 rb;
    rb(0, 0) = k[0];
    rb(0, 1) = k[1];
    rb(1, 0) = k[2];
    rb(1, 1) = k[3];
    r.outcome.bob_state = rb * Complex{1.0 / weight};
    r.outcome.fidelity = purity_overlap(u.density(), r.outcome.bob_state);
    return r;
}

inline ClosedFormTeleport bob_state_closed_form(double t, const AtomicInit& init, const ModelParams& params,
                                                const UnknownQubit& u) {
    if (!(t >= 0.0)) throw ValidationError("bob_state_closed_form: t must be >= 0");
    params.validate();
    init.validate();
    u.validate();
    const CoherentField field = coherent_weights(params.alpha, params.eps_trunc);
    return closed_form_from_stream(amplitude_stream(t, init, field, params), u, params.variant);
}

struct GridPoint {
    double t = 0.0;
    double gamma = 0.0;
};

struct FidelityRecord {
    double t = 0.0;
    double gamma = 0.0;
    double fidelity = 0.0;
    std::array<Complex, 4> kappa{};
    double weight = 0.0;          // kappa_1 + kappa_4
    double pre_norm_trace = 0.0;
    std::optional<std::string> error;  // set when the branch could not be evaluated
};

// One record per grid point, in grid order. Failures are recorded in the row.
inline std::vector<FidelityRecord> teleport_fidelity_sweep(const std::vector<GridPoint>& grid, const AtomicInit& init,
                                                           const ModelParams& params, const UnknownQubit& u,
                                                           unsigned workers = 0) {
    std::vector<FidelityRecord> rows(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t i) {
        FidelityRecord& row = rows[i];
        row.t = grid[i].t;
        row.gamma = grid[i].gamma;
        try {
            ModelParams p = params;
            p.gamma = grid[i].gamma;
            const ClosedFormTeleport cf = bob_state_closed_form(grid[i].t, init, p, u);
            row.fidelity = cf.outcome.fidelity;
            row.kappa = cf.kappa;
            row.weight = cf.outcome.outcome_weight;
            row.pre_norm_trace = cf.pre_norm_trace;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    return rows;
}

}  // namespace chaocav
