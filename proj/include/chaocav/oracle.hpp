#pragma once

// Brute-force reference computations, independent of the closed forms in
// dynamics.hpp:
//   * the Hamiltonian of two atoms in one cavity mode, block by block, and
//     its Runge-Kutta integration;
//   * Monte Carlo sampling of a random frequency to estimate <e^{i phi(t)}>.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "chaocav/dynamics.hpp"
#include "chaocav/errors.hpp"
#include "chaocav/field.hpp"
#include "chaocav/linalg.hpp"
#include "chaocav/parallel.hpp"

namespace chaocav::oracle {

// Spin operators of Eq. (1) as explicit two-qubit matrices: S^z = sigma_z,
// S^+ = |e><g|, acting on atom i = 0 or 1.
struct SpinOperators {
    std::array<ComplexMatrix4, 2> z;
    std::array<ComplexMatrix4, 2> plus;
    std::array<ComplexMatrix4, 2> minus;
};

inline SpinOperators two_atom_spin_operators() {
    const auto id = ComplexMatrix2::identity();
    SpinOperators s;
    s.z = {tensor(pauli::z(), id), tensor(id, pauli::z())};
    s.plus = {tensor(pauli::raising(), id), tensor(id, pauli::raising())};
    s.minus = {tensor(pauli::lowering(), id), tensor(id, pauli::lowering())};
    return s;
}

struct HamiltonianParams {
    double omega0 = 0.5;      // atomic frequency; splitting is 2*omega0 with S^z = sigma_z
    double omega_f = 1.0;     // cavity frequency
    double g0 = 1.0;
    double omega_rabi = 1.0;  // Omega
};

// lab:         bare energies included.
// interaction: energies measured from omega_f * n in sector n, which leaves
//              only the detuning 2*omega0 - omega_f on |gg> and |ee>.
enum class Frame { lab, interaction };

// Sector n on (|gg,n+1>, |ge,n>, |eg,n>, |ee,n-1>). For n = 0 the last basis
// state does not exist and its row and column are zero.
struct HamiltonianBlock {
    long n = 0;
    ComplexMatrix4 matrix;
    HamiltonianParams params;
    double kf_x = 0.0;
};

inline HamiltonianBlock build_block(long n, const HamiltonianParams& p, double kf_x, Frame frame = Frame::lab) {
    if (n < 0) throw ValidationError("build_block: sector index must be >= 0");
    const double dn = static_cast<double>(n);
    const double g = p.g0 * std::cos(kf_x);
    const double up = std::sqrt(dn + 1.0);
    const double down = std::sqrt(dn);
    const double shift = frame == Frame::interaction ? p.omega_f * dn : 0.0;

    HamiltonianBlock blk{n, {}, p, kf_x};
    auto& h = blk.matrix;
    h(0, 0) = -2.0 * p.omega0 + p.omega_f * (dn + 1.0) - shift;
    h(1, 1) = p.omega_f * dn - shift;
    h(2, 2) = p.omega_f * dn - shift;
    h(1, 2) = h(2, 1) = p.omega_rabi;
    h(0, 1) = h(1, 0) = -g * up;
    h(0, 2) = h(2, 0) = -g * up;
    if (n > 0) {
        h(3, 3) = 2.0 * p.omega0 + p.omega_f * (dn - 1.0) - shift;
        h(1, 3) = h(3, 1) = -g * down;
        h(2, 3) = h(3, 2) = -g * down;
    }
    return blk;
}

// Energy of |gg,0> in the chosen frame.
inline double ground_energy(const HamiltonianParams& p, Frame frame) {
    return -2.0 * p.omega0 + (frame == Frame::interaction ? p.omega_f : 0.0);
}

// Classic fixed-step RK4 for i d/dt psi = H psi.
template <std::size_t N>
ComplexVector<N> rk4_evolve(const SquareMatrix<N>& h, ComplexVector<N> psi, double t_final, double dt) {
    if (!(dt > 0.0)) throw ValidationError("rk4: dt must be > 0");
    if (!(t_final >= 0.0)) throw ValidationError("rk4: t_final must be >= 0");
    if (t_final == 0.0) return psi;
    const auto steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
    const double step = t_final / static_cast<double>(steps);
    const Complex minus_i{0.0, -1.0};

    auto deriv = [&](const ComplexVector<N>& v) {
        ComplexVector<N> d = h * v;
        for (auto& z : d) z *= minus_i;
        return d;
    };
    auto axpy = [](const ComplexVector<N>& x, double a, const ComplexVector<N>& y) {
        ComplexVector<N> r;
        for (std::size_t i = 0; i < N; ++i) r[i] = x[i] + a * y[i];
        return r;
    };

    for (long s = 0; s < steps; ++s) {
        const auto k1 = deriv(psi);
        const auto k2 = deriv(axpy(psi, 0.5 * step, k1));
        const auto k3 = deriv(axpy(psi, 0.5 * step, k2));
        const auto k4 = deriv(axpy(psi, step, k3));
        for (std::size_t i = 0; i < N; ++i) psi[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return psi;
}

struct IntegrationOptions {
    Frame frame = Frame::interaction;
    std::vector<long> sectors;       // empty: every sector that carries amplitude
    double max_norm_drift = 1e-6;    // relative, per sector
    unsigned workers = 0;
};

struct IntegrationResult {
    AmplitudeStream amplitudes;  // sectors not integrated are left zero
    double norm_drift = 0.0;     // largest relative per-sector drift
};

// Initial sector content of sum_k W_k |k> (x) |psi_12>.
inline ComplexVector<4> initial_sector(long n, const AtomicInit& init, const CoherentField& field) {
    return {field.weight(n + 1) * init.c00, field.weight(n) * init.c01, field.weight(n) * init.c10,
            n > 0 ? field.weight(n - 1) * init.c11 : Complex{}};
}

inline IntegrationResult integrate_schrodinger(const AtomicInit& init, const CoherentField& field,
                                               const HamiltonianParams& params, double kf_x, double t_final,
                                               double dt, const IntegrationOptions& opts = {}) {
    if (!(dt > 0.0)) throw ValidationError("integrate_schrodinger: dt must be > 0");
    if (!(t_final >= 0.0)) throw ValidationError("integrate_schrodinger: t_final must be >= 0");

    const long count = static_cast<long>(field.n_max) + 2;
    std::vector<long> sectors = opts.sectors;
    if (sectors.empty())
        for (long n = 0; n < count; ++n) sectors.push_back(n);

    IntegrationResult res;
    res.amplitudes.sectors.resize(static_cast<std::size_t>(count));
    for (long n = 0; n < count; ++n) res.amplitudes.sectors[static_cast<std::size_t>(n)].n = n;
    res.amplitudes.ground = field.weight(0) * init.c00 * std::polar(1.0, -ground_energy(params, opts.frame) * t_final);

    std::vector<double> drift(sectors.size(), 0.0);
    parallel_for(sectors.size(), opts.workers, [&](std::size_t i) {
        const long n = sectors[i];
        if (n < 0 || n >= count) throw ValidationError("integrate_schrodinger: sector out of range");
        const auto psi0 = initial_sector(n, init, field);
        const auto blk = build_block(n, params, kf_x, opts.frame);
        const auto psi = rk4_evolve(blk.matrix, psi0, t_final, dt);
        const double n0 = norm_squared(psi0);
        if (n0 > 0.0) drift[i] = std::abs(norm_squared(psi) / n0 - 1.0);
        auto& out = res.amplitudes.sectors[static_cast<std::size_t>(n)];
        out.a = psi[0];
        out.b = psi[1];
        out.c = psi[2];
        out.d = psi[3];
    });
    res.norm_drift = drift.empty() ? 0.0 : *std::max_element(drift.begin(), drift.end());
    if (res.norm_drift > opts.max_norm_drift)
        throw IntegrationError("integrate_schrodinger: relative norm drift " + std::to_string(res.norm_drift) +
                               " exceeds " + std::to_string(opts.max_norm_drift) + "; use a smaller dt");
    return res;
}

// Reduced atomic state built from the full (atoms x photons) state vector,
// without the shifted-index sums of assemble_density.
inline ComplexMatrix4 reduced_atomic_state(const AmplitudeStream& s) {
    const long photons = s.size() + 2;
    std::vector<ComplexVector<4>> psi(static_cast<std::size_t>(photons), ComplexVector<4>{});
    auto at = [&](long k) -> ComplexVector<4>& { return psi[static_cast<std::size_t>(k)]; };
    at(0)[0] += s.ground;
    for (const auto& sec : s.sectors) {
        at(sec.n + 1)[0] += sec.a;
        at(sec.n)[1] += sec.b;
        at(sec.n)[2] += sec.c;
        if (sec.n > 0) at(sec.n - 1)[3] += sec.d;
    }
    ComplexMatrix4 rho;
    for (const auto& v : psi) rho += ComplexMatrix4::outer(v, v);
    return rho;
}

// ---------------------------------------------------------------------------
// Monte Carlo estimate of <exp(i phi(t))>, phi(t) = int_0^t w(s) ds.

enum class NoiseProcess { constant, ornstein_uhlenbeck };

struct NoiseSpec {
    NoiseProcess process = NoiseProcess::ornstein_uhlenbeck;
    double sigma = 0.0;   // stationary RMS of w
    double tau_c = 1.0;   // correlation time of w
    std::uint64_t seed = 0;
    double dt = 0.0;      // integration step; 0 selects tau_c / 20
    unsigned workers = 0;

    void validate() const {
        if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("NoiseSpec: sigma must be >= 0");
        if (!(tau_c > 0.0) || !std::isfinite(tau_c)) throw ValidationError("NoiseSpec: tau_c must be > 0");
        if (!(dt >= 0.0)) throw ValidationError("NoiseSpec: dt must be >= 0");
    }
};

// Exponentially correlated frequency noise whose Kubo average has the small-t
// form exp(-gamma t^2) and the large-t form exp(-sqrt(pi gamma) t / 2):
// sigma^2 = 2 gamma, tau_c = sqrt(pi) / (4 sqrt(gamma)). sigma_scale rescales
// sigma, e.g. by a sector-dependent factor, for sensitivity studies.
inline NoiseSpec ou_surrogate(double gamma, std::uint64_t seed, double sigma_scale = 1.0) {
    if (!(gamma > 0.0)) throw ValidationError("ou_surrogate: gamma must be > 0");
    NoiseSpec s;
    s.process = NoiseProcess::ornstein_uhlenbeck;
    s.sigma = sigma_scale * std::sqrt(2.0 * gamma);
    s.tau_c = std::sqrt(std::numbers::pi) / (4.0 * std::sqrt(gamma));
    s.seed = seed;
    return s;
}

// Closed-form Kubo average for the OU process: exp(-sigma^2 tau^2 (x - 1 + e^{-x})), x = t/tau.
inline double kubo_average(double t, double sigma, double tau_c) {
    const double x = t / tau_c;
    return std::exp(-sigma * sigma * tau_c * tau_c * (x - 1.0 + std::exp(-x)));
}

struct QEstimate {
    double t = 0.0;
    Complex mean{1.0};             // sample mean of exp(i phi)
    double std_error = 0.0;        // standard error of Re(mean)
    double phase_variance = 0.0;   // sample <phi^2>
    double phase_variance_se = 0.0;

    // exp(-<phi^2>/2): exact for a Gaussian phase, with far smaller relative
    // error than the direct mean once the average is small.
    double gaussian_estimate() const { return std::exp(-0.5 * phase_variance); }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed of sample i depends only on (seed, i), so any partition of the
// samples over workers draws the same numbers.
inline std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t i) {
    return splitmix64(splitmix64(seed) ^ splitmix64(i + 0x632be59bd9b4e019ULL));
}

struct MomentSums {
    std::vector<double> cos_sum, sin_sum, cos_sq, phi_sq, phi_4;
    explicit MomentSums(std::size_t m) : cos_sum(m), sin_sum(m), cos_sq(m), phi_sq(m), phi_4(m) {}
    void add(const MomentSums& o) {
        for (std::size_t k = 0; k < cos_sum.size(); ++k) {
            cos_sum[k] += o.cos_sum[k];
            sin_sum[k] += o.sin_sum[k];
            cos_sq[k] += o.cos_sq[k];
            phi_sq[k] += o.phi_sq[k];
            phi_4[k] += o.phi_4[k];
        }
    }
};

}  // namespace detail

inline constexpr std::size_t monte_carlo_block = 1000;

// Samples w(t) from the process in `spec` (stationary start), accumulates
// phi by the trapezoid rule over exact OU transitions, and averages
// exp(i phi) at every grid time. gamma <= 0 returns the deterministic value 1.
inline std::vector<QEstimate> monte_carlo_q(double gamma, const std::vector<double>& t_grid, std::size_t n_samples,
                                            const NoiseSpec& spec) {
    if (n_samples < 1000) throw ValidationError("monte_carlo_q: n_samples must be >= 1000");
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (!(t_grid[k] >= 0.0)) throw ValidationError("monte_carlo_q: grid times must be >= 0");
        if (k > 0 && t_grid[k] < t_grid[k - 1]) throw ValidationError("monte_carlo_q: grid must be ascending");
    }
    std::vector<QEstimate> out(t_grid.size());
    for (std::size_t k = 0; k < t_grid.size(); ++k) out[k].t = t_grid[k];
    if (!(gamma > 0.0)) return out;
    spec.validate();

    const std::size_t m = t_grid.size();
    const double dt = spec.dt > 0.0 ? spec.dt : spec.tau_c / 20.0;
    const std::size_t blocks = (n_samples + monte_carlo_block - 1) / monte_carlo_block;
    std::vector<detail::MomentSums> partial(blocks, detail::MomentSums(m));

    parallel_for(blocks, spec.workers, [&](std::size_t blk) {
        auto& acc = partial[blk];
        const std::size_t first = blk * monte_carlo_block;
        const std::size_t last = std::min(n_samples, first + monte_carlo_block);
        for (std::size_t i = first; i < last; ++i) {
            std::mt19937_64 rng(detail::sample_seed(spec.seed, i));
            std::normal_distribution<double> normal(0.0, 1.0);
            double w = spec.sigma * normal(rng);
            double phi = 0.0;
            double now = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const double target = t_grid[k];
                if (spec.process == NoiseProcess::constant) {
                    phi = w * target;
                } else if (target > now) {
                    const auto steps = static_cast<long>(std::ceil((target - now) / dt - 1e-9));
                    const double h = (target - now) / static_cast<double>(steps);
                    const double decay = std::exp(-h / spec.tau_c);
                    const double kick = spec.sigma * std::sqrt(1.0 - decay * decay);
                    for (long s = 0; s < steps; ++s) {
                        const double next = w * decay + kick * normal(rng);
                        phi += 0.5 * h * (w + next);
                        w = next;
                    }
                }
                now = target;
                const double c = std::cos(phi);
                acc.cos_sum[k] += c;
                acc.sin_sum[k] += std::sin(phi);
                acc.cos_sq[k] += c * c;
                acc.phi_sq[k] += phi * phi;
                acc.phi_4[k] += phi * phi * phi * phi;
            }
        }
    });

    detail::MomentSums total(m);
    for (const auto& p : partial) total.add(p);  // fixed order

    const double nn = static_cast<double>(n_samples);
    for (std::size_t k = 0; k < m; ++k) {
        const double mc = total.cos_sum[k] / nn;
        const double var_c = std::max(0.0, total.cos_sq[k] / nn - mc * mc) * nn / (nn - 1.0);
        const double v = total.phi_sq[k] / nn;
        const double var_v = std::max(0.0, total.phi_4[k] / nn - v * v);
        out[k].mean = {mc, total.sin_sum[k] / nn};
        out[k].std_error = std::sqrt(var_c / nn);
        out[k].phase_variance = v;
        out[k].phase_variance_se = std::sqrt(var_v / nn);
    }
    return out;
}

inline std::vector<QEstimate> monte_carlo_q(double gamma, const std::vector<double>& t_grid, std::size_t n_samples,
                                            std::uint64_t seed) {
    if (!(gamma > 0.0)) return monte_carlo_q(gamma, t_grid, n_samples, NoiseSpec{});
    return monte_carlo_q(gamma, t_grid, n_samples, ou_surrogate(gamma, seed));
}

// Least-squares slope of y against x.
inline double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("fitted_slope: need two or more paired points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Decay rate of the Gaussian estimate, d(<phi^2>/2)/dt, fitted over the grid.
inline double gaussian_decay_exponent(const std::vector<QEstimate>& est) {
    std::vector<double> x, y;
    for (const auto& e : est) {
        x.push_back(e.t);
        y.push_back(0.5 * e.phase_variance);
    }
    return fitted_slope(x, y);
}

// Decay rate of the direct mean, -d log Re<e^{i phi}>/dt. Only points with a
// positive mean enter the fit.
inline double direct_decay_exponent(const std::vector<QEstimate>& est) {
    std::vector<double> x, y;
    for (const auto& e : est)
        if (e.mean.real() > 0.0) {
            x.push_back(e.t);
            y.push_back(-std::log(e.mean.real()));
        }
    return fitted_slope(x, y);
}

}  // namespace chaocav::oracle
