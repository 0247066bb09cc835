#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "chaocav/linalg.hpp"

namespace chaocav {

struct EntanglementRecord {
    double t = 0.0;
    double gamma = 0.0;
    double doe = 0.0;                     // sum |mu_i| - 1
    std::array<double, 4> pt_eigenvalues{};  // ascending
};

// Negativity from the spectrum of the partial transpose over atom 2.
//
// Rounding can push sum|mu| - 1 a few ulps outside [0, 1]; values within
// 1e-12 of the interval are clamped onto it.
inline EntanglementRecord negativity(const ComplexMatrix4& rho, double t = 0.0, double gamma = 0.0) {
    require_density(rho, "negativity");
    EntanglementRecord rec;
    rec.t = t;
    rec.gamma = gamma;
    rec.pt_eigenvalues = eig_hermitian(partial_transpose(rho, 2));
    double s = 0.0;
    for (double mu : rec.pt_eigenvalues) s += std::abs(mu);
    double doe = s - 1.0;
    if (doe < 0.0 && doe > -1e-12) doe = 0.0;
    if (doe > 1.0 && doe < 1.0 + 1e-12) doe = 1.0;
    rec.doe = doe;
    return rec;
}

}  // namespace chaocav
