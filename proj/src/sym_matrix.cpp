#include "pucci/sym_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace pucci {

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) m = std::max(m, std::fabs((*this)(i, j)));
    return m;
}

namespace {

// One cyclic Jacobi sweep pass on a full 3x3 copy. Rotations zero each
// off-diagonal pair in turn; convergence is quadratic, a handful of sweeps
// reaches 1e-13 relative off-diagonal mass for any symmetric input.
void jacobi3(double a[3][3], std::array<double, 3>& eig) {
    const double scale = std::max({std::fabs(a[0][0]), std::fabs(a[1][1]), std::fabs(a[2][2]),
                                   std::fabs(a[0][1]), std::fabs(a[0][2]), std::fabs(a[1][2]), 1e-300});
    const double tol = 1e-13 * scale;
    for (int sweep = 0; sweep < 64; ++sweep) {
        const double off = std::fabs(a[0][1]) + std::fabs(a[0][2]) + std::fabs(a[1][2]);
        if (off <= tol) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::fabs(a[p][q]) <= tol * 1e-2) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // Apply rotation G(p,q,theta) on both sides.
                const double app = a[p][p], aqq = a[q][q], apq = a[p][q];
                a[p][p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                a[q][q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                a[p][q] = a[q][p] = 0.0;
                for (int r = 0; r < 3; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a[r][p], arq = a[r][q];
                    a[r][p] = a[p][r] = c * arp - s * arq;
                    a[r][q] = a[q][r] = s * arp + c * arq;
                }
            }
        }
    }
    eig = {a[0][0], a[1][1], a[2][2]};
    std::sort(eig.begin(), eig.begin() + 3);
}

}  // namespace

std::array<double, 3> SymMatrix::eigenvalues() const {
    std::array<double, 3> e{0.0, 0.0, 0.0};
    if (n_ == 1) {
        e[0] = (*this)(0, 0);
        return e;
    }
    if (n_ == 2) {
        const double a = (*this)(0, 0), b = (*this)(0, 1), d = (*this)(1, 1);
        const double mean = 0.5 * (a + d);
        const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
        e[0] = mean - disc;
        e[1] = mean + disc;
        return e;
    }
    double a[3][3] = {{(*this)(0, 0), (*this)(0, 1), (*this)(0, 2)},
                      {(*this)(0, 1), (*this)(1, 1), (*this)(1, 2)},
                      {(*this)(0, 2), (*this)(1, 2), (*this)(2, 2)}};
    jacobi3(a, e);
    return e;
}

}  // namespace pucci
