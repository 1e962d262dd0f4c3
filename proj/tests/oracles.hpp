#pragma once

// Independent reference computations for the tests. None of these call into
// the library or into Eigen's decompositions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

/// Characteristic polynomial coefficients c[0..n] (c[n] = 1) of a small square
/// matrix by the Faddeev-LeVerrier recursion in long double.
inline std::vector<long double> char_poly(const Dense& a)
{
    const std::size_t n = a.size();
    using LD = long double;
    std::vector<std::vector<LD>> m(n, std::vector<LD>(n, 0.0L));
    std::vector<LD> c(n + 1, 0.0L);
    c[n] = 1.0L;
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I
        std::vector<std::vector<LD>> next(n, std::vector<LD>(n, 0.0L));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                LD s = 0.0L;
                for (std::size_t l = 0; l < n; ++l) {
                    s += static_cast<LD>(a[i][l]) * m[l][j];
                }
                next[i][j] = s + (i == j ? c[n - k + 1] : 0.0L);
            }
        }
        m = next;
        LD trace = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t l = 0; l < n; ++l) {
                trace += static_cast<LD>(a[i][l]) * m[l][i];
            }
        }
        c[n - k] = -trace / static_cast<LD>(k);
    }
    return c;
}

/// All roots of a monic polynomial (coefficients low to high) by Durand-Kerner
/// iteration followed by Newton polishing.
inline std::vector<std::complex<long double>> poly_roots(const std::vector<long double>& c)
{
    using C = std::complex<long double>;
    const std::size_t n = c.size() - 1;
    auto eval = [&](C z) {
        C v = 0.0L;
        for (std::size_t k = c.size(); k-- > 0;) {
            v = v * z + c[k];
        }
        return v;
    };
    auto deriv = [&](C z) {
        C v = 0.0L;
        for (std::size_t k = c.size(); k-- > 1;) {
            v = v * z + c[k] * static_cast<long double>(k);
        }
        return v;
    };
    long double bound = 1.0L;
    for (std::size_t k = 0; k < n; ++k) {
        bound = std::max(bound, 1.0L + std::abs(c[k]));
    }
    std::vector<C> z(n);
    const C seed(0.4L, 0.9L);
    for (std::size_t k = 0; k < n; ++k) {
        z[k] = std::pow(seed, static_cast<long double>(k)) * (bound * 0.5L);
    }
    for (int it = 0; it < 5000; ++it) {
        long double change = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            C denom = 1.0L;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    denom *= z[i] - z[j];
                }
            }
            const C step = eval(z[i]) / denom;
            z[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-16L) {
            break;
        }
    }
    for (auto& r : z) {
        for (int it = 0; it < 5; ++it) {
            const C d = deriv(r);
            if (std::abs(d) == 0.0L) {
                break;
            }
            r -= eval(r) / d;
        }
    }
    return z;
}

/// max |root of the characteristic polynomial|.
inline double spectral_radius(const Dense& a)
{
    long double best = 0.0L;
    for (const auto& r : poly_roots(char_poly(a))) {
        best = std::max(best, std::abs(r));
    }
    return static_cast<double>(best);
}

/// Solve A x = b by Gaussian elimination with partial pivoting (A copied).
inline std::vector<double> gauss_solve(Dense a, std::vector<double> b)
{
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) {
                piv = r;
            }
        }
        if (a[piv][col] == 0.0) {
            throw std::runtime_error("gauss_solve: singular");
        }
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) {
                a[r][k] -= f * a[col][k];
            }
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            s -= a[i][k] * x[k];
        }
        x[i] = s / a[i][i];
    }
    return x;
}

/// Ridge weights from explicitly formed normal equations (X^T X + alpha I) w = X^T y.
inline std::vector<double> ridge(const Dense& x, const std::vector<double>& y, double alpha)
{
    const std::size_t p = x.front().size();
    Dense g(p, std::vector<double>(p, 0.0));
    std::vector<double> rhs(p, 0.0);
    for (std::size_t r = 0; r < x.size(); ++r) {
        for (std::size_t i = 0; i < p; ++i) {
            rhs[i] += x[r][i] * y[r];
            for (std::size_t j = 0; j < p; ++j) {
                g[i][j] += x[r][i] * x[r][j];
            }
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        g[i][i] += alpha;
    }
    return gauss_solve(g, rhs);
}

/// Squared Pearson correlation from explicit two-pass moments; 0 for a constant series.
inline double squared_correlation(const std::vector<double>& a, const std::vector<double>& b)
{
    const auto n = static_cast<double>(a.size());
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0.0;
    double va = 0.0;
    double vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) {
        return 0.0;
    }
    return std::min(1.0, (cov * cov) / (va * vb));
}

} // namespace oracle
