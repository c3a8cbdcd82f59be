#pragma once

// Gauss-Legendre rules and compensated summation helpers.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gfc {

struct Quad1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1,1], exact for polynomials of degree 2n-1.
// Nodes by Newton iteration on P_n with the Chebyshev initial guess.
inline Quad1D gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    Quad1D q;
    q.nodes.resize(n);
    q.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = -x;
        q.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        q.weights[i] = w;
        q.weights[n - 1 - i] = w;
    }
    return q;
}

// Same rule mapped onto [a,b].
inline Quad1D gauss_legendre(int n, double a, double b) {
    Quad1D q = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        q.nodes[i] = mid + half * q.nodes[i];
        q.weights[i] *= half;
    }
    return q;
}

// Kahan-Neumaier compensated accumulator; fixed order of use keeps
// reductions bit-stable independent of thread count.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace gfc
