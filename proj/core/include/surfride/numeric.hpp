#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <utility>

namespace surfride {

using ScalarFn = std::function<double(double)>;

// Bracketed root of f on [a, b]; f(a) and f(b) must differ in sign (or vanish).
// Converges to a relative bracket width of rel_tol. Throws ValidationError for a
// non-straddling bracket and ConvergenceError when max_iter is exhausted.
double find_root(const ScalarFn& f, double a, double b, double rel_tol = 1e-14,
                 int max_iter = 300);

// Uniform scan of f over [a, b] at `samples` points; returns the first bracket
// with a sign change, walking from a (or from b when from_high is set).
std::optional<std::pair<double, double>> scan_sign_change(const ScalarFn& f, double a,
                                                          double b, int samples,
                                                          bool from_high = false);

using State2 = std::array<double, 2>;

template <class Rhs>
State2 rk4_step(const Rhs& rhs, const State2& x, double h) {
    auto axpy = [](const State2& a, double s, const State2& b) {
        return State2{a[0] + s * b[0], a[1] + s * b[1]};
    };
    const State2 k1 = rhs(x);
    const State2 k2 = rhs(axpy(x, 0.5 * h, k1));
    const State2 k3 = rhs(axpy(x, 0.5 * h, k2));
    const State2 k4 = rhs(axpy(x, h, k3));
    return {x[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            x[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

// Worker count from SURFRIDE_THREADS (default: hardware concurrency, at least 1).
unsigned worker_count();

// Runs body(i) for i in [0, n). Each index is visited exactly once; callers write
// results by index so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned workers = 0);

}  // namespace surfride
