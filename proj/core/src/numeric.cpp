#include "surfride/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "surfride/error.hpp"

namespace surfride {

double find_root(const ScalarFn& f, double a, double b, double rel_tol, int max_iter) {
    if (a > b) std::swap(a, b);
    const double fa = f(a);
    const double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0))
        throw ValidationError("find_root: bracket does not straddle a root");
    auto tol = [rel_tol](double lo, double hi) {
        return std::abs(hi - lo) <= rel_tol * std::max(std::abs(lo), std::abs(hi)) ||
               std::abs(hi - lo) <= 1e-300;
    };
    std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
    auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    if (iters >= static_cast<std::uintmax_t>(max_iter) && !tol(lo, hi))
        throw ConvergenceError("find_root: iteration limit reached", std::abs(hi - lo));
    return 0.5 * (lo + hi);
}

std::optional<std::pair<double, double>> scan_sign_change(const ScalarFn& f, double a,
                                                          double b, int samples,
                                                          bool from_high) {
    if (samples < 2) samples = 2;
    const double h = (b - a) / (samples - 1);
    auto at = [&](int i) { return from_high ? b - i * h : a + i * h; };
    double x0 = at(0);
    double f0 = f(x0);
    for (int i = 1; i < samples; ++i) {
        const double x1 = at(i);
        const double f1 = f(x1);
        if (f0 == 0.0) return std::make_pair(x0, x0);
        if ((f0 < 0.0) != (f1 < 0.0))
            return from_high ? std::make_pair(x1, x0) : std::make_pair(x0, x1);
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0.0) return std::make_pair(x0, x0);
    return std::nullopt;
}

unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("SURFRIDE_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 1024));
        } catch (const std::exception&) {
        }
    }
    return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned workers) {
    if (workers == 0) workers = worker_count();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace surfride
