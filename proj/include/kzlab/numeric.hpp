// Shared numeric utilities: error taxonomy, compensated summation, a small
// power-of-two FFT for linear convolution, and a deterministic parallel map.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace kzlab {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double log_pi_v = 1.1447298858494001741434273513530587;
inline constexpr double log_2pi_v = 1.8378770664093454835606594728112353;

// Input that violates a documented precondition.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& m) : std::runtime_error(m) {}
};

// Evaluation point too close to a pole or outside the analytic domain.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& m) : std::runtime_error(m) {}
};

// A computation could not reach its accuracy target.
struct accuracy_error : std::runtime_error {
    explicit accuracy_error(const std::string& m) : std::runtime_error(m) {}
};

// A computation would exceed its configured work budget.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& m) : std::runtime_error(m) {}
};

// Neumaier compensated accumulator.  Summation order is part of the result
// contract, so every reduction in this library feeds it in a fixed order.
class kahan_sum {
  public:
    void add(double x) {
        double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

class kahan_sum_cplx {
  public:
    void add(cplx z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    cplx value() const { return {re_.value(), im_.value()}; }

  private:
    kahan_sum re_;
    kahan_sum im_;
};

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place iterative radix-2 FFT; n must be a power of two.
void fft_pow2(std::vector<cplx>& a, bool inverse);

// Full linear convolution (size a+b-1) via FFT, with a direct fallback for
// short inputs where the O(n^2) loop is cheaper and exact ordering matters.
std::vector<cplx> convolve(const std::vector<cplx>& a, const std::vector<cplx>& b);
std::vector<cplx> convolve_direct(const std::vector<cplx>& a, const std::vector<cplx>& b);

// Worker count: explicit argument wins, then KZLAB_WORKERS, then hardware.
inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("KZLAB_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) return w;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs body(i) for i in [0, n) on `workers` threads.  Each index is computed
// exactly once and writes only to its own slot, so results are independent of
// the worker count; callers reduce the slots sequentially.
template <class F>
void parallel_for(std::size_t n, int workers, F&& body) {
    int w = resolve_workers(workers);
    if (w <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    std::exception_ptr first_error = nullptr;
    std::mutex err_mutex;
    for (int t = 0; t < w; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t i = static_cast<std::size_t>(t); i < n;
                     i += static_cast<std::size_t>(w))
                    body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace kzlab
