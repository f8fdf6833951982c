#include "polymerlab/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace polymerlab {

namespace {
// Rescale when a term exceeds the reference by this much (e^200 keeps headroom).
constexpr double kRescaleGap = 200.0;

std::atomic<std::size_t>& configured_workers() {
    static std::atomic<std::size_t> n{0};
    return n;
}
}  // namespace

void LogSum::add_log(double log_term) {
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (empty()) {
        ref_ = log_term;
        scaled_ = KahanSum{};
        scaled_.add(1.0);
        return;
    }
    if (log_term > ref_ + kRescaleGap) {
        const double factor = std::exp(ref_ - log_term);
        KahanSum rescaled;
        rescaled.add(scaled_.value() * factor);
        scaled_ = rescaled;
        ref_ = log_term;
    }
    scaled_.add(std::exp(log_term - ref_));
}

void LogSum::merge(const LogSum& other) {
    if (other.empty()) return;
    add_log(other.log_value());
}

double LogSum::log_value() const {
    if (empty()) return ref_;
    const double v = scaled_.value();
    if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
    return ref_ + std::log(v);
}

std::size_t worker_count() {
    const std::size_t set = configured_workers().load();
    if (set > 0) return set;
    if (const char* env = std::getenv("POLYMERLAB_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void set_worker_count(std::size_t n) { configured_workers().store(n); }

void parallel_for(std::size_t tasks, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(worker_count(), tasks);
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        for (std::size_t i = next++; i < tasks; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace polymerlab
