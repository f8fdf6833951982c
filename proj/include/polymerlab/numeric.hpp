#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

namespace polymerlab {

/// Compensated sum.
class KahanSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = sum_ + y;
        c_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

/// Sum of exp(terms) kept as log-reference plus a compensated scaled sum, so
/// weights far below the double range still add up exactly in relative terms.
class LogSum {
public:
    void add_log(double log_term);
    void merge(const LogSum& other);

    /// log of the sum; -inf when empty or all terms were zero.
    double log_value() const;
    double value() const { return std::exp(log_value()); }
    bool empty() const { return ref_ == -std::numeric_limits<double>::infinity(); }

private:
    double ref_ = -std::numeric_limits<double>::infinity();
    KahanSum scaled_;
};

/// Number of worker threads used by parallel sections. Defaults to the
/// POLYMERLAB_THREADS environment variable, else hardware concurrency.
std::size_t worker_count();
void set_worker_count(std::size_t n);

/// Runs body(i) for i in [0, tasks). Results must be written to per-index
/// slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t tasks, const std::function<void(std::size_t)>& body);

}  // namespace polymerlab
