#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace polymerlab {

enum class Family { simple, uniform_range, geometric_tail, custom };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

/// Probability mass function of a single step, restricted to a finite support.
///
/// Steps are kept sorted ascending. Mean and variance are computed once from the
/// (possibly truncated and renormalized) pmf so that every downstream scaling
/// uses the same sigma.
class StepDistribution {
public:
    StepDistribution(Family family, int parameter, std::vector<int> steps, std::vector<double> probs);

    Family family() const { return family_; }
    /// L for the parameterized families, 0 for custom.
    int parameter() const { return parameter_; }

    const std::vector<int>& steps() const { return steps_; }
    const std::vector<double>& probs() const { return probs_; }
    const std::vector<double>& log_probs() const { return log_probs_; }
    std::size_t size() const { return steps_.size(); }

    double mean() const { return mean_; }
    double variance() const { return variance_; }
    double sigma() const;
    int max_step() const;

    /// P(S_1 = x); zero off the support.
    double pmf(int x) const;

    std::string describe() const;

private:
    Family family_;
    int parameter_;
    std::vector<int> steps_;
    std::vector<double> probs_;
    std::vector<double> log_probs_;
    double mean_ = 0.0;
    double variance_ = 0.0;
};

/// Tail mass below which the geometric family is cut off.
inline constexpr double kGeometricTailCutoff = 1e-15;

StepDistribution make_distribution(Family family, int L = 1);
StepDistribution make_custom(const std::map<int, double>& pmf);

/// phi(t) = sum_x P(S_1 = x) e^{itx}.
std::complex<double> char_fn(const StepDistribution& dist, double t);

/// Exact law of S_k on the integers, indexed from min_value.
struct LatticePmf {
    long min_value = 0;
    std::vector<double> mass;

    double at(long x) const;
    long max_value() const { return min_value + static_cast<long>(mass.size()) - 1; }
    double total() const;
};

/// Default cap on the support size of a convolution result.
inline constexpr std::size_t kConvolutionSupportCap = 50'000'000;

LatticePmf step_law_convolution(const StepDistribution& dist, int k,
                                std::size_t support_cap = kConvolutionSupportCap);

/// Convolves `law` with one more step.
LatticePmf convolve_step(const LatticePmf& law, const StepDistribution& dist);

struct ConditionReport {
    int L = 0;
    double sigma = 0.0;
    double truncated_second_moment = 0.0;  // E((S/s)^2 ; |S/s| > N)
    double max_pmf_scaled = 0.0;           // s^{2/3} max_x P(S = x)
    double min_scaled_pmf = 0.0;           // min_{0<|x|<=c1 s} s P(S = x)
    double exp_moment = 0.0;               // E exp(eps |S| / s)
};

ConditionReport check_condition(const StepDistribution& dist, double c1, double N, double eps);

std::vector<ConditionReport> check_conditions(Family family, const std::vector<int>& Ls, double c1,
                                              double N, double eps);

}  // namespace polymerlab
