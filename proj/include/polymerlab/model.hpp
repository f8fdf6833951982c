#pragma once

#include <string>

#include "polymerlab/hamiltonian.hpp"

namespace polymerlab {

enum class ModelKind { domb_joyce, saw, attraction, strip };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& name);

/// Which path weight is applied on top of the free walk.
///
/// domb_joyce: exp(-beta H); saw: 1{H = 0}; attraction: exp(-(beta - gamma) H - (gamma/2) G);
/// strip: the strip self-avoidance probability with half-width strip_L.
struct ModelSpec {
    ModelKind kind = ModelKind::domb_joyce;
    double beta = 0.0;
    double gamma = 0.0;
    int strip_L = 0;

    static ModelSpec domb_joyce(double beta) { return {ModelKind::domb_joyce, beta, 0.0, 0}; }
    static ModelSpec saw() { return {ModelKind::saw, 0.0, 0.0, 0}; }
    static ModelSpec attraction(double beta, double gamma) { return {ModelKind::attraction, beta, gamma, 0}; }
    static ModelSpec strip(int L) { return {ModelKind::strip, 0.0, 0.0, L}; }

    /// Throws ConfigError on invalid or collapsed-phase parameters.
    void validate() const;

    /// True when every path weight is 1 (free walk).
    bool is_free() const { return kind == ModelKind::domb_joyce && beta == 0.0; }

    /// Strip half-width a PathState must track for this model (0 when unused).
    int state_strip_L() const { return kind == ModelKind::strip ? strip_L : 0; }

    /// log of the full path weight; -inf for weight zero.
    double log_weight(const PathState& state) const;
    double log_weight(const EnergyState& e) const;

    /// log weight change when the path in `state` moves to x_new.
    double step_log_factor(const PathState& state, long x_new) const;

    std::string describe() const;
};

}  // namespace polymerlab
