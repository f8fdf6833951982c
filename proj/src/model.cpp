#include "polymerlab/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "polymerlab/errors.hpp"

namespace polymerlab {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::domb_joyce: return "domb_joyce";
        case ModelKind::saw: return "saw";
        case ModelKind::attraction: return "attraction";
        case ModelKind::strip: return "strip";
    }
    return "domb_joyce";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "domb_joyce" || name == "dj") return ModelKind::domb_joyce;
    if (name == "saw") return ModelKind::saw;
    if (name == "attraction") return ModelKind::attraction;
    if (name == "strip") return ModelKind::strip;
    throw ConfigError("unknown model '" + name + "'");
}

void ModelSpec::validate() const {
    switch (kind) {
        case ModelKind::domb_joyce:
            if (!(beta >= 0.0) || !std::isfinite(beta))
                throw ConfigError("Domb-Joyce needs a finite beta >= 0 (use the saw model for beta = inf)");
            break;
        case ModelKind::saw: break;
        case ModelKind::attraction:
            if (!std::isfinite(beta) || !(gamma >= 0.0) || !(beta > gamma))
                throw ConfigError("attraction requires beta > gamma >= 0 (gamma >= beta is the collapsed phase)");
            break;
        case ModelKind::strip:
            if (strip_L < 1) throw ConfigError("strip model requires L >= 1");
            break;
    }
}

double ModelSpec::log_weight(const EnergyState& e) const {
    switch (kind) {
        case ModelKind::domb_joyce: return -beta * static_cast<double>(e.H);
        case ModelKind::saw: return e.H == 0 ? 0.0 : kNegInf;
        case ModelKind::attraction:
            return -((beta - gamma) * static_cast<double>(e.H) + 0.5 * gamma * static_cast<double>(e.G));
        case ModelKind::strip: break;
    }
    throw InvariantError("strip weight needs local times, not only the energy state");
}

double ModelSpec::log_weight(const PathState& state) const {
    if (kind == ModelKind::strip) {
        if (state.strip_L() != strip_L) throw InvariantError("path state does not track this strip width");
        return state.strip_log_weight();
    }
    return log_weight(state.energy());
}

double ModelSpec::step_log_factor(const PathState& state, long x_new) const {
    switch (kind) {
        case ModelKind::domb_joyce:
            if (beta == 0.0) return 0.0;
            return -beta * 2.0 * static_cast<double>(state.local_time(x_new));
        case ModelKind::saw: return state.local_time(x_new) == 0 ? 0.0 : kNegInf;
        case ModelKind::attraction: {
            const auto d = state.preview(x_new);
            return -((beta - gamma) * static_cast<double>(d.dH) + 0.5 * gamma * static_cast<double>(d.dG));
        }
        case ModelKind::strip: return strip_log_factor(state.local_time(x_new), strip_L);
    }
    return 0.0;
}

std::string ModelSpec::describe() const {
    std::ostringstream os;
    os << to_string(kind);
    switch (kind) {
        case ModelKind::domb_joyce: os << "(beta=" << beta << ")"; break;
        case ModelKind::saw: break;
        case ModelKind::attraction: os << "(beta=" << beta << ", gamma=" << gamma << ")"; break;
        case ModelKind::strip: os << "(L=" << strip_L << ")"; break;
    }
    return os.str();
}

}  // namespace polymerlab
