#include "boundrat/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace boundrat {

StrippedHistory strip_modifications(HistoryView h) {
    StrippedHistory out;
    out.reserve(h.size());
    for (const Step& s : h) out.push_back({s.action.world, s.percept});
    return out;
}

std::string stripped_key(HistoryView h) {
    std::string key;
    key.reserve(h.size() * 8);
    auto put = [&key](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) key.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    for (const Step& s : h) {
        put(s.action.world.id);
        put(s.percept.id);
    }
    return key;
}

double clamp_full_support(double p) { return std::clamp(p, kClampLow, kClampHigh); }

Belief::Belief(std::size_t percept_count, Kernel kernel, bool modification_independent)
    : percept_count_(percept_count),
      kernel_(std::move(kernel)),
      modification_independent_(modification_independent) {
    if (percept_count_ == 0) throw ModelError("belief over an empty percept set");
}

PerceptDistribution Belief::operator()(HistoryView h, const Action& a) const {
    PerceptDistribution p = kernel_(h, a);
    if (p.size() != percept_count_)
        throw ModelError("belief returned " + std::to_string(p.size()) + " entries, expected " +
                         std::to_string(percept_count_));
    double sum = 0.0;
    for (double x : p) {
        if (!(x >= kMinProbability)) throw ModelError("belief violates full support");
        sum += x;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw ModelError("belief does not sum to one (sum " + std::to_string(sum) + ")");
    return p;
}

UtilityFunction::UtilityFunction(Eval eval, bool modification_independent,
                                 std::optional<std::size_t> support_horizon)
    : eval_(std::move(eval)),
      modification_independent_(modification_independent),
      support_horizon_(support_horizon) {}

double UtilityFunction::operator()(HistoryView h) const {
    if (support_horizon_ && h.size() > *support_horizon_) return 0.0;
    double v = eval_(h);
    if (!(v >= 0.0 && v <= 1.0)) throw ModelError("utility outside [0, 1]");
    return v;
}

Knowledge::Knowledge(UtilityFunction utility_, Belief belief_, double discount_, std::string id_)
    : utility(std::move(utility_)), belief(std::move(belief_)), discount(discount_), id(std::move(id_)) {
    if (!(discount > 0.0 && discount < 1.0)) throw ModelError("discount outside (0, 1)");
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw ModelError("tv_distance: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

}  // namespace boundrat
