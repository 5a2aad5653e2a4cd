#include "dzeta/deficiency.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <type_traits>

#include "dzeta/error.hpp"

namespace dzeta {

namespace {

std::string fmt(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

Exponent checked_base(double p, double q) {
    if (!std::isfinite(p) || !std::isfinite(q) || !(p > 1.0) || !(q > p)) {
        throw ValidationError("requires q > p > 1 (got p=" + fmt(p) + ", q=" + fmt(q) + ")");
    }
    return Exponent(p);
}

void require_table(const SeriesTable& table, Exponent expected, std::size_t n, const char* role) {
    if (!(table.exponent() == expected)) {
        throw ValidationError(std::string(role) + " table exponent " + fmt(table.exponent().value()) +
                              " does not match " + fmt(expected.value()));
    }
    if (n == 0 || n > table.n_max()) {
        throw ValidationError("n=" + std::to_string(n) + " outside " + role + " table range [1, " +
                              std::to_string(table.n_max()) + "]");
    }
}

}  // namespace

ExponentPair::ExponentPair(double p, double q) : p_(checked_base(p, q)), q_(q) {}

DeficiencySeries::DeficiencySeries(ExponentPair pair, std::vector<DoubleDouble> values,
                                   std::vector<DoubleDouble> increments)
    : pair_(pair), values_(std::move(values)), increments_(std::move(increments)) {
    if (values_.size() != increments_.size()) {
        throw ValidationError("deficiency values and increments differ in length");
    }
}

const DoubleDouble& DeficiencySeries::at(std::size_t n) const {
    if (n == 0 || n > values_.size()) {
        throw ValidationError("n=" + std::to_string(n) + " outside deficiency range [1, " +
                              std::to_string(values_.size()) + "]");
    }
    return values_[n - 1];
}

const DoubleDouble& DeficiencySeries::increment(std::size_t n) const {
    (void)at(n);
    return increments_[n - 1];
}

DoubleDouble deficiency_direct(const ExponentPair& pair, const SeriesTable& base_table,
                               const SeriesTable& target_table, std::size_t n) {
    require_table(base_table, pair.base(), n, "base");
    require_table(target_table, pair.target(), n, "target");
    return pow(base_table.at(n), pair.ratio()) - target_table.at(n);
}

DeficiencySeries deficiency_incremental(const ExponentPair& pair, const SeriesTable& base_table,
                                        std::size_t n_max) {
    require_table(base_table, pair.base(), n_max, "base");
    std::vector<DoubleDouble> values;
    std::vector<DoubleDouble> increments;
    const double q = pair.q();
    detail::accumulate_deficiency(
        base_table.values().first(n_max), pair.ratio(),
        [q](std::size_t k) { return inverse_power(static_cast<double>(k), q); }, values, increments);
    return DeficiencySeries(pair, std::move(values), std::move(increments));
}

EstimatorKind parse_estimator(const std::string& token) {
    if (token == "trunc") return Truncation{};
    if (token == "a") return DeficiencyA{};
    if (token == "b") return DeficiencyB{};
    if (token == "b2") return DeficiencyB2{};
    if (token.rfind("em:", 0) == 0) {
        const std::string digits = token.substr(3);
        int order = -1;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), order);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty() || order < 0) {
            throw ValidationError("invalid Euler-Maclaurin order in '" + token + "'");
        }
        if (2 * order > kBernoulliCap) {
            throw ValidationError("Euler-Maclaurin order " + digits + " exceeds the Bernoulli cap");
        }
        return EulerMaclaurin{order};
    }
    throw ValidationError("unknown estimator '" + token + "' (expected trunc, a, b, b2 or em:<M>)");
}

std::string estimator_name(const EstimatorKind& kind) {
    return std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Truncation>) return "trunc";
            else if constexpr (std::is_same_v<K, DeficiencyA>) return "a";
            else if constexpr (std::is_same_v<K, DeficiencyB>) return "b";
            else if constexpr (std::is_same_v<K, DeficiencyB2>) return "b2";
            else return "em:" + std::to_string(k.correction_order);
        },
        kind);
}

bool needs_base(const EstimatorKind& kind) {
    return std::holds_alternative<DeficiencyA>(kind) || std::holds_alternative<DeficiencyB>(kind) ||
           std::holds_alternative<DeficiencyB2>(kind);
}

std::size_t min_n(const EstimatorKind& kind) {
    return std::holds_alternative<EulerMaclaurin>(kind) ? 2 : 1;
}

EstimatorContext::EstimatorContext(Exponent target, std::optional<Exponent> base, std::size_t n_max,
                                   const ReferenceConfig& reference)
    : target_table_(target, n_max) {
    if (base) {
        pair_.emplace(base->value(), target.value());
        base_table_.emplace(*base, n_max);
        deficiency_.emplace(deficiency_incremental(*pair_, *base_table_, n_max));
        base_zeta_ = reference_zeta(*base, reference);
    }
}

EstimatorContext::EstimatorContext(const ExponentPair& pair, std::size_t n_max,
                                   const ReferenceConfig& reference)
    : EstimatorContext(pair.target(), pair.base(), n_max, reference) {}

const ExponentPair& EstimatorContext::pair() const {
    if (!pair_) throw ValidationError("estimator requires a base exponent p");
    return *pair_;
}

const SeriesTable& EstimatorContext::base_table() const {
    (void)pair();
    return *base_table_;
}

const DeficiencySeries& EstimatorContext::deficiency() const {
    (void)pair();
    return *deficiency_;
}

const DoubleDouble& EstimatorContext::base_zeta() const {
    (void)pair();
    return base_zeta_;
}

DoubleDouble estimate(const EstimatorKind& kind, const EstimatorContext& context, std::size_t n) {
    if (n == 0 || n > context.n_max()) {
        throw ValidationError("n=" + std::to_string(n) + " outside estimator range [1, " +
                              std::to_string(context.n_max()) + "]");
    }
    if (std::holds_alternative<Truncation>(kind)) return context.target_table().at(n);
    if (const auto* em = std::get_if<EulerMaclaurin>(&kind)) {
        return euler_maclaurin_from_prefix(context.target(), n, context.target_table().at(n),
                                           em->correction_order);
    }

    const int order = std::holds_alternative<DeficiencyA>(kind) ? 0
                      : std::holds_alternative<DeficiencyB>(kind) ? 1
                                                                  : 2;
    return detail::corrected_estimate(order, context.base_zeta(), context.pair().ratio(),
                                      context.deficiency().at(n), context.base_table().at(n));
}

DoubleDouble detail::corrected_estimate(int order, const DoubleDouble& zeta_p, double ratio,
                                        const DoubleDouble& deficiency,
                                        const DoubleDouble& base_prefix) {
    const DoubleDouble powered = pow(zeta_p, ratio);
    const DoubleDouble a_n = powered - deficiency;
    if (order == 0) return a_n;

    // (q/p) zeta_p^{q/p-1} t_n = powered * (q/p) * (t_n / zeta_p)
    const DoubleDouble u = (zeta_p - base_prefix) / zeta_p;
    const DoubleDouble b_n = a_n - powered * u * ratio;
    if (order == 1) return b_n;

    return b_n + powered * square(u) * (0.5 * ratio * (ratio - 1.0));
}

DoubleDouble algebraic_form_a(const EstimatorContext& context, std::size_t n) {
    const ExponentPair& pair = context.pair();
    const DoubleDouble& s_n = context.base_table().at(n);
    const DoubleDouble correction = pow(context.base_zeta(), pair.ratio()) - pow(s_n, pair.ratio());
    return context.target_table().at(n) + correction;
}

double predicted_rate(const ExponentPair& pair) {
    return std::min(2.0 * pair.p() - 2.0, pair.q() - 1.0);
}

double estimator_rate(const EstimatorKind& kind, double q, std::optional<double> p) {
    if (std::holds_alternative<Truncation>(kind)) return q - 1.0;
    if (const auto* em = std::get_if<EulerMaclaurin>(&kind)) return q + 2.0 * em->correction_order + 1.0;
    if (!p) throw ValidationError("estimator '" + estimator_name(kind) + "' requires a base exponent p");
    if (std::holds_alternative<DeficiencyA>(kind)) return std::min(*p - 1.0, q - 1.0);
    if (std::holds_alternative<DeficiencyB>(kind)) return std::min(2.0 * *p - 2.0, q - 1.0);
    return std::min(3.0 * *p - 3.0, q - 1.0);
}

double balancing_threshold(double q) {
    if (!std::isfinite(q) || !(q > 2.0)) {
        throw ValidationError("balancing threshold requires q > 2 (got q=" + fmt(q) + ")");
    }
    return (q + 1.0) / 2.0;
}

bool in_optimal_region(const ExponentPair& pair) {
    return pair.q() > 2.0 && pair.p() >= balancing_threshold(pair.q());
}

Exponent recommended_base(double q, BaseStrategy strategy) {
    if (strategy == BaseStrategy::Universal) {
        if (!(q > 2.0)) throw ValidationError("universal base p=2 requires q > 2");
        return Exponent(2.0);
    }
    if (!std::isfinite(q) || q != std::floor(q) || q < 3.0 || std::fmod(q, 2.0) != 1.0) {
        throw ValidationError("explicit-even base requires an odd integer q >= 3 (got q=" + fmt(q) + ")");
    }
    return Exponent(q - 1.0);
}

}  // namespace dzeta
