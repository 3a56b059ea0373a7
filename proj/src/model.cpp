#include "ofdma/model.hpp"
#include "ofdma/report.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ofdma {

namespace {

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

std::string join(const std::vector<std::string>& items)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < items.size(); ++i)
        os << (i ? "; " : "") << items[i];
    return os.str();
}

void require_same_shape(const SystemInstance& instance, const Allocation& alloc)
{
    if (alloc.powers.rows() != instance.num_receivers || alloc.powers.cols() != instance.num_subcarriers
        || instance.gains.rows() != instance.num_receivers
        || instance.gains.cols() != instance.num_subcarriers
        || instance.noises.rows() != instance.num_receivers
        || instance.noises.cols() != instance.num_subcarriers) {
        std::ostringstream os;
        os << "allocation is " << alloc.powers.rows() << "x" << alloc.powers.cols() << ", instance is "
           << instance.num_receivers << "x" << instance.num_subcarriers;
        throw DimensionError(os.str());
    }
}

} // namespace

std::string_view to_string(Utility kind) noexcept
{
    switch (kind) {
    case Utility::H1: return "h1";
    case Utility::H2: return "h2";
    case Utility::H3: return "h3";
    case Utility::H4: return "h4";
    }
    return "?";
}

std::string_view to_string(Problem problem) noexcept
{
    return problem == Problem::MinPower ? "min_power" : "max_utility";
}

std::string_view to_string(SolveStatus status) noexcept
{
    switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::IterLimit: return "iter_limit";
    }
    return "?";
}

std::vector<std::size_t> Assignment::subcarriers_of(std::size_t k) const
{
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n < serving_receiver.size(); ++n)
        if (serving_receiver[n] == k)
            out.push_back(n);
    return out;
}

double SystemInstance::max_cap() const noexcept
{
    return subcarrier_caps.empty() ? 0.0 : *std::max_element(subcarrier_caps.begin(), subcarrier_caps.end());
}

double Allocation::total_power() const noexcept
{
    CompensatedSum sum;
    for (double p : powers.values())
        sum.add(p);
    return sum.value();
}

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::invalid_argument(join(problems)), problems_(std::move(problems))
{
}

double rate_bits(double snr) noexcept
{
    if (snr <= 0.0)
        return 0.0;
    // When 1 + snr is exact, log2 keeps integer rates exact (2^a - 1 gains).
    const double shifted = 1.0 + snr;
    if (shifted - 1.0 == snr)
        return std::log2(shifted);
    return std::log1p(snr) * kInvLn2;
}

RateVector compute_rates(const SystemInstance& instance, const Allocation& alloc)
{
    require_same_shape(instance, alloc);
    RateVector rates(instance.num_receivers, 0.0);
    for (std::size_t k = 0; k < instance.num_receivers; ++k) {
        double r = 0.0;
        for (std::size_t n = 0; n < instance.num_subcarriers; ++n) {
            const double p = alloc.powers(k, n);
            const double g = instance.gains(k, n);
            if (p > 0.0 && g > 0.0)
                r += rate_bits(g * p / instance.noises(k, n));
        }
        rates[k] = r;
    }
    return rates;
}

ConstraintReport check_allocation(const SystemInstance& instance, const Allocation& alloc, double tol)
{
    require_same_shape(instance, alloc);
    const std::size_t K = instance.num_receivers;
    const std::size_t N = instance.num_subcarriers;

    ConstraintReport report;
    report.ofdma_ok = true;
    report.caps_ok = true;
    for (std::size_t n = 0; n < N; ++n) {
        int active = 0;
        for (std::size_t k = 0; k < K; ++k) {
            const double p = alloc.powers(k, n);
            if (p > tol)
                ++active;
            if (p < -tol || p > instance.subcarrier_caps[n] + tol)
                report.caps_ok = false;
        }
        if (active > 1)
            report.ofdma_ok = false;
    }

    report.total_power = alloc.total_power();

    report.qos_ok = true;
    if (instance.rate_targets) {
        const RateVector rates = compute_rates(instance, alloc);
        for (std::size_t k = 0; k < K; ++k)
            if (rates[k] < (*instance.rate_targets)[k] - tol)
                report.qos_ok = false;
    }
    report.budget_ok = !instance.total_budget || report.total_power <= *instance.total_budget + tol;
    return report;
}

double default_tolerance(const SystemInstance& instance) noexcept
{
    return 1e-12 * instance.max_cap();
}

double utility(std::span<const double> rates, Utility kind)
{
    if (rates.empty())
        throw std::invalid_argument("utility of an empty rate vector");
    for (double r : rates)
        if (!(r >= 0.0))
            throw std::invalid_argument("rates must be nonnegative");

    const double K = static_cast<double>(rates.size());
    const bool any_zero = std::any_of(rates.begin(), rates.end(), [](double r) { return r == 0.0; });

    switch (kind) {
    case Utility::H1: {
        CompensatedSum sum;
        for (double r : rates)
            sum.add(r);
        return sum.value() / K;
    }
    case Utility::H2: {
        if (any_zero)
            return 0.0;
        CompensatedSum logs;
        for (double r : rates)
            logs.add(std::log(r));
        return std::exp(logs.value() / K);
    }
    case Utility::H3: {
        if (any_zero)
            return 0.0;
        CompensatedSum inv;
        for (double r : rates)
            inv.add(1.0 / r);
        return K / inv.value();
    }
    case Utility::H4:
        return *std::min_element(rates.begin(), rates.end());
    }
    return 0.0;
}

std::vector<std::string> validate_instance(const SystemInstance& instance, Problem problem)
{
    std::vector<std::string> errors;
    const std::size_t K = instance.num_receivers;
    const std::size_t N = instance.num_subcarriers;

    if (K == 0)
        errors.emplace_back("num_receivers must be positive");
    if (N == 0)
        errors.emplace_back("num_subcarriers must be positive");
    if (N < K)
        errors.emplace_back("num_subcarriers must be at least num_receivers");

    const bool gains_shape = instance.gains.rows() == K && instance.gains.cols() == N;
    const bool noises_shape = instance.noises.rows() == K && instance.noises.cols() == N;
    if (!gains_shape)
        errors.emplace_back("gains must be a K x N matrix");
    if (!noises_shape)
        errors.emplace_back("noises must be a K x N matrix");
    if (gains_shape) {
        const auto g = instance.gains.values();
        if (std::any_of(g.begin(), g.end(), [](double v) { return !(v >= 0.0) || std::isinf(v); }))
            errors.emplace_back("gain must be nonnegative and finite");
    }
    if (noises_shape) {
        const auto e = instance.noises.values();
        if (std::any_of(e.begin(), e.end(), [](double v) { return !(v > 0.0) || std::isinf(v); }))
            errors.emplace_back("noise must be positive");
    }

    if (instance.subcarrier_caps.size() != N)
        errors.emplace_back("subcarrier_caps must have length N");
    if (std::any_of(instance.subcarrier_caps.begin(), instance.subcarrier_caps.end(),
                    [](double v) { return !(v > 0.0) || std::isinf(v); }))
        errors.emplace_back("subcarrier cap must be positive");

    if (instance.total_budget && !(*instance.total_budget > 0.0 && std::isfinite(*instance.total_budget)))
        errors.emplace_back("total_budget must be positive");
    if (instance.rate_targets) {
        const auto& t = *instance.rate_targets;
        if (t.size() != K)
            errors.emplace_back("rate_targets must have length K");
        if (std::any_of(t.begin(), t.end(), [](double v) { return !(v > 0.0) || std::isinf(v); }))
            errors.emplace_back("rate target must be positive");
    }

    if (problem == Problem::MinPower && !instance.rate_targets)
        errors.emplace_back("rate_targets required");
    if (problem == Problem::MaxUtility && !instance.total_budget)
        errors.emplace_back("total_budget required");
    return errors;
}

void require_valid(const SystemInstance& instance, Problem problem)
{
    auto errors = validate_instance(instance, problem);
    if (!errors.empty())
        throw ValidationError(std::move(errors));
}

} // namespace ofdma
