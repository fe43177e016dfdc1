#include "statmech/dynamics.hpp"

#include "statmech/error.hpp"
#include "statmech/numerics.hpp"

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace statmech::dynamics {

using numerics::kInf;

namespace {

using Index = Eigen::Index;

void check_distribution(const std::vector<double>& p, std::size_t n, const char* what)
{
    if (p.size() != n) {
        throw ShapeError(std::string(what) + ": expected " + std::to_string(n) + " probabilities, got " +
                         std::to_string(p.size()));
    }
    double total = 0.0;
    for (double x : p) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw NormalizationError(std::string(what) + ": probabilities must be finite and non-negative");
        }
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw NormalizationError(std::string(what) + ": probabilities sum to " + std::to_string(total));
    }
}

Eigen::RowVectorXd as_row(const std::vector<double>& p)
{
    return Eigen::Map<const Eigen::RowVectorXd>(p.data(), static_cast<Index>(p.size()));
}

std::vector<double> as_vector(const Eigen::RowVectorXd& p)
{
    return {p.data(), p.data() + p.size()};
}

void renormalize(std::vector<double>& p)
{
    double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) {
        x /= total;
    }
}

bool is_integer_time(double t)
{
    return t >= 0.0 && std::floor(t) == t;
}

void check_times(const std::vector<double>& times, ChainMode mode)
{
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || !std::isfinite(times[i])) {
            throw DomainError("evolve: times must be finite and non-negative");
        }
        if (i > 0 && times[i] < times[i - 1]) {
            throw DomainError("evolve: times must be non-decreasing");
        }
        if (mode == ChainMode::Discrete && !is_integer_time(times[i])) {
            throw DomainError("evolve: discrete chains advance in whole steps");
        }
    }
}

// Tracks the expected direction of a sequence and its worst violation.
void judge(MonitorResult& result, bool decreasing)
{
    for (std::size_t i = 1; i < result.values.size(); ++i) {
        double prev = result.values[i - 1];
        double cur = result.values[i];
        double violation = 0.0;
        if (std::isinf(prev) && ((prev > 0) == decreasing)) {
            continue;
        }
        if (std::isinf(cur) && ((cur > 0) == decreasing)) {
            violation = kInf;
        } else {
            violation = decreasing ? cur - prev : prev - cur;
        }
        result.worstViolation = std::max(result.worstViolation, violation);
    }
    result.monotone = result.worstViolation <= kMonotoneSlack;
}

// lim_{x -> inf} V(x) / x for a concave V, which weighs pairs the joint law never visits.
double recession_slope(const std::function<double(double)>& concave)
{
    double near = concave(1e100) / 1e100;
    double far = concave(1e200) / 1e200;
    if (far < near - 1e-6 * std::max(1.0, std::abs(near))) {
        return -kInf;
    }
    return far;
}

} // namespace

std::string to_string(ChainMode mode)
{
    return mode == ChainMode::Discrete ? "discrete" : "continuous";
}

ChainMode chain_mode_from_string(const std::string& text)
{
    if (text == "discrete") {
        return ChainMode::Discrete;
    }
    if (text == "continuous") {
        return ChainMode::Continuous;
    }
    throw DomainError("unknown chain mode '" + text + "' (expected discrete or continuous)");
}

void ChainSpec::validate() const
{
    const std::size_t n = size();
    if (n == 0 || matrix.rows() != matrix.cols()) {
        throw ShapeError("ChainSpec: matrix must be square and non-empty");
    }
    if (!states.empty() && states.size() != n) {
        throw ShapeError("ChainSpec: " + std::to_string(states.size()) + " labels for " + std::to_string(n) +
                         " states");
    }
    for (std::size_t r = 0; r < n; ++r) {
        double rowSum = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            double w = weight(r, s);
            if (!std::isfinite(w)) {
                throw DomainError("ChainSpec: matrix entries must be finite");
            }
            if (r != s && w < 0.0) {
                throw DomainError("ChainSpec: negative transition weight " + std::to_string(r) + " -> " +
                                  std::to_string(s));
            }
            rowSum += w;
        }
        if (mode == ChainMode::Discrete) {
            if (weight(r, r) < 0.0) {
                throw DomainError("ChainSpec: negative holding probability in row " + std::to_string(r));
            }
            if (std::abs(rowSum - 1.0) > 1e-12) {
                throw NormalizationError("ChainSpec: row " + std::to_string(r) + " sums to " + std::to_string(rowSum));
            }
        }
    }
    if (stationary) {
        check_distribution(*stationary, n, "ChainSpec stationary");
        double residual = global_balance_residual(*this, *stationary);
        if (residual > 1e-10) {
            throw DomainError("ChainSpec: declared stationary distribution violates global balance by " +
                              std::to_string(residual));
        }
    }
}

Eigen::MatrixXd ChainSpec::generator() const
{
    Eigen::MatrixXd q = matrix;
    const Index n = q.rows();
    if (mode == ChainMode::Discrete) {
        q -= Eigen::MatrixXd::Identity(n, n);
        return q;
    }
    for (Index r = 0; r < n; ++r) {
        q(r, r) = 0.0;
        q(r, r) = -q.row(r).sum();
    }
    return q;
}

Eigen::MatrixXd ChainSpec::propagator(double time) const
{
    const Index n = matrix.rows();
    if (mode == ChainMode::Continuous) {
        Eigen::MatrixXd scaled = generator() * time;
        return scaled.exp();
    }
    if (!is_integer_time(time)) {
        throw DomainError("propagator: discrete chains advance in whole steps");
    }
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd base = matrix;
    for (auto k = static_cast<unsigned long long>(time); k > 0; k >>= 1) {
        if (k & 1ULL) {
            result = result * base;
        }
        base = base * base;
    }
    return result;
}

ChainSpec ChainSpec::from_matrix(ChainMode mode, Eigen::MatrixXd matrix)
{
    ChainSpec chain;
    chain.mode = mode;
    chain.matrix = std::move(matrix);
    for (Index i = 0; i < chain.matrix.rows(); ++i) {
        chain.states.push_back(std::to_string(i));
    }
    return chain;
}

ChainSpec mm1_chain(double arrival, double service, std::size_t states)
{
    if (!(arrival > 0.0) || !(service > 0.0)) {
        throw DomainError("mm1_chain: rates must be positive");
    }
    if (states < 2) {
        throw SizeError("mm1_chain: at least two levels are required");
    }
    const auto n = static_cast<Index>(states);
    Eigen::MatrixXd rates = Eigen::MatrixXd::Zero(n, n);
    for (Index r = 0; r + 1 < n; ++r) {
        rates(r, r + 1) = arrival;
        rates(r + 1, r) = service;
    }
    return ChainSpec::from_matrix(ChainMode::Continuous, std::move(rates));
}

std::vector<double> mm1_geometric(double arrival, double service, std::size_t states)
{
    const double rho = arrival / service;
    std::vector<double> p(states);
    double term = 1.0 - rho;
    for (auto& x : p) {
        x = term;
        term *= rho;
    }
    renormalize(p);
    return p;
}

Trajectory evolve(const ChainSpec& chain, const std::vector<double>& initial, const std::vector<double>& times)
{
    chain.validate();
    const std::size_t n = chain.size();
    check_distribution(initial, n, "evolve initial");
    check_times(times, chain.mode);

    Trajectory out;
    out.times = times;
    if (times.empty()) {
        return out;
    }

    if (chain.mode == ChainMode::Discrete) {
        Eigen::RowVectorXd p = as_row(initial);
        double now = 0.0;
        for (double t : times) {
            for (; now < t; now += 1.0) {
                p = p * chain.matrix;
            }
            out.distributions.push_back(as_vector(p));
            renormalize(out.distributions.back());
        }
        return out;
    }

    namespace ode = boost::numeric::odeint;
    using State = std::vector<double>;
    const Eigen::MatrixXd q = chain.generator();
    auto rhs = [&](const State& p, State& dpdt, double) {
        Eigen::Map<const Eigen::RowVectorXd> pv(p.data(), static_cast<Index>(n));
        Eigen::Map<Eigen::RowVectorXd> dv(dpdt.data(), static_cast<Index>(n));
        dv.noalias() = pv * q;
    };
    // integrate_times starts at the first listed time, so anchor the list at t = 0.
    std::vector<double> grid;
    grid.reserve(times.size() + 1);
    grid.push_back(0.0);
    grid.insert(grid.end(), times.begin(), times.end());
    double rateScale = std::max(1.0, q.cwiseAbs().maxCoeff());
    State state = initial;
    std::size_t seen = 0;
    auto observer = [&](const State& p, double) {
        if (seen++ == 0) {
            return;
        }
        out.distributions.push_back(p);
    };
    try {
        auto stepper = ode::make_controlled(1e-10, 1e-10, ode::runge_kutta_dopri5<State>());
        ode::integrate_times(stepper, rhs, state, grid.begin(), grid.end(), 0.01 / rateScale, observer);
    } catch (const std::exception& e) {
        throw ConvergenceError(std::string("evolve: step size control failed: ") + e.what());
    }
    for (std::size_t i = 0; i < out.distributions.size(); ++i) {
        auto& p = out.distributions[i];
        double drift = std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0);
        if (drift > 1e-8 * std::max(1.0, times[i])) {
            throw ConvergenceError("evolve: normalization drifted by " + std::to_string(drift));
        }
        for (auto& x : p) {
            x = std::max(x, 0.0);
        }
        renormalize(p);
    }
    return out;
}

std::vector<double> stationary_distribution(const ChainSpec& chain)
{
    chain.validate();
    const auto n = static_cast<Index>(chain.size());
    Eigen::MatrixXd a = chain.generator().transpose();
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) {
        throw ConvergenceError("stationary_distribution: the chain has more than one closed class");
    }
    Eigen::VectorXd p = lu.solve(b);
    std::vector<double> out(p.data(), p.data() + n);
    for (auto& x : out) {
        x = std::max(x, 0.0);
    }
    renormalize(out);
    return out;
}

double global_balance_residual(const ChainSpec& chain, const std::vector<double>& distribution)
{
    const std::size_t n = chain.size();
    check_distribution(distribution, n, "global balance");
    double worst = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double flux = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            if (s != r) {
                flux += distribution[s] * chain.weight(s, r) - distribution[r] * chain.weight(r, s);
            }
        }
        worst = std::max(worst, std::abs(flux));
    }
    return worst;
}

BalanceCheck detailed_balance_check(const ChainSpec& chain, const std::vector<double>& distribution)
{
    const std::size_t n = chain.size();
    check_distribution(distribution, n, "detailed balance");
    BalanceCheck out;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = r + 1; s < n; ++s) {
            double gap = std::abs(distribution[s] * chain.weight(s, r) - distribution[r] * chain.weight(r, s));
            out.maxViolation = std::max(out.maxViolation, gap);
        }
    }
    out.holds = out.maxViolation < 1e-10;
    return out;
}

CycleCheck kolmogorov_cycle_check(const ChainSpec& chain, std::size_t maxLength)
{
    chain.validate();
    const std::size_t n = chain.size();
    if (n > 12) {
        throw SizeError("kolmogorov_cycle_check: cycle enumeration is limited to 12 states");
    }
    if (maxLength < 3) {
        throw DomainError("kolmogorov_cycle_check: cycles have length at least 3");
    }
    constexpr double tolerance = 1e-9;
    CycleCheck out;
    auto record = [&](const std::vector<std::size_t>& cycle, double gap) {
        ++out.cyclesChecked;
        if (gap > out.worstLogRatio) {
            out.worstLogRatio = gap;
            out.worstCycle = cycle;
        }
    };
    auto logw = [&](std::size_t r, std::size_t s) {
        double w = chain.weight(r, s);
        return w > 0.0 ? std::log(w) : -kInf;
    };
    // one-way edges break reversibility outright
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = r + 1; s < n; ++s) {
            if ((chain.weight(r, s) > 0.0) != (chain.weight(s, r) > 0.0)) {
                record({r, s}, kInf);
            }
        }
    }
    // Each simple cycle is visited once: it starts at its smallest state and its
    // second state is smaller than its last.
    std::vector<std::size_t> path;
    std::vector<bool> used(n, false);
    auto close = [&](double forward, double backward) {
        std::size_t first = path.front();
        std::size_t last = path.back();
        if (chain.weight(last, first) <= 0.0 || path[1] > last) {
            return;
        }
        double f = forward + logw(last, first);
        double b = backward + logw(first, last);
        double gap = std::isinf(f) && std::isinf(b) ? 0.0 : std::abs(f - b);
        record(path, gap);
    };
    std::function<void(double, double)> extend = [&](double forward, double backward) {
        if (path.size() >= 3) {
            close(forward, backward);
        }
        if (path.size() == maxLength) {
            return;
        }
        std::size_t tail = path.back();
        for (std::size_t next = path.front() + 1; next < n; ++next) {
            if (used[next] || chain.weight(tail, next) <= 0.0) {
                continue;
            }
            used[next] = true;
            path.push_back(next);
            extend(forward + logw(tail, next), backward + logw(next, tail));
            path.pop_back();
            used[next] = false;
        }
    };
    for (std::size_t start = 0; start < n; ++start) {
        path.assign(1, start);
        used.assign(n, false);
        used[start] = true;
        extend(0.0, 0.0);
    }
    out.holds = out.worstLogRatio <= tolerance;
    return out;
}

double shannon_entropy(const std::vector<double>& p)
{
    double h = 0.0;
    for (double x : p) {
        h -= numerics::xlogx(x);
    }
    return h;
}

double relative_entropy(const std::vector<double>& p, const std::vector<double>& q)
{
    if (p.size() != q.size()) {
        throw ShapeError("relative_entropy: distributions differ in size");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) {
            continue;
        }
        if (q[i] == 0.0) {
            return kInf;
        }
        d += p[i] * std::log(p[i] / q[i]);
    }
    return std::max(d, 0.0);
}

MonitorResult monotone_monitor(const Trajectory& trajectory, const Functional& functional,
                               const std::optional<std::vector<double>>& stationary)
{
    MonitorResult out;
    out.times = trajectory.times;
    if (functional.kind == FunctionalKind::Entropy) {
        if (stationary) {
            const double uniform = 1.0 / static_cast<double>(stationary->size());
            for (double x : *stationary) {
                if (std::abs(x - uniform) > 1e-12) {
                    throw DomainError("monotone_monitor: entropy is monotone only toward a uniform stationary law");
                }
            }
        }
        for (const auto& p : trajectory.distributions) {
            out.values.push_back(shannon_entropy(p));
        }
        judge(out, false);
        return out;
    }
    if (!stationary) {
        throw DomainError("monotone_monitor: this functional needs the stationary distribution");
    }
    const auto& pi = *stationary;
    if (functional.kind == FunctionalKind::SMoment && !(functional.s > 0.0 && functional.s < 1.0)) {
        throw DomainError("monotone_monitor: the s-moment needs 0 < s < 1");
    }
    if (functional.kind == FunctionalKind::Custom && !functional.concave) {
        throw DomainError("monotone_monitor: a custom functional needs a concave function");
    }
    for (const auto& p : trajectory.distributions) {
        if (p.size() != pi.size()) {
            throw ShapeError("monotone_monitor: trajectory and stationary law differ in size");
        }
        double value = 0.0;
        switch (functional.kind) {
        case FunctionalKind::Divergence:
            value = relative_entropy(p, pi);
            break;
        case FunctionalKind::ReverseDivergence:
            value = relative_entropy(pi, p);
            break;
        case FunctionalKind::SMoment:
            for (std::size_t r = 0; r < p.size(); ++r) {
                value += std::pow(pi[r], 1.0 - functional.s) * std::pow(p[r], functional.s);
            }
            break;
        case FunctionalKind::Custom:
            for (std::size_t r = 0; r < p.size(); ++r) {
                if (pi[r] > 0.0) {
                    value += pi[r] * functional.concave(p[r] / pi[r]);
                }
            }
            break;
        case FunctionalKind::Entropy:
            break;
        }
        out.values.push_back(value);
    }
    judge(out, functional.decreasing());
    return out;
}

MonitorResult divergence_pair_monitor(const ChainSpec& chain, const std::vector<double>& first,
                                      const std::vector<double>& second, const std::vector<double>& times)
{
    auto a = evolve(chain, first, times);
    auto b = evolve(chain, second, times);
    MonitorResult out;
    out.times = times;
    for (std::size_t i = 0; i < times.size(); ++i) {
        out.values.push_back(relative_entropy(a.distributions[i], b.distributions[i]));
    }
    judge(out, true);
    return out;
}

MonitorResult ziv_zakai_monitor(const ChainSpec& chain, const std::vector<double>& initial,
                                const std::function<double(double)>& concave, const std::vector<double>& times)
{
    chain.validate();
    const std::size_t n = chain.size();
    check_distribution(initial, n, "ziv_zakai_monitor initial");
    check_times(times, chain.mode);
    MonitorResult out;
    out.times = times;
    const double slope = recession_slope(concave);
    for (double t : times) {
        Eigen::MatrixXd kernel = chain.propagator(t);
        std::vector<double> marginal(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                marginal[j] += initial[i] * std::max(0.0, kernel(static_cast<Index>(i), static_cast<Index>(j)));
            }
        }
        double value = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double joint = initial[i] * std::max(0.0, kernel(static_cast<Index>(i), static_cast<Index>(j)));
                double product = initial[i] * marginal[j];
                if (joint > 0.0) {
                    value += joint * concave(product / joint);
                } else if (product > 0.0 && slope != 0.0) {
                    value += product * slope;
                }
            }
        }
        out.values.push_back(value);
    }
    judge(out, false);
    return out;
}

} // namespace statmech::dynamics
