#include "dradp/domains/pendulum.hpp"

#include <array>
#include <stdexcept>

namespace dradp::pendulum {

double action_force(Index action) {
    switch (action) {
    case 0: return -50.0;
    case 1: return 0.0;
    case 2: return 50.0;
    default: throw std::invalid_argument("pendulum action must be 0, 1 or 2");
    }
}

StepResult step(const State& state, Index action, double noise) {
    const double u = action_force(action) + noise;
    const double a = 1.0 / (kPoleMass + kCartMass);
    const double th = state.theta;
    const double w = state.omega;
    const double accel =
        (kGravity * std::sin(th) - a * kPoleMass * kLength * w * w * std::sin(2.0 * th) / 2.0 - a * std::cos(th) * u) /
        (4.0 * kLength / 3.0 - a * kPoleMass * kLength * std::cos(th) * std::cos(th));
    StepResult r;
    r.next.theta = th + kDt * w;
    r.next.omega = w + kDt * accel;
    r.terminal = std::abs(r.next.theta) > M_PI / 2.0;
    r.reward = r.terminal ? -1.0 : 0.0;
    return r;
}

StepResult step(const State& state, Index action, Rng& rng) { return step(state, action, rng.uniform(-kNoise, kNoise)); }

State initial_state(Rng& rng) {
    State s;
    s.theta = rng.uniform(-kInitialSpread, kInitialSpread);
    s.omega = rng.uniform(-kInitialSpread, kInitialSpread);
    return s;
}

VectorXd features(const State& state) {
    static constexpr std::array<double, 3> kAngles{-M_PI / 4.0, 0.0, M_PI / 4.0};
    static constexpr std::array<double, 3> kVelocities{-1.0, 0.0, 1.0};
    VectorXd phi(kFeatures);
    phi(0) = 1.0;
    Index j = 1;
    for (double ct : kAngles)
        for (double cw : kVelocities) {
            const double dt = state.theta - ct;
            const double dw = state.omega - cw;
            phi(j++) = std::exp(-(dt * dt + dw * dw) / 2.0);
        }
    return phi;
}

SampleSet collect_samples(const CollectOptions& options, std::uint64_t seed) {
    if (options.n_episodes < 0 || options.max_len < 0)
        throw std::invalid_argument("episode count and length must be nonnegative");
    Rng rng(seed);
    SampleSet out;
    out.n_actions = kActions;
    out.n_features = kFeatures;
    out.seed = seed;
    for (long ep = 0; ep < options.n_episodes; ++ep) {
        State s = initial_state(rng);
        out.initial_features.push_back(features(s));
        long index = 0;
        for (long t = 0; t < options.max_len; ++t) {
            const auto behavior = static_cast<Index>(rng.index(kActions));
            const VectorXd phi = features(s);
            StepResult taken;
            for (Index a = 0; a < kActions; ++a) {
                if (!options.expand_actions && a != behavior)
                    continue;
                const StepResult r = step(s, a, rng);
                out.transitions.push_back({ep, index++, phi, a, r.reward, r.terminal ? VectorXd() : features(r.next),
                                           r.terminal});
                if (a == behavior)
                    taken = r;
            }
            if (taken.terminal)
                break;
            s = taken.next;
        }
    }
    return out;
}

double mean_balancing_steps(const Controller& controller, long episodes, std::uint64_t seed) {
    if (episodes < 1)
        throw std::invalid_argument("evaluation needs at least one episode");
    Rng rng(seed);
    double total = 0.0;
    for (long ep = 0; ep < episodes; ++ep) {
        State s = initial_state(rng);
        long steps = 0;
        while (steps < kEvaluationCap) {
            const StepResult r = step(s, controller(s), rng);
            if (r.terminal)
                break;
            ++steps;
            s = r.next;
        }
        total += static_cast<double>(steps);
    }
    return total / static_cast<double>(episodes);
}

Index greedy_action(const State& state, const VectorXd& weights, double gamma) {
    static constexpr std::array<double, 4> kNoisePoints{-7.5, -2.5, 2.5, 7.5};
    Index best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (Index a = 0; a < kActions; ++a) {
        double q = 0.0;
        for (double noise : kNoisePoints) {
            const StepResult r = step(state, a, noise);
            q += r.reward + (r.terminal ? 0.0 : gamma * features(r.next).dot(weights));
        }
        q /= static_cast<double>(kNoisePoints.size());
        if (q > best_value + 1e-12) {
            best_value = q;
            best = a;
        }
    }
    return best;
}

} // namespace dradp::pendulum
