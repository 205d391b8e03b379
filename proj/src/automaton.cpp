#include "lacircle/automaton.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_set>

#include "lacircle/errors.hpp"

namespace lacircle {

namespace {

using RoundedKey = std::tuple<long long, long long, long long>;

struct RoundedKeyHash {
    std::size_t operator()(const RoundedKey& k) const noexcept {
        auto h = static_cast<std::uint64_t>(std::get<0>(k));
        h = mix_seed(h ^ static_cast<std::uint64_t>(std::get<1>(k)));
        h = mix_seed(h ^ static_cast<std::uint64_t>(std::get<2>(k)));
        return static_cast<std::size_t>(h);
    }
};

std::uint64_t choose3(std::uint64_t n) {
    if (n < 3) return 0;
    return n * (n - 1) / 2 * (n - 2) / 3;
}

class ActionCollector {
public:
    ActionCollector(std::span<const Point> points, const ActionSetConfig& cfg, int width,
                    int height)
        : points_(points), cfg_(cfg), width_(width), height_(height) {}

    void offer(std::size_t i, std::size_t j, std::size_t k) {
        ++examined_;
        CandidateCircle c;
        try {
            c = circle_from_triplet(points_, i, j, k);
        } catch (const CollinearPoints&) {
            return;
        }
        if (c.circle.r < cfg_.r_min || c.circle.r > cfg_.r_max) return;

        RoundedKey key{round_pixel(c.circle.x0), round_pixel(c.circle.y0),
                       round_pixel(c.circle.r)};
        if (seen_.contains(key)) return;

        try {
            const auto perimeter = rasterize_circle(c.circle, width_, height_);
            if (perimeter.clipped_fraction() > cfg_.max_clip_fraction) return;
        } catch (const EmptyPerimeter&) {
            return;
        }
        seen_.insert(key);
        actions_.push_back(c);
    }

    [[nodiscard]] bool full() const noexcept { return actions_.size() >= cfg_.cap; }
    [[nodiscard]] std::size_t examined() const noexcept { return examined_; }
    [[nodiscard]] std::vector<CandidateCircle> take() { return std::move(actions_); }

private:
    std::span<const Point> points_;
    const ActionSetConfig& cfg_;
    int width_;
    int height_;
    std::size_t examined_ = 0;
    std::unordered_set<RoundedKey, RoundedKeyHash> seen_;
    std::vector<CandidateCircle> actions_;
};

}  // namespace

ActionSet build_action_set(const SampledPoints& pts, const ActionSetConfig& cfg, int width,
                           int height, Rng& rng) {
    if (pts.count() < 3) {
        throw TooFewEdgePoints("need at least 3 sampled points, got " +
                               std::to_string(pts.count()));
    }
    if (!(cfg.r_min >= 1.0) || !(cfg.r_max > cfg.r_min)) {
        throw std::invalid_argument("build_action_set: need 1 <= r_min < r_max");
    }
    if (cfg.cap < 1) {
        throw std::invalid_argument("build_action_set: cap must be >= 1");
    }
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("build_action_set: bounds must be positive");
    }

    const std::uint64_t n = pts.count();
    const std::uint64_t total = choose3(n);
    ActionCollector collector(pts.points, cfg, width, height);

    if (total <= cfg.cap) {
        for (std::size_t i = 0; i + 2 < n && !collector.full(); ++i) {
            for (std::size_t j = i + 1; j + 1 < n && !collector.full(); ++j) {
                for (std::size_t k = j + 1; k < n && !collector.full(); ++k) {
                    collector.offer(i, j, k);
                }
            }
        }
    } else {
        // Each draw is three distinct indices; sorted triplets already tried
        // are redrawn. The draw budget bounds runs where most triplets fail.
        const std::uint64_t budget = std::max<std::uint64_t>(64 * cfg.cap, 1u << 16);
        std::unordered_set<std::uint64_t> tried;
        std::uint64_t draws = 0;
        while (!collector.full() && tried.size() < total && draws < budget) {
            ++draws;
            std::array<std::uint64_t, 3> t{uniform_below(rng, n), uniform_below(rng, n - 1),
                                           uniform_below(rng, n - 2)};
            // Map the 2nd and 3rd draws onto the remaining indices.
            if (t[1] >= t[0]) ++t[1];
            const auto lo = std::min(t[0], t[1]);
            const auto hi = std::max(t[0], t[1]);
            if (t[2] >= lo) ++t[2];
            if (t[2] >= hi) ++t[2];
            std::sort(t.begin(), t.end());
            const std::uint64_t key = (t[0] * n + t[1]) * n + t[2];
            if (!tried.insert(key).second) continue;
            collector.offer(t[0], t[1], t[2]);
        }
    }

    ActionSet set;
    set.triplets_examined = collector.examined();
    set.actions = collector.take();
    set.width = width;
    set.height = height;
    set.r_min = cfg.r_min;
    set.r_max = cfg.r_max;
    if (set.actions.empty()) {
        throw NoFeasibleActions("no feasible candidate circle among " +
                                std::to_string(set.triplets_examined) + " triplets");
    }
    return set;
}

double reinforcement(const Circle& c, const EdgeMap& edges) {
    const auto perimeter = rasterize_circle(c, edges.width(), edges.height());
    std::size_t hits = 0;
    for (const Point& p : perimeter.points) {
        hits += edges.is_edge(p.x, p.y) ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(perimeter.count());
}

ProbabilityVector ProbabilityVector::uniform(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("ProbabilityVector: need at least one action");
    }
    ProbabilityVector pv;
    pv.p.assign(n, 1.0 / static_cast<double>(n));
    return pv;
}

std::size_t ProbabilityVector::argmax() const {
    if (p.empty()) throw std::logic_error("argmax of empty probability vector");
    return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

double ProbabilityVector::max() const { return p[argmax()]; }

void lri_update_in_place(std::span<double> p, std::size_t selected, double beta, double theta) {
    if (selected >= p.size()) {
        throw std::out_of_range("lri_update: selected action out of range");
    }
    const double step = theta * beta;
    if (step == 0.0) return;

    double sum = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (j == selected) {
            p[j] += step * (1.0 - p[j]);
        } else {
            p[j] -= step * p[j];
        }
        p[j] = std::clamp(p[j], 0.0, 1.0);
        sum += p[j];
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
        for (double& v : p) v /= sum;
    }
}

ProbabilityVector lri_update(const ProbabilityVector& pv, std::size_t selected, double beta,
                             double theta) {
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw std::invalid_argument("lri_update: beta must lie in [0, 1]");
    }
    if (!(theta > 0.0 && theta < 1.0)) {
        throw std::invalid_argument("lri_update: theta must lie in (0, 1)");
    }
    ProbabilityVector out = pv;
    lri_update_in_place(out.p, selected, beta, theta);
    ++out.iteration;
    return out;
}

std::size_t select_action(std::span<const double> p, double z) {
    if (p.empty()) {
        throw std::invalid_argument("select_action: empty distribution");
    }
    double cumulative = 0.0;
    for (std::size_t v = 0; v < p.size(); ++v) {
        cumulative += p[v];
        if (cumulative > z) return v;
    }
    // Rounding left the total a hair below z: take the last action with mass.
    for (std::size_t v = p.size(); v-- > 0;) {
        if (p[v] > 0.0) return v;
    }
    return p.size() - 1;
}

void validate(const LearningConfig& cfg) {
    if (!(cfg.theta > 0.0 && cfg.theta < 1.0)) {
        throw std::invalid_argument("theta must lie in (0, 1)");
    }
    if (!(cfg.p_stop > 0.0 && cfg.p_stop <= 1.0)) {
        throw std::invalid_argument("p_stop must lie in (0, 1]");
    }
    if (cfg.beta_min_solution && !(*cfg.beta_min_solution >= 0.0 && *cfg.beta_min_solution <= 1.0)) {
        throw std::invalid_argument("beta_min_solution must lie in [0, 1]");
    }
}

const char* to_string(StopReason reason) noexcept {
    switch (reason) {
        case StopReason::kIterationBudget: return "iteration_budget";
        case StopReason::kProbabilityThreshold: return "probability_threshold";
        case StopReason::kSolutionFound: return "solution_found";
    }
    return "unknown";
}

std::size_t iteration_budget(std::size_t n_actions, const LearningConfig& cfg) {
    return std::min(cfg.k_max.value_or(n_actions / 2), cfg.k_cap);
}

std::vector<double> evaluate_actions(const ActionSet& actions, const EdgeMap& edges) {
    std::vector<double> betas;
    betas.reserve(actions.size());
    for (const auto& a : actions.actions) {
        betas.push_back(reinforcement(a.circle, edges));
    }
    return betas;
}

LearningOutcome run_learning(const ActionSet& actions, const EdgeMap& edges,
                             const LearningConfig& cfg, Rng& rng) {
    validate(cfg);
    if (actions.size() == 0) {
        throw std::invalid_argument("run_learning: empty action set");
    }

    LearningOutcome out;
    out.betas = evaluate_actions(actions, edges);
    out.probabilities = ProbabilityVector::uniform(actions.size());
    out.budget = iteration_budget(actions.size(), cfg);

    auto& pv = out.probabilities;
    while (true) {
        if (pv.max() >= cfg.p_stop) {
            out.stop = StopReason::kProbabilityThreshold;
            break;
        }
        if (pv.iteration >= out.budget) {
            out.stop = StopReason::kIterationBudget;
            break;
        }
        const double z = uniform01(rng);
        const std::size_t v = select_action(pv.p, z);
        const double beta = out.betas[v];
        lri_update_in_place(pv.p, v, beta, cfg.theta);
        ++pv.iteration;
        if (cfg.beta_min_solution && beta >= *cfg.beta_min_solution) {
            out.stop = StopReason::kSolutionFound;
            out.solution = v;
            break;
        }
    }
    out.iterations = pv.iteration;
    return out;
}

LearningOutcome run_learning(const ActionSet& actions, const EdgeMap& edges,
                             const LearningConfig& cfg) {
    Rng rng(cfg.seed);
    return run_learning(actions, edges, cfg, rng);
}

}  // namespace lacircle
