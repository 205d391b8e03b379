#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lacircle/edges.hpp"
#include "lacircle/geometry.hpp"
#include "lacircle/random.hpp"

namespace lacircle {

struct ActionSetConfig {
    double r_min = 40.0;
    double r_max = 150.0;
    std::size_t cap = 1000;
    double max_clip_fraction = 0.5;
};

/// The automaton's actions: deduplicated candidate circles that passed the
/// radius, clipping and collinearity filters.
struct ActionSet {
    std::vector<CandidateCircle> actions;
    int width = 0;
    int height = 0;
    double r_min = 0.0;
    double r_max = 0.0;
    /// Triplets examined while building the set (n_all when enumeration is exhaustive).
    std::size_t triplets_examined = 0;

    [[nodiscard]] std::size_t size() const noexcept { return actions.size(); }
};

/// Builds the action set. When C(N_p, 3) <= cap every triplet is enumerated in
/// lexicographic order; otherwise distinct triplets are drawn uniformly without
/// replacement until cap actions survive or the draw budget runs out.
/// Duplicates share (round(x0), round(y0), round(r)); the first one wins.
/// Throws NoFeasibleActions.
[[nodiscard]] ActionSet build_action_set(const SampledPoints& pts, const ActionSetConfig& cfg,
                                         int width, int height, Rng& rng);

/// Fraction of the candidate's in-bounds perimeter pixels that are edges.
[[nodiscard]] double reinforcement(const Circle& c, const EdgeMap& edges);

/// Action-probability vector p(k).
struct ProbabilityVector {
    std::vector<double> p;
    std::size_t iteration = 0;

    [[nodiscard]] static ProbabilityVector uniform(std::size_t n);
    [[nodiscard]] std::size_t size() const noexcept { return p.size(); }
    [[nodiscard]] std::size_t argmax() const;
    [[nodiscard]] double max() const;
};

/// Tolerance on |sum(p) - 1| beyond which the vector is renormalized.
inline constexpr double kSimplexTolerance = 1e-9;

/// Linear reward-inaction step in place:
///   p_i += theta * beta * (1 - p_i),  p_j -= theta * beta * p_j  (j != i).
void lri_update_in_place(std::span<double> p, std::size_t selected, double beta, double theta);

/// Value form of the update; also advances the iteration counter.
[[nodiscard]] ProbabilityVector lri_update(const ProbabilityVector& pv, std::size_t selected,
                                           double beta, double theta);

/// Smallest index v with sum_{i<=v} p_i > z.
[[nodiscard]] std::size_t select_action(std::span<const double> p, double z);

struct LearningConfig {
    double theta = 0.001;
    /// Explicit iteration budget; defaults to n_c / 2 when unset.
    std::optional<std::size_t> k_max;
    /// Absolute ceiling applied on top of k_max.
    std::size_t k_cap = 5000;
    double p_stop = 0.2;
    /// Stop as soon as an evaluated action reaches this beta.
    std::optional<double> beta_min_solution;
    std::uint64_t seed = 0;
};

/// Throws std::invalid_argument for out-of-range fields.
void validate(const LearningConfig& cfg);

enum class StopReason { kIterationBudget, kProbabilityThreshold, kSolutionFound };

[[nodiscard]] const char* to_string(StopReason reason) noexcept;

struct LearningOutcome {
    ProbabilityVector probabilities;
    /// beta per action, aligned with ActionSet::actions.
    std::vector<double> betas;
    std::size_t iterations = 0;
    std::size_t budget = 0;
    StopReason stop = StopReason::kIterationBudget;
    std::optional<std::size_t> solution;
};

/// Iteration budget actually used: min(k_max or n_c/2, k_cap).
[[nodiscard]] std::size_t iteration_budget(std::size_t n_actions, const LearningConfig& cfg);

/// beta for every action, computed once up front.
[[nodiscard]] std::vector<double> evaluate_actions(const ActionSet& actions, const EdgeMap& edges);

/// Runs the automaton: uniform start, then select / reward / update until the
/// budget is spent, max(p) >= p_stop, or a solution-quality action is drawn.
[[nodiscard]] LearningOutcome run_learning(const ActionSet& actions, const EdgeMap& edges,
                                           const LearningConfig& cfg, Rng& rng);
/// Seeds its own generator from cfg.seed.
[[nodiscard]] LearningOutcome run_learning(const ActionSet& actions, const EdgeMap& edges,
                                           const LearningConfig& cfg);

}  // namespace lacircle
