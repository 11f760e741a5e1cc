#ifndef NUTAXIS_INTEGRATOR_HPP
#define NUTAXIS_INTEGRATOR_HPP

#include "nutaxis/grid.hpp"
#include "nutaxis/model.hpp"
#include "nutaxis/spatial_ops.hpp"
#include "nutaxis/state.hpp"

#include <functional>
#include <limits>
#include <span>
#include <string>

namespace nutaxis {

enum class TimeScheme { sbdf1, sbdf2 };

struct StepperConfig {
    double dt = 1e-3;                 ///< largest step the controller will take
    double dt_min = 1e-12;
    double cfl_safety = 0.5;
    double reaction_safety = 0.05;    ///< bound on α‖w‖∞·dt and δ‖w‖∞·dt
    double positivity_floor = 1e-300; ///< u must stay above this; w must stay ≥ 0
    int max_retries = 40;
    int min_steps_per_segment = 4;
    TimeScheme scheme = TimeScheme::sbdf2;
    FluxScheme flux = FluxScheme::upwind;

    void validate() const;

    friend bool operator==(const StepperConfig&, const StepperConfig&) = default;
};

/// Previous accepted state and explicit term for the two-step method. Only valid
/// for continuation with the same dt.
struct History {
    bool valid = false;
    double dt = 0.0;
    Field u;
    Field v;
    Field w;
    Field explicit_u;  ///< N(u, w) at the stored level
};

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    long restarts = 0;  ///< SBDF1 steps taken to (re)build history
    long w_fallbacks = 0;
    double min_dt = std::numeric_limits<double>::infinity();
    double max_dt = 0.0;
};

struct StepResult {
    State state;
    History history;
    double dt = 0.0;  ///< step actually taken (may be a halving of the request)
    int retries = 0;
    bool first_order = false;
    bool w_fallback = false;
};

/// Explicit part of the u equation: chemotaxis divergence + δ F_ε(u) w.
Field explicit_u_term(const State& s, const ModelParams& params, const Grid& grid, FluxScheme flux);

/// One IMEX step of size `dt` (SBDF2 when the history matches dt, else SBDF1).
/// Rejected attempts are retried with dt halved, at most cfg.max_retries times and
/// never below cfg.dt_min; exhausting either throws PositivityViolation.
StepResult step(const State& state, const History& history, const ModelParams& params,
                const Grid& grid, const StepperConfig& cfg, double dt);

/// Largest stable step for the explicit chemotaxis flux:
/// cfl_safety · min_faces h_eff / (χ |∇w|), h_eff = min(m_L, m_R)/a (h on intervals).
/// Returns cfg.dt when there is no drift.
double cfl_dt(const State& state, const ModelParams& params, const Grid& grid, const StepperConfig& cfg);

/// Step bound from the explicit growth terms: reaction_safety / (max(δ, α) ‖w‖∞).
double reaction_dt(const State& state, const ModelParams& params, const StepperConfig& cfg);

using Observer = std::function<void(const State&)>;

/// Owns one trajectory. The BDF2 history survives across advance calls as long as
/// the planned step size does not change.
class Integrator {
public:
    Integrator(Grid grid, ModelParams params, StepperConfig cfg, State initial);

    const State& state() const { return state_; }
    const Grid& grid() const { return grid_; }
    const ModelParams& params() const { return params_; }
    const StepperConfig& config() const { return cfg_; }
    const StepStats& stats() const { return stats_; }
    const History& history() const { return history_; }

    /// Advance exactly to t_end. Within the interval the step is constant, chosen
    /// as min(cfg.dt, cfl_dt, reaction_dt, length / min_steps) and shrunk so an
    /// integer number of steps fits; it is re-planned (downwards) when the limits
    /// tighten or a step is rejected.
    void advance_to(double t_end);

    /// Advance through each time of `schedule` (increasing, > current t), calling
    /// `observer` after reaching each one.
    void advance(std::span<const double> schedule, const Observer& observer);

private:
    double step_limit() const;

    Grid grid_;
    ModelParams params_;
    StepperConfig cfg_;
    State state_;
    History history_;
    StepStats stats_;
};

/// Free-function form: integrate `state` to t_end, observing at t_end only.
State advance(const State& state, const Grid& grid, const ModelParams& params, const StepperConfig& cfg,
              double t_end, const Observer& observer = {});

std::string to_string(TimeScheme s);
TimeScheme time_scheme_from_string(const std::string& s);
std::string to_string(FluxScheme s);
FluxScheme flux_scheme_from_string(const std::string& s);

}  // namespace nutaxis

#endif  // NUTAXIS_INTEGRATOR_HPP
