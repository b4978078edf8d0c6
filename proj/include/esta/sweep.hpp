#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>

#include "esta/config.hpp"
#include "esta/correction.hpp"
#include "esta/noise.hpp"
#include "esta/robustness.hpp"

namespace esta {

TrajectoryFamily family_of(const std::string& trajectory_name);
bool is_esta(const std::string& trajectory_name);

// Shared caches for one sweep run: trajectories per (name, t_f), ground
// states per (error kind, delta, center role), transport fidelities per
// task tuple. All methods are safe to call from the worker pool.
class SweepContext {
public:
    explicit SweepContext(const SweepConfig& cfg);

    const SweepConfig& config() const { return cfg_; }
    const DimensionlessParams& units() const { return units_; }
    const Grid& grid() const { return grid_; }
    const Numerics& numerics() const { return cfg_.numerics; }

    std::shared_ptr<const ControlFunction> trajectory(const std::string& name, double tf);
    std::shared_ptr<const Wavefunction> station_state(ErrorKind kind, double delta, double center);
    void prewarm_states(ErrorKind kind, double delta);

    double fidelity(const std::string& name, double tf, ErrorKind kind, double delta);
    double sensitivity(const std::string& name, double tf, ErrorKind kind, double h = 1e-3);

private:
    SweepConfig cfg_;
    DimensionlessParams units_;
    Grid grid_;
    std::mutex traj_mutex_;
    std::map<std::string, std::shared_ptr<const ControlFunction>> traj_;
    std::mutex state_mutex_;
    std::map<std::string, std::shared_ptr<const Wavefunction>> states_;
    std::mutex fid_mutex_;
    std::map<std::string, double> fidelities_;
};

int cmd_units(const SweepConfig& cfg, std::ostream& out);
int cmd_trajectory(const SweepConfig& cfg);
int cmd_epsilon(const SweepConfig& cfg);
int cmd_fidelity(const SweepConfig& cfg);
int cmd_robustness(const SweepConfig& cfg);
int cmd_noise(const SweepConfig& cfg);
int cmd_deviation(const SweepConfig& cfg);

}  // namespace esta
