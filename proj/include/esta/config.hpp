#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "esta/dynamics.hpp"
#include "esta/units.hpp"

namespace esta {

struct ConfigError : std::runtime_error {
    std::string key;
    ConfigError(std::string key_, const std::string& what)
        : std::runtime_error(what), key(std::move(key_)) {}
};

struct SweepConfig {
    PhysicalParams physical;

    // trajectory names: q0_1 q0_2 q0_3 Q_1 Q_2 Q_3
    std::vector<std::string> trajectories = {"q0_1", "q0_2", "q0_3", "Q_1", "Q_2", "Q_3"};
    double tf_min = 0.8;
    double tf_max = 1.45;
    double tf_step = 0.05;

    std::vector<std::string> error_kinds = {"correlated", "amplitude", "wavenumber"};
    std::vector<std::string> noise_kinds = {"position", "amplitude"};
    double delta_min = 0.0;
    double delta_max = 0.0;
    double delta_step = 0.02;
    double f_reference = 0.9;
    std::string target_convention = "perturbed";

    Numerics numerics;

    int basis_size = 8;  // L
    int n_modes = 4;     // N
    int samples = 1000;  // trajectory export resolution
    int epsilon_family = 1;
    double epsilon_tf = 0.8;

    std::string out_dir = ".";
    int workers = 0;  // 0 = hardware concurrency
    unsigned long seed = 12345;
    bool svg = false;
};

// flat key = value text file; '#' starts a comment. Unknown keys and
// malformed values raise ConfigError naming the key.
SweepConfig parse_config_file(const std::string& path);
void apply_config_line(SweepConfig& cfg, const std::string& key, const std::string& value);
void validate(const SweepConfig& cfg);

std::vector<double> tf_grid(const SweepConfig& cfg);
std::vector<double> delta_grid(const SweepConfig& cfg);

// deterministic CSV emission: "# schema=1" first line, fixed %.12g floats
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& header);
    void row(const std::vector<std::string>& cells);
    static std::string num(double v);
    static std::string num(int v);

private:
    std::string path_;
    std::string buffer_;

public:
    ~CsvWriter();
};

// bounded worker pool; fn(i) runs for i in [0, total); exceptions are
// collected and rethrown (first one) after all workers drain
void parallel_for(int total, int workers, const std::function<void(int)>& fn);

struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series);

}  // namespace esta
