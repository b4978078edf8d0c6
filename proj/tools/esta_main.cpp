#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "esta/sweep.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::string error_kind;
    std::string noise_kind;
    int workers = -1;
    long seed = -1;
    bool svg = false;
    double f_reference = -1.0;
    std::vector<double> delta_range;  // min max step
    double tf_min = -1.0, tf_max = -1.0, tf_step = -1.0;
    int samples = -1;
    int family = -1;
    double tf = -1.0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "flat key=value config file");
    cmd->add_option("--out-dir", o.out_dir, "output directory for CSV/SVG files");
    cmd->add_option("--workers", o.workers, "worker thread count (0 = hardware)");
    cmd->add_option("--seed", o.seed, "RNG seed recorded with the run");
    cmd->add_flag("--svg", o.svg, "emit SVG renderings next to the CSVs");
    cmd->add_option("--error-kind", o.error_kind, "correlated | amplitude | wavenumber");
    cmd->add_option("--noise-kind", o.noise_kind, "position | amplitude");
    cmd->add_option("--f-reference", o.f_reference, "reference fidelity F_R");
    cmd->add_option("--delta-range", o.delta_range, "delta grid: min max step")->expected(3);
    cmd->add_option("--tf-min", o.tf_min, "first t_f/tau");
    cmd->add_option("--tf-max", o.tf_max, "last t_f/tau");
    cmd->add_option("--tf-step", o.tf_step, "t_f/tau grid step");
    cmd->add_option("--samples", o.samples, "trajectory export sample count");
    cmd->add_option("--family", o.family, "trajectory family 1..3");
    cmd->add_option("--tf", o.tf, "t_f/tau for single-trajectory commands");
}

esta::SweepConfig build_config(const CommonOpts& o) {
    esta::SweepConfig cfg;
    if (!o.config_path.empty()) cfg = esta::parse_config_file(o.config_path);
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (o.workers >= 0) cfg.workers = o.workers;
    if (o.seed >= 0) cfg.seed = static_cast<unsigned long>(o.seed);
    if (o.svg) cfg.svg = true;
    if (!o.error_kind.empty()) cfg.error_kinds = {o.error_kind};
    if (!o.noise_kind.empty()) cfg.noise_kinds = {o.noise_kind};
    if (o.f_reference > 0.0) cfg.f_reference = o.f_reference;
    if (o.delta_range.size() == 3) {
        cfg.delta_min = o.delta_range[0];
        cfg.delta_max = o.delta_range[1];
        cfg.delta_step = o.delta_range[2];
    }
    if (o.tf_min > 0.0) cfg.tf_min = o.tf_min;
    if (o.tf_max > 0.0) cfg.tf_max = o.tf_max;
    if (o.tf_step > 0.0) cfg.tf_step = o.tf_step;
    if (o.samples > 0) cfg.samples = o.samples;
    if (o.family > 0) cfg.epsilon_family = o.family;
    if (o.tf > 0.0) cfg.epsilon_tf = o.tf;
    esta::validate(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eSTA lattice-transport toolkit: trajectory design, transport simulation,"
                 " robustness and noise sweeps"};
    app.require_subcommand(1);

    CommonOpts opts;
    const char* names[] = {"units", "trajectory", "epsilon", "fidelity",
                           "robustness", "noise", "deviation"};
    const char* descs[] = {"print the derived natural units",
                           "export q_c, q_0 and Q samples per family",
                           "export the eSTA correction and G_n values",
                           "fidelity sweep over t_f (and optionally delta)",
                           "systematic-error sensitivity and bound sweep",
                           "white-noise sensitivity and bound sweep",
                           "control-function deviation C_Q sweep"};
    for (int i = 0; i < 7; ++i) {
        add_common(app.add_subcommand(names[i], descs[i]), opts);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        esta::SweepConfig cfg = build_config(opts);
        if (app.got_subcommand("units")) return esta::cmd_units(cfg, std::cout);
        if (app.got_subcommand("trajectory")) return esta::cmd_trajectory(cfg);
        if (app.got_subcommand("epsilon")) return esta::cmd_epsilon(cfg);
        if (app.got_subcommand("fidelity")) return esta::cmd_fidelity(cfg);
        if (app.got_subcommand("robustness")) return esta::cmd_robustness(cfg);
        if (app.got_subcommand("noise")) return esta::cmd_noise(cfg);
        if (app.got_subcommand("deviation")) return esta::cmd_deviation(cfg);
        return 2;
    } catch (const esta::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
