#include "esta/sweep.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <stdexcept>
#include <vector>

#include "esta/deviation.hpp"

namespace esta {

namespace {

ErrorKind error_kind_of(const std::string& s) {
    if (s == "correlated") return ErrorKind::correlated;
    if (s == "amplitude") return ErrorKind::amplitude;
    if (s == "wavenumber") return ErrorKind::wavenumber;
    throw std::invalid_argument("unknown error kind: " + s);
}

NoiseKind noise_kind_of(const std::string& s) {
    if (s == "position") return NoiseKind::position;
    if (s == "amplitude") return NoiseKind::amplitude;
    throw std::invalid_argument("unknown noise kind: " + s);
}

std::string out_path(const SweepConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

std::string key_of(const std::string& name, double tf, int kind, double delta) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s|%.9f|%d|%.9f", name.c_str(), tf, kind, delta);
    return buf;
}

}  // namespace

TrajectoryFamily family_of(const std::string& name) {
    char last = name.empty() ? '?' : name.back();
    switch (last) {
        case '1': return TrajectoryFamily::poly;
        case '2': return TrajectoryFamily::quasi_opt;
        case '3': return TrajectoryFamily::classical;
    }
    throw std::invalid_argument("unknown trajectory name: " + name);
}

bool is_esta(const std::string& name) { return !name.empty() && name[0] == 'Q'; }

SweepContext::SweepContext(const SweepConfig& cfg)
    : cfg_(cfg),
      units_(nondimensionalize(cfg.physical)),
      grid_(make_transport_grid(nondimensionalize(cfg.physical).d, cfg.numerics.grid_pad_sigma,
                                cfg.numerics.grid_points)) {}

std::shared_ptr<const ControlFunction> SweepContext::trajectory(const std::string& name,
                                                                double tf) {
    const std::string key = key_of(name, tf, 0, 0.0);
    {
        std::lock_guard<std::mutex> lock(traj_mutex_);
        auto it = traj_.find(key);
        if (it != traj_.end()) return it->second;
    }
    std::shared_ptr<const ControlFunction> built;
    TrajectoryFamily fam = family_of(name);
    if (is_esta(name)) {
        EstaTrajectory t = build_esta_trajectory(fam, tf, units_, cfg_.basis_size, cfg_.n_modes);
        built = std::make_shared<const ControlFunction>(std::move(t.Q));
    } else {
        ControlFunction qc = make_smoothed_qc(fam, units_.d, tf);
        built = std::make_shared<const ControlFunction>(invert_q0(qc, units_.omega0));
    }
    std::lock_guard<std::mutex> lock(traj_mutex_);
    auto [it, inserted] = traj_.emplace(key, built);
    return it->second;
}

std::shared_ptr<const Wavefunction> SweepContext::station_state(ErrorKind kind, double delta,
                                                                double center) {
    const std::string key = key_of("gs", center, static_cast<int>(kind), delta);
    {
        std::lock_guard<std::mutex> lock(state_mutex_);
        auto it = states_.find(key);
        if (it != states_.end()) return it->second;
    }
    auto v = error_value(kind, delta, units_);
    PotentialModel still{[v, center](double x, double) { return v(x - center); }, nullptr};
    auto psi = std::make_shared<const Wavefunction>(
        ground_state(still, 0.0, center, grid_, cfg_.numerics));
    std::lock_guard<std::mutex> lock(state_mutex_);
    auto [it, inserted] = states_.emplace(key, psi);
    return it->second;
}

void SweepContext::prewarm_states(ErrorKind kind, double delta) {
    station_state(kind, delta, 0.0);
    station_state(kind, delta, units_.d);
    if (cfg_.target_convention == "unperturbed") station_state(kind, 0.0, units_.d);
}

double SweepContext::fidelity(const std::string& name, double tf, ErrorKind kind, double delta) {
    const std::string key = key_of(name, tf, static_cast<int>(kind), delta);
    {
        std::lock_guard<std::mutex> lock(fid_mutex_);
        auto it = fidelities_.find(key);
        if (it != fidelities_.end()) return it->second;
    }
    auto traj = trajectory(name, tf);
    PotentialModel pot = error_potential(SystematicError{kind, delta}, *traj, units_);
    auto psi0 = station_state(kind, delta, 0.0);
    const double delta_target = cfg_.target_convention == "unperturbed" ? 0.0 : delta;
    auto target = station_state(kind, delta_target, units_.d);
    double f = transport_fidelity(pot, *psi0, *target, tf, cfg_.numerics);
    std::lock_guard<std::mutex> lock(fid_mutex_);
    fidelities_.emplace(key, f);
    return f;
}

double SweepContext::sensitivity(const std::string& name, double tf, ErrorKind kind, double h) {
    double fp = fidelity(name, tf, kind, +h);
    double fm = fidelity(name, tf, kind, -h);
    return std::abs(fp - fm) / (2.0 * h);
}

int cmd_units(const SweepConfig& cfg, std::ostream& out) {
    NaturalUnits u = derive_units(cfg.physical);
    DimensionlessParams p = nondimensionalize(cfg.physical, u);
    char line[160];
    out << "derived units (m = " << cfg.physical.mass_amu << " amu, lambda = "
        << cfg.physical.wavelength_nm << " nm, alpha = " << cfg.physical.alpha << ")\n";
    std::snprintf(line, sizeof(line), "  omega0      %.6e rad/s\n", u.omega0);
    out << line;
    std::snprintf(line, sizeof(line), "  tau         %.4f us\n", u.tau * 1e6);
    out << line;
    std::snprintf(line, sizeof(line), "  sigma       %.4f nm\n", u.sigma * 1e9);
    out << line;
    std::snprintf(line, sizeof(line), "  E_rec       %.6e J\n", u.recoil_energy);
    out << line;
    std::snprintf(line, sizeof(line), "  U0          %.6e J\n", u.lattice_depth_U0);
    out << line;
    std::snprintf(line, sizeof(line), "  k0          %.6e 1/m\n", u.wavenumber_k0);
    out << line;
    std::snprintf(line, sizeof(line), "  U0_tilde    %.6f\n", u.u_tilde);
    out << line;
    std::snprintf(line, sizeof(line), "  k0*sigma    %.6f\n", p.k_sigma);
    out << line;
    std::snprintf(line, sizeof(line), "  d           %.6f sigma (%g site(s))\n", p.d,
                  cfg.physical.distance_sites);
    out << line;
    return 0;
}

int cmd_trajectory(const SweepConfig& cfg) {
    DimensionlessParams units = nondimensionalize(cfg.physical);
    const double tf = cfg.epsilon_tf;
    for (int fam = 1; fam <= 3; ++fam) {
        EstaTrajectory t = build_esta_trajectory(static_cast<TrajectoryFamily>(fam), tf, units,
                                                 cfg.basis_size, cfg.n_modes);
        CsvWriter csv(out_path(cfg, "trajectory_" + std::to_string(fam) + ".csv"),
                      "t_over_tf, qc, q0, Q");
        for (int i = 0; i <= cfg.samples; ++i) {
            double s = static_cast<double>(i) / cfg.samples;
            double time = s * tf;
            csv.row({CsvWriter::num(s), CsvWriter::num(t.qc.value(time)),
                     CsvWriter::num(t.q0.value(time)), CsvWriter::num(t.Q.value(time))});
        }
    }
    return 0;
}

int cmd_epsilon(const SweepConfig& cfg) {
    DimensionlessParams units = nondimensionalize(cfg.physical);
    EstaTrajectory t = build_esta_trajectory(static_cast<TrajectoryFamily>(cfg.epsilon_family),
                                             cfg.epsilon_tf, units, cfg.basis_size, cfg.n_modes);
    {
        CsvWriter csv(out_path(cfg, "epsilon.csv"), "l, epsilon_sigma");
        for (std::size_t l = 0; l < t.epsilon.values.size(); ++l) {
            csv.row({CsvWriter::num(static_cast<int>(l + 1)), CsvWriter::num(t.epsilon.values[l])});
        }
    }
    {
        CsvWriter csv(out_path(cfg, "gn.csv"), "n, re, im");
        for (std::size_t n = 0; n < t.epsilon.gn.size(); ++n) {
            csv.row({CsvWriter::num(static_cast<int>(n + 1)),
                     CsvWriter::num(t.epsilon.gn[n].real()), CsvWriter::num(t.epsilon.gn[n].imag())});
        }
    }
    return 0;
}

int cmd_fidelity(const SweepConfig& cfg) {
    SweepContext ctx(cfg);
    ErrorKind kind = error_kind_of(cfg.error_kinds.front());
    auto tfs = tf_grid(cfg);
    auto deltas = delta_grid(cfg);
    for (double d : deltas) ctx.prewarm_states(kind, d);

    struct Task {
        double tf;
        std::string traj;
        double delta;
    };
    std::vector<Task> tasks;
    for (double tf : tfs) {
        for (const auto& tr : cfg.trajectories) {
            for (double d : deltas) tasks.push_back({tf, tr, d});
        }
    }
    std::vector<double> result(tasks.size(), std::nan(""));
    bool failed = false;
    try {
        parallel_for(static_cast<int>(tasks.size()), cfg.workers, [&](int i) {
            const Task& t = tasks[static_cast<std::size_t>(i)];
            result[static_cast<std::size_t>(i)] = ctx.fidelity(t.traj, t.tf, kind, t.delta);
        });
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fidelity sweep worker failed: %s\n", e.what());
        failed = true;
    }

    CsvWriter csv(out_path(cfg, "fidelity.csv"), "tf_over_tau, trajectory, delta, fidelity");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (std::isnan(result[i])) continue;
        csv.row({CsvWriter::num(tasks[i].tf), tasks[i].traj, CsvWriter::num(tasks[i].delta),
                 CsvWriter::num(result[i])});
    }
    if (cfg.svg && !failed) {
        std::vector<SvgSeries> series;
        for (const auto& tr : cfg.trajectories) {
            SvgSeries s{tr, {}};
            for (std::size_t i = 0; i < tasks.size(); ++i) {
                if (tasks[i].traj != tr) continue;
                double x = deltas.size() > 1 ? tasks[i].delta : tasks[i].tf;
                s.points.emplace_back(x, result[i]);
            }
            series.push_back(std::move(s));
        }
        write_svg_plot(out_path(cfg, "fidelity.svg"),
                       deltas.size() > 1 ? "fidelity vs delta" : "fidelity vs tf/tau", series);
    }
    return failed ? 1 : 0;
}

int cmd_robustness(const SweepConfig& cfg) {
    SweepContext ctx(cfg);
    auto tfs = tf_grid(cfg);
    const double h = 1e-3;
    for (const auto& ks : cfg.error_kinds) {
        ErrorKind kind = error_kind_of(ks);
        ctx.prewarm_states(kind, 0.0);
        ctx.prewarm_states(kind, +h);
        ctx.prewarm_states(kind, -h);
    }

    struct Task {
        double tf;
        std::string traj;
        std::string kind;
    };
    std::vector<Task> tasks;
    for (double tf : tfs) {
        for (const auto& tr : cfg.trajectories) {
            for (const auto& k : cfg.error_kinds) tasks.push_back({tf, tr, k});
        }
    }
    struct Row {
        double f0 = std::nan("");
        double s = 0.0;
        double b = 0.0;
    };
    std::vector<Row> rows(tasks.size());
    bool failed = false;
    try {
        parallel_for(static_cast<int>(tasks.size()), cfg.workers, [&](int i) {
            const Task& t = tasks[static_cast<std::size_t>(i)];
            ErrorKind kind = error_kind_of(t.kind);
            Row r;
            r.f0 = ctx.fidelity(t.traj, t.tf, kind, 0.0);
            r.s = ctx.sensitivity(t.traj, t.tf, kind, h);
            r.b = error_bound(r.f0, r.s, cfg.f_reference);
            rows[static_cast<std::size_t>(i)] = r;
        });
    } catch (const std::exception& e) {
        std::fprintf(stderr, "robustness sweep worker failed: %s\n", e.what());
        failed = true;
    }

    CsvWriter csv(out_path(cfg, "robustness.csv"), "tf_over_tau, trajectory, error_kind, F0, S, B");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (std::isnan(rows[i].f0)) continue;
        csv.row({CsvWriter::num(tasks[i].tf), tasks[i].traj, tasks[i].kind,
                 CsvWriter::num(rows[i].f0), CsvWriter::num(rows[i].s), CsvWriter::num(rows[i].b)});
    }
    return failed ? 1 : 0;
}

int cmd_noise(const SweepConfig& cfg) {
    SweepContext ctx(cfg);
    ctx.prewarm_states(ErrorKind::amplitude, 0.0);  // delta = 0: the plain lattice
    auto tfs = tf_grid(cfg);

    struct Task {
        double tf;
        std::string traj;
        std::string kind;
    };
    std::vector<Task> tasks;
    for (double tf : tfs) {
        for (const auto& tr : cfg.trajectories) {
            for (const auto& k : cfg.noise_kinds) tasks.push_back({tf, tr, k});
        }
    }
    struct Row {
        double f0 = std::nan("");
        double sn = 0.0;
        double bn = 0.0;
    };
    std::vector<Row> rows(tasks.size());
    bool failed = false;
    try {
        parallel_for(static_cast<int>(tasks.size()), cfg.workers, [&](int i) {
            const Task& t = tasks[static_cast<std::size_t>(i)];
            auto traj = ctx.trajectory(t.traj, t.tf);
            Row r;
            r.f0 = ctx.fidelity(t.traj, t.tf, ErrorKind::amplitude, 0.0);
            r.sn = noise_sensitivity(*traj, noise_kind_of(t.kind), ctx.units(), ctx.grid(),
                                     cfg.numerics);
            r.bn = noise_error_bound(r.f0, r.sn, cfg.f_reference);
            rows[static_cast<std::size_t>(i)] = r;
        });
    } catch (const std::exception& e) {
        std::fprintf(stderr, "noise sweep worker failed: %s\n", e.what());
        failed = true;
    }

    CsvWriter csv(out_path(cfg, "noise.csv"), "tf_over_tau, trajectory, noise_kind, F0, S_N, B_N");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (std::isnan(rows[i].f0)) continue;
        csv.row({CsvWriter::num(tasks[i].tf), tasks[i].traj, tasks[i].kind,
                 CsvWriter::num(rows[i].f0), CsvWriter::num(rows[i].sn),
                 CsvWriter::num(rows[i].bn)});
    }
    return failed ? 1 : 0;
}

int cmd_deviation(const SweepConfig& cfg) {
    DimensionlessParams units = nondimensionalize(cfg.physical);
    ErrorKind kind = error_kind_of(cfg.error_kinds.front());
    auto tfs = tf_grid(cfg);

    std::vector<std::string> esta_names;
    for (const auto& tr : cfg.trajectories) {
        if (is_esta(tr)) esta_names.push_back(tr);
    }
    struct Task {
        double tf;
        std::string traj;
    };
    std::vector<Task> tasks;
    for (double tf : tfs) {
        for (const auto& tr : esta_names) tasks.push_back({tf, tr});
    }
    struct Row {
        double cq = std::nan("");
        double bound = 0.0;
    };
    std::vector<Row> rows(tasks.size());
    bool failed = false;
    try {
        parallel_for(static_cast<int>(tasks.size()), cfg.workers, [&](int i) {
            const Task& t = tasks[static_cast<std::size_t>(i)];
            EstaTrajectory et = build_esta_trajectory(family_of(t.traj), t.tf, units,
                                                      cfg.basis_size, cfg.n_modes);
            EstaInputs in{&et.qc, &et.q0, &et.basis, units, cfg.n_modes};
            DeviationReport rep = control_deviation(in, kind);
            rows[static_cast<std::size_t>(i)] = Row{rep.c_q, rep.upper_bound};
        });
    } catch (const std::exception& e) {
        std::fprintf(stderr, "deviation sweep worker failed: %s\n", e.what());
        failed = true;
    }

    CsvWriter csv(out_path(cfg, "deviation.csv"), "tf_over_tau, trajectory, c_q, c_q_upper_bound");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (std::isnan(rows[i].cq)) continue;
        csv.row({CsvWriter::num(tasks[i].tf), tasks[i].traj, CsvWriter::num(rows[i].cq),
                 CsvWriter::num(rows[i].bound)});
    }
    return failed ? 1 : 0;
}

}  // namespace esta
