#include "esta/config.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace esta {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "config error: key '" + key + "' has malformed value '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    double v = parse_double(key, value);
    if (v != std::floor(v)) {
        throw ConfigError(key, "config error: key '" + key + "' expects an integer, got '" + value + "'");
    }
    return static_cast<int>(v);
}

std::vector<std::string> parse_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t a = item.find_first_not_of(" \t");
        std::size_t b = item.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    std::size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

}  // namespace

void apply_config_line(SweepConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "mass_amu") cfg.physical.mass_amu = parse_double(key, value);
    else if (key == "wavelength_nm") cfg.physical.wavelength_nm = parse_double(key, value);
    else if (key == "alpha") cfg.physical.alpha = parse_double(key, value);
    else if (key == "distance_sites") cfg.physical.distance_sites = parse_double(key, value);
    else if (key == "trajectories") cfg.trajectories = parse_list(value);
    else if (key == "tf_min") cfg.tf_min = parse_double(key, value);
    else if (key == "tf_max") cfg.tf_max = parse_double(key, value);
    else if (key == "tf_step") cfg.tf_step = parse_double(key, value);
    else if (key == "error_kinds") cfg.error_kinds = parse_list(value);
    else if (key == "noise_kinds") cfg.noise_kinds = parse_list(value);
    else if (key == "delta_min") cfg.delta_min = parse_double(key, value);
    else if (key == "delta_max") cfg.delta_max = parse_double(key, value);
    else if (key == "delta_step") cfg.delta_step = parse_double(key, value);
    else if (key == "f_reference") cfg.f_reference = parse_double(key, value);
    else if (key == "target_convention") cfg.target_convention = trim(value);
    else if (key == "grid_points") cfg.numerics.grid_points = parse_int(key, value);
    else if (key == "grid_pad_sigma") cfg.numerics.grid_pad_sigma = parse_double(key, value);
    else if (key == "dt_over_tau") cfg.numerics.dt_over_tau = parse_double(key, value);
    else if (key == "imag_time_tol") cfg.numerics.imag_time_tol = parse_double(key, value);
    else if (key == "order") cfg.numerics.order = parse_int(key, value);
    else if (key == "basis_size") cfg.basis_size = parse_int(key, value);
    else if (key == "n_modes") cfg.n_modes = parse_int(key, value);
    else if (key == "samples") cfg.samples = parse_int(key, value);
    else if (key == "epsilon_family") cfg.epsilon_family = parse_int(key, value);
    else if (key == "epsilon_tf") cfg.epsilon_tf = parse_double(key, value);
    else if (key == "out_dir") cfg.out_dir = trim(value);
    else if (key == "workers") cfg.workers = parse_int(key, value);
    else if (key == "seed") cfg.seed = static_cast<unsigned long>(parse_double(key, value));
    else if (key == "svg") cfg.svg = parse_int(key, value) != 0;
    else throw ConfigError(key, "config error: unknown key '" + key + "'");
}

SweepConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "config error: cannot open '" + path + "'");
    SweepConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line, "config error: expected 'key = value', got '" + line + "'");
        }
        apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    validate(cfg);
    return cfg;
}

void validate(const SweepConfig& cfg) {
    auto positive = [](double v, const char* key) {
        if (!(v > 0.0)) throw ConfigError(key, std::string("config error: key '") + key +
                                                   "' must be strictly positive");
    };
    positive(cfg.physical.mass_amu, "mass_amu");
    positive(cfg.physical.wavelength_nm, "wavelength_nm");
    positive(cfg.physical.alpha, "alpha");
    positive(cfg.physical.distance_sites, "distance_sites");
    positive(cfg.tf_step, "tf_step");
    positive(cfg.numerics.dt_over_tau, "dt_over_tau");
    if (cfg.tf_max < cfg.tf_min) throw ConfigError("tf_max", "config error: key 'tf_max' below tf_min");
    if (cfg.delta_max < cfg.delta_min) {
        throw ConfigError("delta_max", "config error: key 'delta_max' below delta_min");
    }
    if (!(cfg.f_reference > 0.0 && cfg.f_reference < 1.0)) {
        throw ConfigError("f_reference", "config error: key 'f_reference' must lie in (0, 1)");
    }
    if (cfg.numerics.grid_points < 512 ||
        (cfg.numerics.grid_points & (cfg.numerics.grid_points - 1)) != 0) {
        throw ConfigError("grid_points",
                          "config error: key 'grid_points' must be a power of two >= 512");
    }
    if (cfg.target_convention != "perturbed" && cfg.target_convention != "unperturbed") {
        throw ConfigError("target_convention",
                          "config error: key 'target_convention' must be perturbed or unperturbed");
    }
    for (const auto& t : cfg.trajectories) {
        if (t != "q0_1" && t != "q0_2" && t != "q0_3" && t != "Q_1" && t != "Q_2" && t != "Q_3") {
            throw ConfigError("trajectories", "config error: key 'trajectories' has unknown name '" + t + "'");
        }
    }
    for (const auto& k : cfg.error_kinds) {
        if (k != "correlated" && k != "amplitude" && k != "wavenumber") {
            throw ConfigError("error_kinds", "config error: key 'error_kinds' has unknown kind '" + k + "'");
        }
    }
    for (const auto& k : cfg.noise_kinds) {
        if (k != "position" && k != "amplitude") {
            throw ConfigError("noise_kinds", "config error: key 'noise_kinds' has unknown kind '" + k + "'");
        }
    }
    if (cfg.epsilon_family < 1 || cfg.epsilon_family > 3) {
        throw ConfigError("epsilon_family", "config error: key 'epsilon_family' must be 1, 2 or 3");
    }
}

std::vector<double> tf_grid(const SweepConfig& cfg) {
    std::vector<double> g;
    for (double t = cfg.tf_min; t <= cfg.tf_max + 1e-9; t += cfg.tf_step) g.push_back(t);
    return g;
}

std::vector<double> delta_grid(const SweepConfig& cfg) {
    std::vector<double> g;
    for (double d = cfg.delta_min; d <= cfg.delta_max + 1e-12; d += cfg.delta_step) g.push_back(d);
    if (g.empty()) g.push_back(0.0);
    return g;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header) : path_(path) {
    buffer_ = "# schema=1\n" + header + "\n";
}

CsvWriter::~CsvWriter() {
    std::ofstream out(path_, std::ios::binary);
    out << buffer_;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        buffer_ += cells[i];
        buffer_ += (i + 1 == cells.size()) ? "\n" : ",";
    }
}

std::string CsvWriter::num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string CsvWriter::num(int v) { return std::to_string(v); }

void parallel_for(int total, int workers, const std::function<void(int)>& fn) {
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers <= 0) workers = 2;
    }
    workers = std::min(workers, total);
    if (workers <= 1) {
        for (int i = 0; i < total; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto work = [&]() {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= total) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series) {
    const int W = 640, H = 420, ml = 60, mr = 20, mt = 40, mb = 40;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(xmax > xmin)) { xmax = xmin + 1.0; }
    if (!(ymax > ymin)) { ymax = ymin + 1.0; }
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
    static const char* colors[] = {"#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2"};

    std::ofstream out(path, std::ios::binary);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";
    out << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
        << "' stroke='black'/>\n";
    out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
        << "' stroke='black'/>\n";
    char lab[64];
    std::snprintf(lab, sizeof(lab), "%.3g", xmin);
    out << "<text x='" << ml << "' y='" << H - mb + 16 << "' font-size='11'>" << lab << "</text>\n";
    std::snprintf(lab, sizeof(lab), "%.3g", xmax);
    out << "<text x='" << W - mr - 30 << "' y='" << H - mb + 16 << "' font-size='11'>" << lab
        << "</text>\n";
    std::snprintf(lab, sizeof(lab), "%.3g", ymin);
    out << "<text x='4' y='" << H - mb << "' font-size='11'>" << lab << "</text>\n";
    std::snprintf(lab, sizeof(lab), "%.3g", ymax);
    out << "<text x='4' y='" << mt + 4 << "' font-size='11'>" << lab << "</text>\n";
    int ci = 0;
    for (const auto& s : series) {
        const char* color = colors[ci % 6];
        out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (auto [x, y] : s.points) out << px(x) << "," << py(y) << " ";
        out << "'/>\n";
        out << "<text x='" << W - mr - 120 << "' y='" << mt + 14 * (ci + 1) << "' fill='" << color
            << "' font-size='11'>" << s.label << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

}  // namespace esta
