#include "esta/deviation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "esta/quadrature.hpp"

namespace esta {

namespace {

// dq_0/d delta: zero for the correlated error (omega fixed); for amplitude
// and wavenumber errors the re-derived STA trajectory q_0(delta) =
// q_c + qddot_c / (omega0^2 (1+delta)) gives -qddot_c/omega0^2 at delta = 0.
std::function<double(double)> sta_delta_term(ErrorKind kind, const ControlFunction& qc,
                                             double omega0) {
    if (kind == ErrorKind::correlated) {
        return [](double) { return 0.0; };
    }
    const ControlFunction* q = &qc;
    const double w2 = omega0 * omega0;
    return [q, w2](double t) { return -q->d2(t) / w2; };
}

struct EpsilonTerms {
    double g = 0.0;                // sum |G_n|^2
    double gp = 0.0;               // d/d delta of g
    std::vector<double> v;         // v_j = sum_n Re(G_n* K_nj)
    std::vector<double> w;         // d/d delta of v_j
    double v2 = 0.0;               // sum v_j^2
    double vw = 0.0;               // sum v_j w_j
};

EpsilonTerms epsilon_terms(const GnKn& gk, const GnKn& dgk) {
    EpsilonTerms t;
    const std::size_t N = gk.gn.size();
    const std::size_t L = gk.kn.empty() ? 0 : gk.kn[0].size();
    t.v.assign(L, 0.0);
    t.w.assign(L, 0.0);
    for (std::size_t n = 0; n < N; ++n) {
        t.g += std::norm(gk.gn[n]);
        t.gp += 2.0 * std::real(std::conj(gk.gn[n]) * dgk.gn[n]);
        for (std::size_t l = 0; l < L; ++l) {
            t.v[l] += std::real(std::conj(gk.gn[n]) * gk.kn[n][l]);
            t.w[l] += std::real(std::conj(dgk.gn[n]) * gk.kn[n][l]) +
                      std::real(std::conj(gk.gn[n]) * dgk.kn[n][l]);
        }
    }
    for (std::size_t l = 0; l < L; ++l) {
        t.v2 += t.v[l] * t.v[l];
        t.vw += t.v[l] * t.w[l];
    }
    return t;
}

}  // namespace

DeltaFamily make_delta_family(ErrorKind kind, const ControlFunction& qc,
                              const DimensionlessParams& units) {
    DeltaFamily f;
    const DimensionlessParams u = units;
    f.g_integrand = [kind, u](double delta) {
        auto v = error_value(kind, delta, u);
        return [v](double w) { return v(w) - 0.5 * w * w; };
    };
    f.k_integrand = [kind, u](double delta) { return error_gradient(kind, delta, u); };
    f.g_delta_derivative = delta_derivative(kind, u);
    f.k_delta_derivative = delta_derivative_gradient(kind, u);
    f.sta_term = sta_delta_term(kind, qc, units.omega0);
    return f;
}

std::vector<double> epsilon_delta_derivative(const EstaInputs& in, const DeltaFamily& family,
                                             DerivativeMethod method, double h) {
    const std::size_t L = static_cast<std::size_t>(in.basis->size());
    if (method == DerivativeMethod::finite_difference) {
        EpsilonVector plus =
            epsilon_from_gnkn(compute_gn_kn(in, family.g_integrand(+h), family.k_integrand(+h)));
        EpsilonVector minus =
            epsilon_from_gnkn(compute_gn_kn(in, family.g_integrand(-h), family.k_integrand(-h)));
        std::vector<double> d(L, 0.0);
        if (plus.degenerate || minus.degenerate) return d;
        for (std::size_t l = 0; l < L; ++l) {
            d[l] = (plus.values[l] - minus.values[l]) / (2.0 * h);
        }
        return d;
    }

    GnKn gk = compute_gn_kn(in, family.g_integrand(0.0), family.k_integrand(0.0));
    GnKn dgk = compute_gn_kn(in, family.g_delta_derivative, family.k_delta_derivative);
    EpsilonTerms t = epsilon_terms(gk, dgk);
    std::vector<double> d(L, 0.0);
    if (t.v2 < 1e-24) return d;
    for (std::size_t l = 0; l < L; ++l) {
        // product rule on eps_j = -g v_j / v2
        d[l] = -(t.gp * t.v[l] + t.g * t.w[l]) / t.v2 +
               t.g * t.v[l] * (2.0 * t.vw) / (t.v2 * t.v2);
    }
    return d;
}

std::vector<double> epsilon_delta_derivative(const EstaInputs& in, ErrorKind kind,
                                             DerivativeMethod method, double h) {
    return epsilon_delta_derivative(in, make_delta_family(kind, *in.qc, in.units), method, h);
}

DeviationReport control_deviation(const EstaInputs& in, ErrorKind kind, DerivativeMethod method,
                                  double rel_tol) {
    DeltaFamily family = make_delta_family(kind, *in.qc, in.units);
    DeviationReport r{};
    r.d_epsilon_d_delta = epsilon_delta_derivative(in, family, method);

    const CorrectionBasis& basis = *in.basis;
    const double t_f = basis.t_f();
    auto integrand = [&](double t) {
        double s = family.sta_term(t);
        for (int l = 1; l <= basis.size(); ++l) {
            s += basis.eval(l, t) * r.d_epsilon_d_delta[static_cast<std::size_t>(l - 1)];
        }
        return std::abs(s);
    };

    std::vector<double> splits = in.qc->breakpoints();
    for (int l = 1; l <= basis.size(); ++l) splits.push_back(basis.node(l));
    std::sort(splits.begin(), splits.end());

    GaussLegendre gl(64);
    double scale = 0.0;
    for (std::size_t q = 0; q < gl.x.size(); ++q) {
        scale = std::max(scale, integrand(0.5 * t_f * (1.0 + gl.x[q])));
    }
    if (scale == 0.0) {
        r.c_q = 0.0;
    } else {
        r.c_q = adaptive_simpson_split(integrand, 0.0, t_f, splits, rel_tol * scale * t_f);
    }

    auto sta_abs = [&](double t) { return std::abs(family.sta_term(t)); };
    r.sta_term_norm = adaptive_simpson_split(sta_abs, 0.0, t_f, in.qc->breakpoints(), 1e-12);

    double max_p = 0.0, sum_de = 0.0;
    for (int l = 1; l <= basis.size(); ++l) {
        max_p = std::max(max_p, basis.l1_norm(l));
        sum_de += std::abs(r.d_epsilon_d_delta[static_cast<std::size_t>(l - 1)]);
    }
    r.upper_bound = r.sta_term_norm + max_p * sum_de;
    return r;
}

double deviation_upper_bound(const EstaInputs& in, ErrorKind kind, DerivativeMethod method) {
    return control_deviation(in, kind, method).upper_bound;
}

}  // namespace esta
