#include "esta/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "esta/quadrature.hpp"

namespace esta {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// polynomial in s = (t - t0)/h, evaluated with derivative order in t
struct ScaledPoly {
    std::vector<double> c;
    double t0 = 0.0;
    double h = 1.0;

    double operator()(double t, int order) const {
        if (order < 0 || order > 4) throw std::logic_error("polynomial derivative order out of range");
        double s = (t - t0) / h;
        double acc = 0.0;
        int n = static_cast<int>(c.size());
        for (int j = n - 1; j >= order; --j) {
            double fac = 1.0;
            for (int k = 0; k < order; ++k) fac *= static_cast<double>(j - k);
            acc = acc * s + fac * c[static_cast<std::size_t>(j)];
        }
        // Horner above accumulates sum_j c_j * j!/(j-order)! * s^(j-order)
        return acc / std::pow(h, order);
    }
};

Segment poly_segment(double lo, double hi, ScaledPoly p) {
    return Segment{lo, hi, [p = std::move(p)](double t, int order) { return p(t, order); }};
}

Segment const_segment(double lo, double hi, double v) {
    return Segment{lo, hi, [v](double t, int order) {
                       (void)t;
                       return order == 0 ? v : 0.0;
                   }};
}

// signed fractional powers via the real cube root
inline double pow13(double y) { return std::cbrt(y); }

// f_c(t) = (3d/8) y^(7/3) + (7d/4)(t/t_f) - 3d/8, y = 1 - 2 t/t_f
struct FcBranch {
    double d;
    double t_f;

    double operator()(double t, int order) const {
        double y = 1.0 - 2.0 * t / t_f;
        double p = pow13(y);
        switch (order) {
            case 0:
                return (3.0 * d / 8.0) * y * y * p + (7.0 * d / 4.0) * (t / t_f) - 3.0 * d / 8.0;
            case 1:
                return (7.0 * d / (4.0 * t_f)) * (1.0 - y * p);
            case 2:
                return (14.0 * d / (3.0 * t_f * t_f)) * p;
            case 3:
                return -(28.0 * d / (9.0 * t_f * t_f * t_f)) / (p * p);
            case 4:
                return -(112.0 * d / (27.0 * std::pow(t_f, 4))) / (y * p * p);
            default:
                throw std::logic_error("f_c derivative order out of range");
        }
    }
};

// reflection of an arbitrary branch: g(t) = d - f(t_f - t)
struct ReflectedBranch {
    std::function<double(double, int)> f;
    double d;
    double t_f;

    double operator()(double t, int order) const {
        double v = f(t_f - t, order);
        double sign = (order % 2 == 0) ? -1.0 : 1.0;
        return (order == 0 ? d : 0.0) + sign * v;
    }
};

struct WindowAnchor {
    double t;
    bool flat;              // outer branch is a constant
    double v[3];            // value, d1, d2 of the retained branch
};

// Hermite-type interpolant on [lo, hi]: matches value/d1/d2 at a non-flat
// edge; at a flat (constant-branch) edge the match runs through the fourth
// derivative, keeping the endpoint rest conditions exact. Flat-edge windows
// use the structured form c0 + s^5 (a + b s + c s^2), where s runs from the
// flat edge, so the quintuple zero is built in.
ScaledPoly window_interpolant(const WindowAnchor& left, const WindowAnchor& right) {
    ScaledPoly p;
    if (left.flat || right.flat) {
        const WindowAnchor& flat = left.flat ? left : right;
        const WindowAnchor& free_edge = left.flat ? right : left;
        const double h = free_edge.t - flat.t;  // negative for right-flat windows
        const double f0 = free_edge.v[0] - flat.v[0];
        const double f1 = h * free_edge.v[1];
        const double f2 = h * h * free_edge.v[2];
        p.c.assign(8, 0.0);
        p.c[0] = flat.v[0];
        p.c[5] = 21.0 * f0 - 6.0 * f1 + 0.5 * f2;
        p.c[6] = -35.0 * f0 + 11.0 * f1 - f2;
        p.c[7] = 15.0 * f0 - 5.0 * f1 + 0.5 * f2;
        p.t0 = flat.t;
        p.h = h;
        return p;
    }
    const double h = right.t - left.t;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(6, 6);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(6);
    int row = 0;
    for (int k = 0; k < 3; ++k, ++row) {
        double fac = 1.0;
        for (int m = 0; m < k; ++m) fac *= static_cast<double>(k - m);
        A(row, k) = fac;  // p^(k)(0) = k! c_k
        b(row) = std::pow(h, k) * left.v[k];
    }
    for (int k = 0; k < 3; ++k, ++row) {
        for (int j = k; j < 6; ++j) {
            double fac = 1.0;
            for (int m = 0; m < k; ++m) fac *= static_cast<double>(j - m);
            A(row, j) = fac;  // p^(k)(1)
        }
        b(row) = std::pow(h, k) * right.v[k];
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    p.c.assign(c.data(), c.data() + 6);
    p.t0 = left.t;
    p.h = h;
    return p;
}

}  // namespace

ControlFunction::ControlFunction(std::string kind, double t_f, double displacement,
                                 std::vector<Segment> segments)
    : kind_(std::move(kind)), t_f_(t_f), d_(displacement), segments_(std::move(segments)) {
    if (segments_.empty()) throw std::invalid_argument("control function needs segments");
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
        if (segments_[i].hi != segments_[i + 1].lo) {
            throw std::invalid_argument("control function segments must be contiguous");
        }
    }
}

double ControlFunction::eval(double t, int order, Side side) const {
    std::size_t i = 0;
    if (side == Side::right) {  // segment with lo <= t < hi
        while (i + 1 < segments_.size() && t >= segments_[i].hi) ++i;
    } else {  // segment with lo < t <= hi
        while (i + 1 < segments_.size() && t > segments_[i].hi) ++i;
    }
    return segments_[i].fn(t, order);
}

std::vector<double> ControlFunction::breakpoints() const {
    std::vector<double> pts;
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
        double b = segments_[i].hi;
        if (b > 0.0 && b < t_f_) pts.push_back(b);
    }
    return pts;
}

SmoothingSpec default_smoothing(double t_f) {
    return SmoothingSpec{1.0 / 8.0, {0.0, t_f / 2.0, t_f}};
}

ControlFunction polynomial_qc(double d, double t_f) {
    if (!(d > 0.0) || !(t_f > 0.0)) throw std::invalid_argument("d and t_f must be positive");
    ScaledPoly p;
    p.c = {0, 0, 0, 0, 0, 126.0 * d, -420.0 * d, 540.0 * d, -315.0 * d, 70.0 * d};
    p.t0 = 0.0;
    p.h = t_f;
    std::vector<Segment> segs;
    segs.push_back(const_segment(-kInf, 0.0, 0.0));
    segs.push_back(poly_segment(0.0, t_f, std::move(p)));
    segs.push_back(const_segment(t_f, kInf, d));
    return ControlFunction("qc_poly", t_f, d, std::move(segs));
}

ControlFunction quasi_optimal_qc_raw(double d, double t_f) {
    if (!(d > 0.0) || !(t_f > 0.0)) throw std::invalid_argument("d and t_f must be positive");
    FcBranch fc{d, t_f};
    ReflectedBranch refl{fc, d, t_f};
    std::vector<Segment> segs;
    segs.push_back(const_segment(-kInf, 0.0, 0.0));
    segs.push_back(Segment{0.0, t_f / 2.0, fc});
    segs.push_back(Segment{t_f / 2.0, t_f, refl});
    segs.push_back(const_segment(t_f, kInf, d));
    return ControlFunction("qc_quasi_opt", t_f, d, std::move(segs));
}

ControlFunction quasi_optimal_qc(double d, double t_f, const SmoothingSpec& spec) {
    return smooth(quasi_optimal_qc_raw(d, t_f), spec);
}

ControlFunction quasi_optimal_classical_qc(double d, double t_f) {
    if (!(d > 0.0) || !(t_f > 0.0)) throw std::invalid_argument("d and t_f must be positive");
    ScaledPoly first;
    first.c = {0.0, 0.0, 2.0 * d};
    first.t0 = 0.0;
    first.h = t_f;
    ScaledPoly second;  // d [1 - 2 (s-1)^2] = -d + 4 d s - 2 d s^2
    second.c = {-d, 4.0 * d, -2.0 * d};
    second.t0 = 0.0;
    second.h = t_f;
    std::vector<Segment> segs;
    segs.push_back(const_segment(-kInf, 0.0, 0.0));
    segs.push_back(poly_segment(0.0, t_f / 2.0, std::move(first)));
    segs.push_back(poly_segment(t_f / 2.0, t_f, std::move(second)));
    segs.push_back(const_segment(t_f, kInf, d));
    return ControlFunction("qc_classical", t_f, d, std::move(segs));
}

ControlFunction smooth(const ControlFunction& control, const SmoothingSpec& spec) {
    const double t_f = control.t_f();
    const double t_T = spec.window_fraction * t_f;

    // interior windows are centered boxes of length t_T; the domain-edge
    // windows follow the segment layout t0 = t_T and t3 = t_f - t_T/2
    std::vector<std::pair<double, double>> windows;
    for (double c : spec.window_centers) {
        double lo = c - t_T / 2.0, hi = c + t_T / 2.0;
        if (lo < 0.0) {
            lo = 0.0;
            hi = t_T;
        }
        if (hi > t_f) {
            hi = t_f;
            lo = t_f - t_T / 2.0;
        }
        if (lo < 0.0 || hi > t_f) throw std::invalid_argument("smoothing window exceeds [0, t_f]");
        windows.emplace_back(lo, hi);
    }
    std::sort(windows.begin(), windows.end());
    for (std::size_t i = 0; i + 1 < windows.size(); ++i) {
        if (windows[i].second > windows[i + 1].first) {
            throw std::invalid_argument("smoothing windows overlap");
        }
    }

    auto anchor = [&](double t, Side side) {
        WindowAnchor a;
        a.t = t;
        a.v[0] = control.eval(t, 0, side);
        a.v[1] = control.eval(t, 1, side);
        a.v[2] = control.eval(t, 2, side);
        a.flat = a.v[1] == 0.0 && a.v[2] == 0.0 && control.eval(t, 3, side) == 0.0 &&
                 control.eval(t, 4, side) == 0.0;
        return a;
    };

    std::vector<ScaledPoly> interpolants;
    interpolants.reserve(windows.size());
    for (const auto& [wlo, whi] : windows) {
        interpolants.push_back(window_interpolant(anchor(wlo, Side::left), anchor(whi, Side::right)));
    }

    // carve the windows out of the original segments; a window spanning
    // several original segments is emitted exactly once
    std::vector<Segment> out;
    for (const Segment& seg : control.segments()) {
        double lo = seg.lo;
        while (lo < seg.hi) {
            int w = -1;
            for (std::size_t i = 0; i < windows.size(); ++i) {
                if (windows[i].first <= lo && lo < windows[i].second) {
                    w = static_cast<int>(i);
                    break;
                }
            }
            if (w >= 0) {
                const auto& [wlo, whi] = windows[static_cast<std::size_t>(w)];
                if (out.empty() || out.back().lo != wlo || out.back().hi != whi) {
                    out.push_back(poly_segment(wlo, whi, interpolants[static_cast<std::size_t>(w)]));
                }
                lo = std::min(seg.hi, whi);
                if (whi >= seg.hi) break;
            } else {
                double next = seg.hi;
                for (const auto& win : windows) {
                    if (win.first > lo) {
                        next = std::min(next, win.first);
                        break;
                    }
                }
                out.push_back(Segment{lo, next, seg.fn});
                lo = next;
            }
        }
    }
    return ControlFunction(control.kind(), t_f, control.displacement(), std::move(out));
}

ControlFunction invert_q0(const ControlFunction& qc, double omega0) {
    const double w2 = omega0 * omega0;
    std::vector<Segment> segs;
    for (const Segment& seg : qc.segments()) {
        auto fn = seg.fn;
        segs.push_back(Segment{seg.lo, seg.hi, [fn, w2](double t, int order) {
                                   if (order > 2) {
                                       throw std::logic_error("q0 supports derivative orders 0..2");
                                   }
                                   return fn(t, order) + fn(t, order + 2) / w2;
                               }});
    }
    std::string kind = qc.kind();
    if (kind.rfind("qc", 0) == 0) kind = "q0" + kind.substr(2);
    return ControlFunction(kind, qc.t_f(), qc.displacement(), std::move(segs));
}

ControlFunction esta_control(const ControlFunction& q0, const CorrectionBasis& basis,
                             const std::vector<double>& epsilon) {
    if (static_cast<int>(epsilon.size()) != basis.size()) {
        throw std::invalid_argument("epsilon length must match basis size");
    }
    if (std::abs(q0.t_f() - basis.t_f()) > 1e-12 * q0.t_f()) {
        throw std::invalid_argument("q0 and basis disagree on t_f");
    }
    auto eps = epsilon;
    const double t_f = q0.t_f();
    // owning copy so the returned function is self-contained
    auto basis_copy = std::make_shared<CorrectionBasis>(basis);
    std::vector<Segment> segs;
    for (const Segment& seg : q0.segments()) {
        auto fn = seg.fn;
        segs.push_back(Segment{seg.lo, seg.hi, [fn, eps, basis_copy, t_f](double t, int order) {
                                   double v = fn(t, order);
                                   if (t <= 0.0 || t >= t_f) return v;  // basis vanishes outside
                                   for (int l = 1; l <= basis_copy->size(); ++l) {
                                       v += eps[static_cast<std::size_t>(l - 1)] *
                                            basis_copy->eval(l, t, order);
                                   }
                                   return v;
                               }});
    }
    std::string kind = q0.kind();
    if (kind.rfind("q0", 0) == 0) kind = "esta_Q" + kind.substr(2);
    return ControlFunction(kind, t_f, q0.displacement(), std::move(segs));
}

ControlFunction shift_control(const ControlFunction& q, double offset) {
    std::vector<Segment> segs;
    for (const Segment& seg : q.segments()) {
        auto fn = seg.fn;
        segs.push_back(Segment{seg.lo, seg.hi, [fn, offset](double t, int order) {
                                   return fn(t, order) + (order == 0 ? offset : 0.0);
                               }});
    }
    return ControlFunction(q.kind(), q.t_f(), q.displacement(), std::move(segs));
}

ControlFunction make_smoothed_qc(TrajectoryFamily family, double d, double t_f) {
    switch (family) {
        case TrajectoryFamily::poly:
            return polynomial_qc(d, t_f);
        case TrajectoryFamily::quasi_opt:
            return quasi_optimal_qc(d, t_f, default_smoothing(t_f));
        case TrajectoryFamily::classical:
            return smooth(quasi_optimal_classical_qc(d, t_f), default_smoothing(t_f));
    }
    throw std::invalid_argument("unknown trajectory family");
}

CorrectionBasis::CorrectionBasis(int L, double t_f) : L_(L), t_f_(t_f) {
    if (L < 1) throw std::invalid_argument("basis needs L >= 1");
    if (!(t_f > 0.0)) throw std::invalid_argument("t_f must be positive");
    // P_l(s) = s^3 (1-s)^3 R_l(s): the endpoint conditions (value and two
    // derivatives at both ends) come from the triple zeros; R_l is the
    // degree L-1 interpolant through the weighted cardinal values.
    Eigen::MatrixXd V(L, L);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(L, L);
    for (int k = 1; k <= L; ++k) {
        double s = static_cast<double>(k) / (L + 1);
        for (int j = 0; j < L; ++j) V(k - 1, j) = std::pow(s, j);
        double weight = std::pow(s, 3) * std::pow(1.0 - s, 3);
        rhs(k - 1, k - 1) = 1.0 / weight;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
    condition_ = svd.singularValues()(0) / svd.singularValues()(L - 1);
    if (!std::isfinite(condition_) || condition_ > 1e10) {
        throw std::runtime_error("correction basis linear system ill-conditioned");
    }
    Eigen::MatrixXd R = V.colPivHouseholderQr().solve(rhs);
    coeffs_.assign(static_cast<std::size_t>(L), std::vector<double>(static_cast<std::size_t>(L)));
    for (int l = 0; l < L; ++l) {
        for (int j = 0; j < L; ++j) {
            coeffs_[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] = R(j, l);
        }
    }
}

double CorrectionBasis::node(int l) const {
    if (l < 1 || l > L_) throw std::invalid_argument("node index out of range");
    return static_cast<double>(l) * t_f_ / (L_ + 1);
}

double CorrectionBasis::eval(int l, double t, int order) const {
    if (l < 1 || l > L_) throw std::invalid_argument("basis index out of range");
    if (order < 0 || order > 4) throw std::logic_error("basis derivative order out of range");
    const auto& c = coeffs_[static_cast<std::size_t>(l - 1)];
    const double s = t / t_f_;
    const double u = s, v = 1.0 - s;

    // weight w = u^3 v^3 and its s-derivatives; the triple zeros make the
    // endpoint conditions exact
    double wd[5];
    wd[0] = u * u * u * v * v * v;
    wd[1] = 3.0 * u * u * v * v * (v - u);
    wd[2] = 6.0 * u * v * (u * u - 3.0 * u * v + v * v);
    wd[3] = 6.0 * (v - u) * (u * u - 8.0 * u * v + v * v);
    wd[4] = -12.0 * (u * u - 8.0 * u * v + v * v) - 60.0 * (v - u) * (v - u);

    // R and derivatives by Horner
    double rd[5] = {0.0, 0.0, 0.0, 0.0, 0.0};
    for (int k = 0; k <= order; ++k) {
        double acc = 0.0;
        for (int j = static_cast<int>(c.size()) - 1; j >= k; --j) {
            double fac = 1.0;
            for (int m = 0; m < k; ++m) fac *= static_cast<double>(j - m);
            acc = acc * s + fac * c[static_cast<std::size_t>(j)];
        }
        rd[k] = acc;
    }

    static const double binom[5][5] = {{1, 0, 0, 0, 0},
                                       {1, 1, 0, 0, 0},
                                       {1, 2, 1, 0, 0},
                                       {1, 3, 3, 1, 0},
                                       {1, 4, 6, 4, 1}};
    double p = 0.0;
    for (int m = 0; m <= order; ++m) p += binom[order][m] * wd[m] * rd[order - m];
    return p / std::pow(t_f_, order);
}

double CorrectionBasis::l1_norm(int l) const {
    std::vector<double> splits;
    for (int k = 1; k <= L_; ++k) splits.push_back(node(k));
    auto f = [&](double t) { return std::abs(eval(l, t)); };
    return adaptive_simpson_split(f, 0.0, t_f_, splits, 1e-12);
}

}  // namespace esta
