#pragma once

#include <functional>
#include <string>
#include <vector>

namespace esta {

// One piece of a piecewise trajectory. fn(t, order) returns the order-th
// time derivative (order 0..4) at t; throws std::logic_error if the segment
// cannot supply that order. Times in tau, positions in sigma.
struct Segment {
    double lo;  // active on [lo, hi); first segment reaches -inf, last +inf
    double hi;
    std::function<double(double, int)> fn;
};

enum class Side { left, right };

// Immutable piecewise trajectory q(t) on [0, t_f] with constant extensions
// q(t<0) = q(0), q(t>t_f) = q(t_f). Evaluation is reentrant.
class ControlFunction {
public:
    ControlFunction(std::string kind, double t_f, double displacement,
                    std::vector<Segment> segments);

    double value(double t) const { return eval(t, 0); }
    double d1(double t) const { return eval(t, 1); }
    double d2(double t) const { return eval(t, 2); }

    // side selects the branch when t is exactly a breakpoint
    double eval(double t, int order, Side side = Side::right) const;

    double t_f() const { return t_f_; }
    double displacement() const { return d_; }
    const std::string& kind() const { return kind_; }

    // interior times in (0, t_f) where the piecewise definition changes
    std::vector<double> breakpoints() const;
    const std::vector<Segment>& segments() const { return segments_; }

private:
    std::string kind_;
    double t_f_;
    double d_;
    std::vector<Segment> segments_;
};

// Smoothing windows: total width window_fraction * t_f centered on each
// listed discontinuity; windows touching 0 or t_f are kept inside [0, t_f]
// at full width.
struct SmoothingSpec {
    double window_fraction = 1.0 / 8.0;
    std::vector<double> window_centers;
};

SmoothingSpec default_smoothing(double t_f);

// Cardinal polynomials P_l of degree L+5 on [0, t_f]: P_l and its first two
// derivatives vanish at both ends, and P_l(node(k)) = delta_{lk} at the L
// equally spaced interior nodes node(k) = k t_f / (L+1).
class CorrectionBasis {
public:
    CorrectionBasis(int L, double t_f);

    int size() const { return L_; }
    double t_f() const { return t_f_; }
    int degree() const { return L_ + 5; }
    double node(int l) const;  // l = 1..L
    double condition_number() const { return condition_; }

    // l = 1..L, order 0..4
    double eval(int l, double t, int order = 0) const;
    double l1_norm(int l) const;  // integral of |P_l| over [0, t_f]

private:
    int L_;
    double t_f_;
    double condition_;
    std::vector<std::vector<double>> coeffs_;  // per l, powers of s = t/t_f
};

// q_{c,1}: degree-9 polynomial with value/1st/2nd/3rd/4th derivative pinned
// at both ends.
ControlFunction polynomial_qc(double d, double t_f);

// q_{c,2}: quasi-optimal branch f_c on (0, t_f/2) reflected onto the second
// half, then smoothed.
ControlFunction quasi_optimal_qc(double d, double t_f, const SmoothingSpec& spec);
ControlFunction quasi_optimal_qc_raw(double d, double t_f);

// q_{c,3}: two-branch constant-acceleration parabola pair (unsmoothed).
ControlFunction quasi_optimal_classical_qc(double d, double t_f);

// Replaces each window by a polynomial matching value and first two
// derivatives of the retained outer branches at the window edges; where the
// outer branch is constant the match extends through the fourth derivative,
// keeping the endpoint rest conditions exact.
ControlFunction smooth(const ControlFunction& control, const SmoothingSpec& spec);

// q_0(t) = q_c(t) + q_c''(t) / omega0^2 (inverts the auxiliary equation).
// The result supports derivative orders 0..2.
ControlFunction invert_q0(const ControlFunction& qc, double omega0);

// Q(eps, t) = q_0(t) + sum_l eps_l P_l(t)
ControlFunction esta_control(const ControlFunction& q0, const CorrectionBasis& basis,
                             const std::vector<double>& epsilon);

// q(t) + offset, for translation-covariance checks
ControlFunction shift_control(const ControlFunction& q, double offset);

// Paper trajectory families and the standard construction pipeline:
// family 1 unsmoothed, families 2 and 3 smoothed with the default windows.
enum class TrajectoryFamily { poly = 1, quasi_opt = 2, classical = 3 };

ControlFunction make_smoothed_qc(TrajectoryFamily family, double d, double t_f);

}  // namespace esta
