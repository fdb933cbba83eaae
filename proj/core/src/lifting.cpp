#include "pvar/lifting.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace pvar {

std::vector<double> jump_set(const StepFunction& f) {
    std::vector<double> jumps;
    const auto& v = f.values();
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] != v[i - 1]) jumps.push_back(f.breakpoints()[i]);
    return jumps;
}

IntervalCollection locate_small_intervals(const StepFunction& F, const StepFunction& G,
                                          double eta) {
    auto [rF, rG] = common_refinement(F, G);
    const std::size_t m = rF.last_index();
    std::vector<double> h(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
        h[i] = std::abs(rF.values()[i]) + std::abs(rG.values()[i]);

    IntervalCollection out;
    std::size_t i = 0;
    while (i < m) {
        if (!(h[i] < eta)) {
            ++i;
            continue;
        }
        std::size_t first = i;
        while (i < m && h[i] < eta) ++i;
        std::size_t last = i - 1;

        IntervalStats stats;
        stats.a = rF.breakpoints()[first];
        stats.b = rF.breakpoints()[last + 1];
        stats.first_index = first;
        stats.last_index = last;
        stats.contains_one = (last + 1 == m) && h[m] < eta;

        auto absorb = [&](std::size_t j) {
            stats.inf_h = std::min(stats.inf_h, h[j]);
            stats.sup_h = std::max(stats.sup_h, h[j]);
            stats.sup_abs_F = std::max(stats.sup_abs_F, std::abs(rF.values()[j]));
            stats.sup_abs_G = std::max(stats.sup_abs_G, std::abs(rG.values()[j]));
        };
        stats.inf_h = h[first];
        for (std::size_t j = first; j <= last; ++j) absorb(j);
        if (stats.contains_one) absorb(m);

        if (stats.inf_h < eta / 2.0) out.intervals.push_back(stats);
    }
    return out;
}

LocalSupReport local_sup_bound_check(const StepFunction& f, const PExponent& p, double a,
                                     double b, double rho) {
    if (!(a < b)) throw std::invalid_argument("interval requires a < b");
    LocalSupReport report;

    // Value indices attained somewhere on the open interval (a,b).
    std::vector<complexd> attained;
    const auto& bp = f.breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i)
        if (bp[i] < b && bp[i + 1] > a) attained.push_back(f.values()[i]);
    if (attained.empty()) {
        report.applicable = false;
        return report;
    }

    report.inf_f = std::abs(attained[0]);
    report.sup_f = std::abs(attained[0]);
    for (const auto& v : attained) {
        report.inf_f = std::min(report.inf_f, std::abs(v));
        report.sup_f = std::max(report.sup_f, std::abs(v));
    }
    report.applicable = report.inf_f < rho;
    report.local_var_root =
        std::pow(max_selection_var_p(attained, p), 1.0 / p.value());
    report.bound = rho + report.local_var_root;
    report.pass = !report.applicable || report.sup_f <= report.bound;
    return report;
}

namespace {

enum class AtomClass { B, Interior, JPlain, JS, J0 };

struct AtomClassification {
    std::vector<AtomClass> piece;  // open pieces (t_i, t_{i+1}), i = 0..m-1
    std::vector<AtomClass> point;  // points t_i, i = 0..m (m is the point 1)
};

// [0,1] splits into B_eta, the relative interior of {h < eta}, and the
// boundary points J_eta with h < eta; J splits further by h < eta/2 and
// h = 0 (to zero_tol). A breakpoint is interior precisely when its own piece
// and the piece to its left are both below eta (the left edge 0 only needs
// its own piece). Redefined atoms carry c_i + d_i > 0 by construction and are
// never exact zeros.
AtomClassification classify_atoms(const std::vector<double>& h, double eta, double zero_tol,
                                  const std::vector<bool>& redefined) {
    const std::size_t m = h.size() - 1;
    AtomClassification out;
    out.piece.resize(m);
    out.point.resize(m + 1);
    for (std::size_t i = 0; i < m; ++i)
        out.piece[i] = h[i] >= eta ? AtomClass::B : AtomClass::Interior;
    for (std::size_t i = 0; i <= m; ++i) {
        if (h[i] >= eta) {
            out.point[i] = AtomClass::B;
        } else if (i == 0 || h[i - 1] < eta) {
            out.point[i] = AtomClass::Interior;
        } else if (!(h[i] < eta / 2.0)) {
            out.point[i] = AtomClass::JPlain;
        } else {
            out.point[i] = (h[i] <= zero_tol && !redefined[i]) ? AtomClass::J0 : AtomClass::JS;
        }
    }
    return out;
}

// Floating-point realization of "h(y) = 0", kept strictly below the rho
// floor that every unmodified piece respects, so only the distinguished
// value at 1 can ever qualify.
double exact_zero_tolerance(double sup_h, double eta) {
    return std::min(1e-14 * (1.0 + sup_h), eta / 4.0);
}

std::array<double, 6> compute_margins(const AtomClassification& cls,
                                      const std::vector<double>& val1,
                                      const std::vector<bool>& redefined) {
    std::array<double, 6> margins;
    margins.fill(kMarginInfinity);
    auto feed = [&](AtomClass c, std::size_t index) {
        double v = val1[index];
        switch (c) {
            case AtomClass::B: margins[0] = std::min(margins[0], v); break;
            case AtomClass::JPlain: margins[1] = std::min(margins[1], v); break;
            case AtomClass::JS: margins[2] = std::min(margins[2], v); break;
            case AtomClass::J0: margins[3] = std::min(margins[3], v); break;
            case AtomClass::Interior:
                if (!redefined[index]) margins[4] = std::min(margins[4], v);
                break;
        }
        if (redefined[index]) margins[5] = std::min(margins[5], v);
    };
    const std::size_t m = val1.size() - 1;
    for (std::size_t i = 0; i < m; ++i) feed(cls.piece[i], i);
    for (std::size_t i = 0; i <= m; ++i) feed(cls.point[i], i);
    return margins;
}

std::vector<double> joint_modulus(const StepFunction& f, const StepFunction& g) {
    std::vector<double> h(f.values().size());
    for (std::size_t i = 0; i < h.size(); ++i)
        h[i] = std::abs(f.values()[i]) + std::abs(g.values()[i]);
    return h;
}

double bvp_distance(const StepFunction& x, const StepFunction& y, const PExponent& p) {
    return bvp_norm(pointwise_combine(x, y, PointwiseOp::Subtract), p);
}

}  // namespace

LiftResult lift_pair(const StepFunction& F, const StepFunction& G, const PExponent& p,
                     double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");

    ApproxPlan plan;
    plan.epsilon = epsilon;
    plan.p_value = p.value();
    plan.margins.fill(kMarginInfinity);

    // The eta formula degenerates when sup(|F|+|G|) = 0; this witness keeps
    // the zero product and stays within epsilon.
    if (sup_norm(F) == 0.0 && sup_norm(G) == 0.0) {
        plan.zero_pair = true;
        LiftResult out{constant_step_function(epsilon / 2.0), G, plan};
        out.plan.joint_margin_after = epsilon / 2.0;
        out.plan.margins[0] = epsilon / 2.0;
        out.plan.dist_F = epsilon / 2.0;
        out.plan.dist_G = 0.0;
        out.plan.dist_F_f = epsilon / 2.0;
        return out;
    }

    plan.small_value_delta = std::min(delta_for_function(F, p, epsilon / 48.0).delta,
                                    delta_for_function(G, p, epsilon / 48.0).delta);

    auto [rF, rG] = common_refinement(F, G);
    const std::size_t m = rF.last_index();
    std::vector<double> H = joint_modulus(rF, rG);
    const double sup_H = *std::max_element(H.begin(), H.end());
    const double margin = *std::min_element(H.begin(), H.end());

    plan.eta = std::min({plan.small_value_delta, epsilon / 24.0, sup_H / 2.0});

    if (margin >= plan.eta) {
        plan.identity = true;
        plan.joint_margin_after = margin;
        plan.margins[0] = margin;  // B_eta is all of [0,1]
        return LiftResult{F, G, plan};
    }

    plan.a0 = locate_small_intervals(rF, rG, plan.eta);
    const std::size_t N = plan.a0.size();
    plan.rho = N > 0 ? std::min(plan.eta / 2.0, epsilon / (48.0 * static_cast<double>(N)))
                     : plan.eta / 2.0;
    for (const auto& stats : plan.a0.intervals)
        if (stats.inf_h < plan.rho) plan.a.intervals.push_back(stats);
    const std::size_t n = plan.a.size();

    std::vector<complexd> f_vals(rF.values());
    std::vector<complexd> g_vals(rG.values());
    std::vector<bool> redefined(m + 1, false);
    const double floor_cd = n > 0 ? epsilon / (24.0 * static_cast<double>(n)) : 0.0;
    for (const auto& stats : plan.a.intervals) {
        const double c = std::max(stats.sup_abs_F, floor_cd);
        const double d = std::max(stats.sup_abs_G, floor_cd);
        plan.c.push_back(c);
        plan.d.push_back(d);
        auto redefine = [&](std::size_t j) {
            f_vals[j] = complexd(c + d, 0.0);
            g_vals[j] = rF.values()[j] * rG.values()[j] / (c + d);
            redefined[j] = true;
        };
        for (std::size_t j = stats.first_index; j <= stats.last_index; ++j) redefine(j);
        if (stats.contains_one) redefine(m);
    }

    std::vector<double> h_after(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
        h_after[i] = std::abs(f_vals[i]) + std::abs(g_vals[i]);
    const double sup_h_after = *std::max_element(h_after.begin(), h_after.end());
    const double zero_tol = exact_zero_tolerance(sup_h_after, plan.eta);

    AtomClassification cls = classify_atoms(h_after, plan.eta, zero_tol, redefined);
    for (std::size_t i = 0; i <= m; ++i) {
        AtomClass c = cls.point[i];
        if (c == AtomClass::JPlain || c == AtomClass::JS || c == AtomClass::J0) {
            double where = rF.breakpoints()[i];
            plan.j_eta.push_back(where);
            if (c != AtomClass::JPlain) plan.j_eta_s.push_back(where);
            if (c == AtomClass::J0) {
                plan.j_eta_0.push_back(where);
                plan.j_eta_0_indices.push_back(i);
            }
        }
    }
    plan.k = plan.j_eta_0.size();

    // On the representable class an isolated zero of |f|+|g| can only sit at
    // the distinguished point 1: a zero on any piece would have placed that
    // piece inside the A collection and been redefined above.
    for (std::size_t idx : plan.j_eta_0_indices)
        if (idx != m)
            throw std::logic_error("interior J0 point at value index " + std::to_string(idx));

    std::vector<complexd> F1_vals(f_vals);
    std::vector<complexd> G1_vals(g_vals);
    if (plan.k > 0) {
        const double fix = epsilon / (24.0 * static_cast<double>(plan.k));
        for (std::size_t idx : plan.j_eta_0_indices) {
            // h(idx) <= zero_tol realizes "h = 0": both parts vanish there.
            f_vals[idx] = complexd(0.0, 0.0);
            g_vals[idx] = complexd(0.0, 0.0);
            G1_vals[idx] = complexd(0.0, 0.0);
            F1_vals[idx] = complexd(fix, 0.0);
        }
    }

    Field g_field = plan.a.empty() ? rG.field()
                                   : ((rF.field() == Field::Real && rG.field() == Field::Real)
                                          ? Field::Real
                                          : Field::Complex);
    StepFunction f_mid(rF.breakpoints(), std::move(f_vals), rF.field());
    StepFunction F1(rF.breakpoints(), std::move(F1_vals), rF.field());
    StepFunction G1(rF.breakpoints(), std::move(G1_vals), g_field);

    std::vector<double> val1 = joint_modulus(F1, G1);
    plan.margins = compute_margins(cls, val1, redefined);
    plan.joint_margin_after = *std::min_element(val1.begin(), val1.end());

    plan.dist_F = bvp_distance(F, F1, p);
    plan.dist_G = bvp_distance(G, G1, p);
    plan.dist_F_f = bvp_distance(F, f_mid, p);
    plan.dist_F1_f = bvp_distance(F1, f_mid, p);

    return LiftResult{std::move(F1), std::move(G1), std::move(plan)};
}

AuditReport audit_plan(const ApproxPlan& plan, const StepFunction& F, const StepFunction& G,
                       const StepFunction& F1, const StepFunction& G1, const PExponent& p,
                       double epsilon) {
    AuditReport report;
    auto fail = [&](const std::string& what) {
        report.pass = false;
        report.violations.push_back(what);
    };

    // Product preservation and nondegeneracy hold in every branch.
    {
        auto [pF, pG] = common_refinement(pointwise_combine(F, G, PointwiseOp::Multiply),
                                          pointwise_combine(F1, G1, PointwiseOp::Multiply));
        double worst = 0.0;
        for (std::size_t i = 0; i < pF.values().size(); ++i) {
            double rel = std::abs(pG.values()[i] - pF.values()[i]) /
                         (1.0 + std::abs(pF.values()[i]));
            worst = std::max(worst, rel);
        }
        report.product_residual = worst;
        if (worst > 1e-14) fail("product not preserved");
    }
    report.joint_margin = joint_margin(F1, G1);
    if (!(report.joint_margin > 0.0)) fail("lifted pair degenerate");

    report.dist_F = bvp_distance(F, F1, p);
    report.dist_G = bvp_distance(G, G1, p);
    if (!(report.dist_F < epsilon)) fail("dist(F, F1) >= epsilon");
    if (!(report.dist_G < epsilon)) fail("dist(G, G1) >= epsilon");

    report.margins.fill(kMarginInfinity);
    report.margin_bounds.fill(0.0);

    if (plan.zero_pair || plan.identity) {
        report.margins[0] = report.joint_margin;
        return report;
    }

    // Reconstruct the intermediate f (and g = G1) and recompute the
    // classification from scratch.
    auto [rF, rG] = common_refinement(F, G);
    const std::size_t m = rF.last_index();
    if (F1.last_index() != m) {
        fail("plan grid does not match the refined pair");
        return report;
    }
    std::vector<complexd> f_vals(F1.values());
    for (std::size_t idx : plan.j_eta_0_indices) f_vals[idx] = complexd(0.0, 0.0);
    StepFunction f_mid(F1.breakpoints(), f_vals, F1.field());

    std::vector<double> h(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
        h[i] = std::abs(f_vals[i]) + std::abs(G1.values()[i]);
    const double sup_h = *std::max_element(h.begin(), h.end());

    std::vector<bool> redefined(m + 1, false);
    for (const auto& stats : plan.a.intervals) {
        for (std::size_t j = stats.first_index; j <= stats.last_index; ++j) redefined[j] = true;
        if (stats.contains_one) redefined[m] = true;
    }
    AtomClassification cls =
        classify_atoms(h, plan.eta, exact_zero_tolerance(sup_h, plan.eta), redefined);
    report.margins = compute_margins(cls, joint_modulus(F1, G1), redefined);

    // The classes cover [0,1], so their minima must reproduce the plan and
    // recover the joint margin exactly.
    double class_min = kMarginInfinity;
    for (int j = 0; j < 6; ++j) {
        class_min = std::min(class_min, report.margins[j]);
        const bool plan_empty = plan.margins[j] == kMarginInfinity;
        const bool here_empty = report.margins[j] == kMarginInfinity;
        if (plan_empty != here_empty ||
            (!here_empty &&
             std::abs(report.margins[j] - plan.margins[j]) > 1e-12 * (1.0 + plan.margins[j])))
            fail("recomputed margins disagree with the plan");
    }
    if (std::abs(class_min - report.joint_margin) > 1e-12 * (1.0 + report.joint_margin))
        fail("margin classes do not cover the whole interval");

    const double n = static_cast<double>(plan.a.size());
    const double k = static_cast<double>(plan.k);
    report.margin_bounds[0] = plan.eta;
    report.margin_bounds[1] = plan.eta / 2.0;
    report.margin_bounds[2] = 0.0;  // finite minimum, only positivity is claimed
    report.margin_bounds[3] = plan.k > 0 ? epsilon / (24.0 * k) : 0.0;
    report.margin_bounds[4] = plan.rho;
    report.margin_bounds[5] = plan.a.empty() ? 0.0 : epsilon / (12.0 * n);
    const double slack = 1e-12;
    static const char* margin_names[6] = {"I1", "I2", "I3", "I4", "I5", "I6"};
    for (int j = 0; j < 6; ++j) {
        if (report.margins[j] == kMarginInfinity) continue;  // empty set
        if (report.margins[j] < report.margin_bounds[j] * (1.0 - slack))
            fail(std::string(margin_names[j]) + " below its bound");
        if (!(report.margins[j] > 0.0)) fail(std::string(margin_names[j]) + " not positive");
    }

    // Distance chain of the construction.
    report.dist_F_f = bvp_distance(F, f_mid, p);
    report.dist_F_f_bound = 7.0 * epsilon / 8.0;
    if (!(report.dist_F_f < report.dist_F_f_bound)) fail("dist(F, f) >= 7 eps / 8");
    report.dist_F1_f = bvp_distance(F1, f_mid, p);
    report.dist_F1_f_bound = plan.k > 0 ? (2.0 * k + 1.0) / (24.0 * k) * epsilon : 0.0;
    if (report.dist_F1_f > report.dist_F1_f_bound * (1.0 + slack))
        fail("dist(F1, f) above (2k+1)/(24k) eps");

    for (std::size_t i = 0; i < plan.c.size(); ++i) {
        if (plan.c[i] > epsilon / 24.0 * (1.0 + slack) ||
            plan.d[i] > epsilon / 24.0 * (1.0 + slack)) {
            fail("c_i or d_i above eps/24");
            break;
        }
        if (plan.c[i] < epsilon / (24.0 * n) || plan.d[i] < epsilon / (24.0 * n)) {
            fail("c_i or d_i below eps/(24n)");
            break;
        }
    }

    // Consecutive A0 intervals must be separated by a point with
    // |F|+|G| >= eta.
    std::vector<double> H(m + 1);
    for (std::size_t i = 0; i <= m; ++i)
        H[i] = std::abs(rF.values()[i]) + std::abs(rG.values()[i]);
    for (std::size_t u = 0; u + 1 < plan.a0.size(); ++u) {
        bool separated = false;
        for (std::size_t j = plan.a0.intervals[u].last_index + 1;
             j < plan.a0.intervals[u + 1].first_index; ++j)
            if (H[j] >= plan.eta) separated = true;
        if (!separated) {
            report.separation_ok = false;
            fail("A0 intervals not separated by a point with |F|+|G| >= eta");
        }
    }
    for (const auto& stats : plan.a0.intervals)
        if (!(stats.inf_h < plan.eta / 2.0)) fail("A0 interval with inf >= eta/2");

    return report;
}

}  // namespace pvar
