#include "kinreact/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "kinreact/errors.hpp"
#include "kinreact/reduce.hpp"

namespace kinreact {

TheoreticalConstants theoretical_constants(const DiscreteProfiles& profiles,
                                           const EquilibriumState& eq, double rho_m,
                                           double rho_M, double poincare) {
    TheoreticalConstants c;
    c.c1 = std::sqrt(std::max(profiles.d1, profiles.d2));
    c.c2 = std::sqrt(std::max(profiles.q1 - profiles.d1 * profiles.d1,
                              profiles.q2 - profiles.d2 * profiles.d2));
    c.c3 = std::sqrt(std::max(profiles.q1, profiles.q2));
    const double ratio = rho_m / rho_M;
    c.c_h = 0.5 * std::min(eq.rho1_star / rho_M, rho_m * eq.rho2_star);
    c.big_c_h = 0.5 * std::max(eq.rho1_star / rho_m, rho_M * eq.rho2_star);
    c.c4 = ratio * c.c_h;
    c.c5 = ratio;
    const double lo = std::min(rho_m, 1.0 / rho_M);
    c.c6 = ratio / (eq.rho1_star + eq.rho2_star) * lo * lo;
    c.c7 = poincare * std::sqrt(eq.rho1_star + eq.rho2_star);
    c.c8 = 2.0 * std::max(rho_M * rho_M * eq.rho2_star, eq.rho1_star / (rho_m * rho_m));
    c.poincare = poincare;
    return c;
}

double default_gamma_delta(const TheoreticalConstants& c) {
    return 0.5 * c.c_h / (c.c1 * c.poincare);
}

namespace {

/// f (log(f/fstar) - 1) + fstar, evaluated as f log1p(u/fstar) - u with
/// u = f - fstar: near equilibrium the summand is u^2/(2 fstar) and the
/// naive form loses it to cancellation.
inline double entropy_term(double f, double fstar) {
    const double u = f - fstar;
    return std::fma(f, std::log1p(u / fstar), -u);
}

} // namespace

double boltzmann_entropy(const DistributionPair& f, const EquilibriumState& eq,
                         const PhaseMesh& mesh) {
    for (double x : f.f1)
        if (!(x > 0.0)) throw NonPositiveState("f1 has a non-positive entry");
    for (double x : f.f2)
        if (!(x > 0.0)) throw NonPositiveState("f2 has a non-positive entry");

    const int n_v = mesh.n_v();
    const double h = mesh.dx * mesh.dv * reduce_rows(mesh.n_x, [&](int i) {
                         Accumulator acc;
                         for (int j = 0; j < n_v; ++j) {
                             const auto k = static_cast<std::size_t>(j);
                             acc.add(entropy_term(f.at1(i, j), eq.f1_star[k]));
                             acc.add(entropy_term(f.at2(i, j), eq.f2_star[k]));
                         }
                         return acc.value();
                     });
    return h;
}

double entropy_dissipation(const DistributionPair& f, const DiscreteProfiles& profiles,
                           const PhaseMesh& mesh) {
    for (double x : f.f1)
        if (!(x > 0.0)) throw NonPositiveState("f1 has a non-positive entry");
    for (double x : f.f2)
        if (!(x > 0.0)) throw NonPositiveState("f2 has a non-positive entry");

    const int n_v = mesh.n_v();
    const double w = mesh.dx * mesh.dv * mesh.dv;
    return w * reduce_rows(mesh.n_x, [&](int i) {
               Accumulator acc;
               for (int j = 0; j < n_v; ++j) {
                   const double f1 = f.at1(i, j);
                   const double c1 = profiles.chi1[static_cast<std::size_t>(j)];
                   for (int m = 0; m < n_v; ++m) {
                       const double b = f1 * f.at2(i, m);
                       const double a = c1 * profiles.chi2[static_cast<std::size_t>(m)];
                       const double d = b - a;
                       acc.add(d * std::log1p(d / a));
                   }
               }
               return acc.value();
           });
}

ModifiedEntropy modified_entropy(const DistributionPair& f,
                                 std::span<const double> prev_grad_phi1,
                                 std::span<const double> prev_grad_phi2,
                                 const EquilibriumState& eq, const DiscreteProfiles& profiles,
                                 const PhaseMesh& mesh, const PoissonSolver& poisson,
                                 double delta, double dt) {
    const MomentSet m = moments(f, profiles, mesh);
    SpatialPair rho_tilde;
    rho_tilde.c1.resize(m.rho1.size());
    rho_tilde.c2.resize(m.rho2.size());
    for (std::size_t i = 0; i < m.rho1.size(); ++i) {
        rho_tilde.c1[i] = m.rho1[i] - eq.rho1_star;
        rho_tilde.c2[i] = m.rho2[i] - eq.rho2_star;
    }
    const PoissonSolve phi = poisson.solve(rho_tilde);

    ModifiedEntropy out;
    out.grad_phi1 = grad_centered(phi.phi1, mesh.dx);
    out.grad_phi2 = grad_centered(phi.phi2, mesh.dx);

    out.cross_term = inner_macro(SpatialPair{m.j1, m.j2},
                                 SpatialPair{out.grad_phi1, out.grad_phi2}, eq, mesh);

    // Plain (unweighted) spatial sum over both components, exactly as the
    // functional is written; the previous potential defaults to the current
    // one so the term starts at zero.
    Accumulator incr;
    if (!prev_grad_phi1.empty()) {
        for (std::size_t i = 0; i < out.grad_phi1.size(); ++i) {
            const double d1 = out.grad_phi1[i] - prev_grad_phi1[i];
            const double d2 = out.grad_phi2[i] - prev_grad_phi2[i];
            incr.add(d1 * d1);
            incr.add(d2 * d2);
        }
    }
    out.increment_term = delta / (2.0 * dt) * mesh.dx * incr.value();

    const double h = boltzmann_entropy(f, eq, mesh);
    out.gamma = h + delta * out.cross_term + out.increment_term;
    return out;
}

namespace {

DistributionPair difference(const DistributionPair& a, const DistributionPair& b) {
    DistributionPair d = a;
    for (std::size_t k = 0; k < d.f1.size(); ++k) d.f1[k] -= b.f1[k];
    for (std::size_t k = 0; k < d.f2.size(); ++k) d.f2[k] -= b.f2[k];
    return d;
}

} // namespace

std::vector<InequalityCheck> check_step_inequalities(const StepCheckInput& in,
                                                     const TheoreticalConstants& consts,
                                                     const SchemeParams& params,
                                                     const EquilibriumState& eq,
                                                     const DiscreteProfiles& profiles,
                                                     const PhaseMesh& mesh) {
    std::vector<InequalityCheck> checks;
    const double dt = params.dt;
    const double eps = 1e-9 * std::max(1.0, std::abs(in.entropy_np1));

    const DistributionPair dev_np1 = deviation(*in.f_np1, eq);
    const DistributionPair pi_dev = project_pi(dev_np1, profiles, mesh);
    const DistributionPair ortho = difference(dev_np1, pi_dev);
    const double norm_ortho = norm_micro(ortho, eq, mesh);
    const double norm_pi = norm_micro(pi_dev, eq, mesh);
    const double norm_dev = norm_micro(dev_np1, eq, mesh);

    const MomentSet mom_n = moments(*in.f_n, profiles, mesh);
    const MomentSet mom_np1 = moments(*in.f_np1, profiles, mesh);

    std::vector<double> defect(static_cast<std::size_t>(mesh.n_x));
    for (std::size_t i = 0; i < defect.size(); ++i)
        defect[i] = 1.0 - mom_np1.rho1[i] * mom_np1.rho2[i];
    const double reaction_defect = l2_torus(defect, mesh);

    // (a) entropy decay with the time-discretization dissipation term
    {
        const DistributionPair incr = difference(*in.f_np1, *in.f_n);
        const double incr_sq = inner_micro(incr, incr, eq, mesh);
        const double lhs = (in.entropy_np1 - in.entropy_n) / dt;
        const double rhs = -in.dissipation_np1 - consts.c4 / dt * incr_sq;
        checks.push_back({"entropy_decay", lhs <= rhs + eps, rhs + eps - lhs});
    }

    // (b) dissipation lower bound
    {
        const double rhs = consts.c5 * reaction_defect * reaction_defect +
                           consts.c6 * norm_ortho * norm_ortho;
        checks.push_back({"dissipation_bound", in.dissipation_np1 >= rhs - eps,
                          in.dissipation_np1 - rhs + eps});
    }

    // (c) moment-scheme residuals: exact identities of the converged step,
    // so the residual is pure solver error.
    {
        const double threshold = 10.0 * params.picard_tol / dt;
        auto resid_rho = [&](const std::vector<double>& rho_n, const std::vector<double>& rho_np1,
                             const std::vector<double>& j_np1, const std::vector<double>& js_np1) {
            const std::vector<double> dcj = grad_centered(j_np1, mesh.dx);
            const std::vector<double> ljs = laplace_3pt(js_np1, mesh.dx);
            double worst = 0.0;
            for (std::size_t i = 0; i < rho_n.size(); ++i) {
                const double r = (rho_np1[i] - rho_n[i]) / dt + dcj[i] -
                                 0.5 * mesh.dx * ljs[i] -
                                 (1.0 - mom_np1.rho1[i] * mom_np1.rho2[i]);
                worst = std::max(worst, std::abs(r));
            }
            return worst;
        };
        auto resid_j = [&](const std::vector<double>& j_n, const std::vector<double>& j_np1,
                           const std::vector<double>& s_np1, const std::vector<double>& rho_np1,
                           const std::vector<double>& ss_np1,
                           const std::vector<double>& rho_other_np1, double d_k) {
            const std::vector<double> dcs = grad_centered(s_np1, mesh.dx);
            const std::vector<double> dcr = grad_centered(rho_np1, mesh.dx);
            const std::vector<double> lss = laplace_3pt(ss_np1, mesh.dx);
            double worst = 0.0;
            for (std::size_t i = 0; i < j_n.size(); ++i) {
                const double r = (j_np1[i] - j_n[i]) / dt + dcs[i] + d_k * dcr[i] -
                                 0.5 * mesh.dx * lss[i] + rho_other_np1[i] * j_np1[i];
                worst = std::max(worst, std::abs(r));
            }
            return worst;
        };
        const double worst_rho =
            std::max(resid_rho(mom_n.rho1, mom_np1.rho1, mom_np1.j1, mom_np1.js1),
                     resid_rho(mom_n.rho2, mom_np1.rho2, mom_np1.j2, mom_np1.js2));
        const double worst_j =
            std::max(resid_j(mom_n.j1, mom_np1.j1, mom_np1.s1, mom_np1.rho1, mom_np1.ss1,
                             mom_np1.rho2, profiles.d1),
                     resid_j(mom_n.j2, mom_np1.j2, mom_np1.s2, mom_np1.rho2, mom_np1.ss2,
                             mom_np1.rho1, profiles.d2));
        checks.push_back({"moment_residual_rho", worst_rho <= threshold, threshold - worst_rho});
        checks.push_back({"moment_residual_j", worst_j <= threshold, threshold - worst_j});
    }

    // (d) potential estimates
    if (!in.grad_phi1_np1.empty()) {
        const SpatialPair gphi{std::vector<double>(in.grad_phi1_np1.begin(), in.grad_phi1_np1.end()),
                               std::vector<double>(in.grad_phi2_np1.begin(), in.grad_phi2_np1.end())};
        const double lhs1 = norm_macro(gphi, eq, mesh);
        const double rhs1 = consts.poincare * norm_pi;
        checks.push_back({"potential_bound", lhs1 <= rhs1 + eps, rhs1 + eps - lhs1});

        if (!in.grad_phi1_n.empty()) {
            SpatialPair dphi;
            dphi.c1.resize(in.grad_phi1_np1.size());
            dphi.c2.resize(in.grad_phi2_np1.size());
            for (std::size_t i = 0; i < dphi.c1.size(); ++i) {
                dphi.c1[i] = in.grad_phi1_np1[i] - in.grad_phi1_n[i];
                dphi.c2[i] = in.grad_phi2_np1[i] - in.grad_phi2_n[i];
            }
            const double lhs2 = norm_macro(dphi, eq, mesh);
            const double rhs2 = dt * (consts.c1 * norm_ortho + consts.c7 * reaction_defect +
                                      consts.c1 * norm_dev);
            checks.push_back({"potential_increment", lhs2 <= rhs2 + eps, rhs2 + eps - lhs2});
        }
    }

    return checks;
}

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> value,
                        std::size_t first, std::size_t last) {
    if (last > t.size() || first >= last || last - first < 5)
        throw WindowTooShort("decay fit needs at least 5 points");
    const std::size_t n = last - first;

    std::vector<double> logs(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double y = value[first + k];
        if (!(y > 0.0)) throw NonPositiveSeries("series value is not positive in fit window");
        logs[k] = std::log(y);
    }

    Accumulator st, sy;
    for (std::size_t k = 0; k < n; ++k) {
        st.add(t[first + k]);
        sy.add(logs[k]);
    }
    const double mean_t = st.value() / static_cast<double>(n);
    const double mean_y = sy.value() / static_cast<double>(n);

    Accumulator stt, sty;
    for (std::size_t k = 0; k < n; ++k) {
        const double dt_ = t[first + k] - mean_t;
        stt.add(dt_ * dt_);
        sty.add(dt_ * (logs[k] - mean_y));
    }
    const double slope = stt.value() > 0.0 ? sty.value() / stt.value() : 0.0;
    const double intercept = mean_y - slope * mean_t;

    Accumulator ss_res, ss_tot;
    for (std::size_t k = 0; k < n; ++k) {
        const double fitted = intercept + slope * t[first + k];
        ss_res.add((logs[k] - fitted) * (logs[k] - fitted));
        ss_tot.add((logs[k] - mean_y) * (logs[k] - mean_y));
    }

    DecayFit fit;
    fit.kappa = -slope;
    fit.prefactor = std::exp(intercept);
    fit.r_squared = ss_tot.value() > 0.0 ? 1.0 - ss_res.value() / ss_tot.value() : 1.0;
    return fit;
}

} // namespace kinreact
