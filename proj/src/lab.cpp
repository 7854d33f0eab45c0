#include "dischull/lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dischull/fft.hpp"

namespace dischull {

namespace {

Pt2 polar2(double a) { return {std::cos(a), std::sin(a)}; }

// componentwise boundary FFT of C2 samples, truncated to non-negative modes
AnalyticDisc disc_from_boundary(const std::vector<C2>& vals, int keep, double radius,
                                double* residual) {
    std::vector<cplx> s1, s2;
    for (const auto& v : vals) {
        s1.push_back(v.w1);
        s2.push_back(v.w2);
    }
    auto c1 = fourier_coeffs(s1);
    auto c2 = fourier_coeffs(s2);
    std::vector<C2> coeffs;
    for (int k = 0; k < keep; ++k) coeffs.push_back({c1[k], c2[k]});
    AnalyticDisc d(coeffs, radius);
    if (residual) {
        double worst = 0.0;
        for (std::size_t j = 0; j < vals.size(); ++j) {
            cplx z = std::polar(1.0, 2 * M_PI * double(j) / double(vals.size()));
            worst = std::max(worst, (d.eval(z) - vals[j]).norm());
        }
        *residual = worst;
    }
    return d;
}

// circle-grid fiber extraction from a (possibly detoured) neuron boundary
std::vector<AnalyticDisc> circle_fibers(const Neuron& n, int n_grid) {
    std::vector<AnalyticDisc> out;
    for (std::size_t i = 0; i < n.halo.size(); ++i) {
        const Pt2& p = n.walk_points[i];
        if (std::abs(p.norm() - 1.0) > 1e-7) continue;
        std::size_t k = out.size();
        if (k < std::size_t(n_grid) &&
            dist(p, polar2(2 * M_PI * double(k) / double(n_grid - 1))) <= 1e-7)
            out.push_back(n.halo.discs[i]);
    }
    if (int(out.size()) != n_grid)
        throw std::runtime_error("circle_fibers: neuron not on the uniform grid");
    out.pop_back();  // drop the duplicate 2*pi sample
    return out;
}

}  // namespace

double ThroughPointResult::staged_error_sum() const {
    double s = 0.0;
    for (const auto& st : stages) s += st.error;
    return s;
}

ThroughPointResult run_through_point(const ModelDomain& G, const ThroughPointInput& in,
                                     const C2& target, double eps,
                                     const Tolerances& tol) {
    ThroughPointResult R;
    auto stage = [&](const std::string& name, double err, bool ok) {
        R.stages.push_back({name, err, ok});
        if (!ok) throw std::runtime_error("run_through_point: stage '" + name + "' failed");
    };

    // axon designation
    Neuron pre = make_preneuron(in.body, in.lift, in.n_samples);
    try {
        R.neuron = preneuron_to_neuron(pre, in.traces, G, tol);
        R.neuron.validate(G, tol);
    } catch (const std::exception&) {
        stage("preneuron_to_neuron", 0.0, false);
    }
    stage("preneuron_to_neuron", 0.0, true);

    // partial fattening of the attached trees (halving tau until feasible)
    std::vector<SubtreeSelection> sel;
    for (const auto& t : R.neuron.trees)
        sel.push_back({std::vector<bool>(t.dendrite.tree.num_vertices(), true)});
    try {
        R.region = fatten_region(R.neuron.trees, sel, in.tau);
    } catch (const std::invalid_argument&) {
        // learn the feasible cap from a thin probe, then stay just under it:
        // a thick fattening keeps the finger aspect (conformal crowding) low
        double cap = 0.0;
        try {
            cap = fatten_region(R.neuron.trees, sel, 1e-3).tau_max;
            R.region = fatten_region(R.neuron.trees, sel, 0.95 * cap);
        } catch (const std::exception&) {
            stage("fatten_region", cap, false);
        }
    }
    stage("fatten_region", R.region.tau, true);

    // polynomial approximation of body + tree halo centers on the fattening
    std::vector<std::pair<Pt2, C2>> tree_values;
    for (const auto& at : R.neuron.trees) {
        const Dendrite& d = at.dendrite;
        for (std::size_t i = 0; i < d.halo.size(); ++i)
            tree_values.push_back({d.tree.num_edges() > 0
                                       ? d.walk.point_at(d.tree, d.halo.params[i])
                                       : d.tree.pos[d.tree.root],
                                   d.halo.curve[i]});
    }
    R.fit = approximate_on_fattening(R.neuron.body, tree_values, R.region, eps / 8.0);
    stage("approximate_on_fattening", R.fit.sup_error,
          R.fit.tol_met || R.fit.sup_error < 0.5 * eps);

    const bool has_finger = !R.region.capsules.empty();
    if (has_finger) {
        // anchor the map opposite the first finger so its preimage arc
        // stays away from the angular wrap point
        double a_root = std::atan2(R.region.capsules.front().a.y,
                                   R.region.capsules.front().a.x);
        R.map = conformal_reparam(R.region, Pt2{-std::cos(a_root), -std::sin(a_root)},
                                  2e-2);
        stage("conformal_reparam", R.map.residual, R.map.ok);
    } else {
        stage("conformal_reparam", 0.0, true);
    }

    // Hartogs core over the reparametrized boundary
    const int n2 = in.n_samples;
    AnalyticDisc central;
    std::vector<AnalyticDisc> fibers;
    CircleArc gamma = in.gamma, gamma_o = in.gamma_o;
    double assembly_err = 0.0;
    if (!has_finger) {
        central = in.body;
        for (int j = 0; j < n2; ++j) {
            double th = 2 * M_PI * double(j) / double(n2);
            auto f = in.lift(th);
            C2 c = central.eval(std::polar(1.0, th));
            assembly_err = std::max(assembly_err, (f.coeffs[0] - c).norm());
            f.coeffs[0] = c;
            fibers.push_back(std::move(f));
        }
    } else {
        const int nf = 512;
        std::vector<C2> vals;
        std::vector<cplx> bdry;
        double b_lo = 1e300, b_hi = -1e300;
        for (int j = 0; j < nf; ++j) {
            double beta = 2 * M_PI * double(j) / double(nf);
            cplx w = R.map.eval(std::polar(1.0, beta));
            if (std::abs(w) > 1.0 + 0.5 * R.region.tau) {
                b_lo = std::min(b_lo, beta);
                b_hi = std::max(b_hi, beta);
            }
            bdry.push_back(w);
            vals.push_back(R.fit.eval(w));
        }
        if (b_lo <= b_hi) {
            // fit/squeeze arcs around the finger preimage
            double mid = 0.5 * (b_lo + b_hi), half = 0.5 * (b_hi - b_lo);
            gamma_o = {mid - half - 0.1, mid + half + 0.1};
            gamma = {mid - half - 0.8, mid + half + 0.8};
        }
        central = disc_from_boundary(vals, 192, 1.01, &assembly_err);
        // fiber per uniform angle: the circle part keeps the input lift, the
        // finger carries the dendrite halo by normalized distance from the root
        double ell = 1e-9;
        for (const auto& at : R.neuron.trees)
            for (const auto& p : at.dendrite.tree.pos)
                ell = std::max(ell, p.norm() - 1.0);
        for (int j = 0; j < n2; ++j) {
            cplx w = bdry[std::size_t(j) * nf / n2];
            double r = std::abs(w) - 1.0;
            AnalyticDisc f;
            if (r > 0.5 * R.region.tau && !R.neuron.trees.empty()) {
                double u = std::clamp(r / ell, 0.0, 1.0);
                f = R.neuron.trees.front().dendrite.halo.at(0.5 * u);
            } else {
                f = in.lift(std::arg(w) < 0 ? std::arg(w) + 2 * M_PI : std::arg(w));
            }
            C2 c = central.eval(std::polar(1.0, 2 * M_PI * double(j) / double(n2)));
            assembly_err = std::max(assembly_err, (f.coeffs[0] - c).norm());
            f.coeffs[0] = c;
            fibers.push_back(std::move(f));
        }
    }
    stage("core_assembly", assembly_err, assembly_err < eps);

    HartogsCoreData core = make_core(central, n2, fibers, gamma, gamma_o);

    // compact K: the parameter whose central value comes closest to the target
    cplx zeta_t = 0.0;
    double best = 1e300;
    for (int ir = 0; ir <= 19; ++ir)
        for (int ia = 0; ia < 64; ++ia) {
            cplx z = std::polar(0.05 * ir, 2 * M_PI * ia / 64.0);
            double dv = (central.eval(z) - target).norm();
            if (dv < best) {
                best = dv;
                zeta_t = z;
            }
        }
    R.rh = solve_rh(core, {zeta_t}, eps);
    double rh_err = 0.0;
    for (const auto& c : R.rh.clauses) rh_err = std::max(rh_err, c.worst);
    stage("solve_rh", rh_err, R.rh.ok);

    R.extraction = extract_g_disc(R.rh, in.fiber_z, G, tol);
    stage("extract_g_disc", R.extraction.fit_residual, R.extraction.ok);

    // translate through the target (C^2 branch) and re-check
    const AnalyticDisc& ex = R.extraction.disc;
    C2 nearest{};
    best = 1e300;
    for (int ir = 0; ir <= 20; ++ir)
        for (int ia = 0; ia < 256; ++ia) {
            C2 v = ex.eval(std::polar(0.05 * ir, 2 * M_PI * ia / 256.0));
            double dv = (v - target).norm();
            if (dv < best) {
                best = dv;
                nearest = v;
            }
        }
    R.translation = target - nearest;
    R.disc = ex;
    R.disc.coeffs[0] = R.disc.coeffs[0] + R.translation;
    auto rep = is_g_disc(R.disc, G, tol);
    R.boundary_margin = 1e300;
    for (int ia = 0; ia < 256; ++ia)
        R.boundary_margin = std::min(
            R.boundary_margin, G.margin(R.disc.eval(std::polar(1.0, 2 * M_PI * ia / 256.0))));
    R.target_distance = 1e300;
    for (int ir = 0; ir <= 20; ++ir)
        for (int ia = 0; ia < 256; ++ia)
            R.target_distance = std::min(
                R.target_distance,
                (R.disc.eval(std::polar(0.05 * ir, 2 * M_PI * ia / 256.0)) - target).norm());
    stage("translate", R.translation.norm(),
          rep.boundary_in_G && R.boundary_margin > 0.0 && R.target_distance < eps);
    R.ok = true;
    return R;
}

FamilyRunResult run_family_pipeline(const std::vector<double>& params,
                                    const std::vector<Neuron>& family,
                                    const FamilyRunInput& in, const ModelDomain& G,
                                    const Tolerances& tol) {
    FamilyRunResult R;
    auto stage = [&](const std::string& name, double err, bool ok) {
        R.stages.push_back({name, err, ok});
        if (!ok)
            throw std::runtime_error("run_family_pipeline: stage '" + name + "' failed");
    };

    SpliceResult sp = splice_family(params, family, in.splice_gamma, G, 32, tol);
    R.params = sp.params;
    R.neurons = sp.neurons;
    R.jumps_spliced = sp.attached.size();
    stage("splice_family", double(R.jumps_spliced),
          neuron_discontinuities(R.neurons).empty());

    double recenter_err = 0.0, rh_err = 0.0, extract_err = 0.0;
    for (const auto& n : R.neurons) {
        auto fibers = circle_fibers(n, in.n_angle);
        const int m = int(fibers.size());
        for (int j = 0; j < m; ++j) {
            C2 c = n.body.eval(std::polar(1.0, 2 * M_PI * double(j) / double(m)));
            recenter_err = std::max(recenter_err, (fibers[j].coeffs[0] - c).norm());
            fibers[j].coeffs[0] = c;
        }
        auto core = make_core(n.body, m, fibers, in.gamma, in.gamma_o);
        auto sol = solve_rh(core, in.K, in.eps);
        for (const auto& c : sol.clauses) rh_err = std::max(rh_err, c.worst);
        if (!sol.ok) stage("solve_rh", rh_err, false);
        auto ex = extract_g_disc(sol, in.fiber_z, G, tol);
        extract_err = std::max(extract_err, ex.fit_residual);
        if (!ex.ok) stage("extract_g_disc", extract_err, false);
        R.discs.push_back(ex.disc);
    }
    stage("core_assembly", recenter_err, recenter_err < 0.5 * in.eps);
    stage("solve_rh", rh_err, true);
    stage("extract_g_disc", extract_err, true);

    // discrete continuity of the output family
    std::vector<double> steps;
    for (std::size_t i = 0; i + 1 < R.discs.size(); ++i)
        steps.push_back(disc_distance(R.discs[i], R.discs[i + 1]));
    R.max_step = steps.empty() ? 0.0 : *std::max_element(steps.begin(), steps.end());
    std::vector<double> s = steps;
    double med = 0.0;
    if (!s.empty()) {
        std::nth_element(s.begin(), s.begin() + s.size() / 2, s.end());
        med = s[s.size() / 2];
    }
    R.delta_cont = 5.0 * (10.0 * med + 1e-12);
    R.continuous = R.max_step < R.delta_cont;

    R.f0_in_g = true;
    for (int ir = 0; ir <= 4 && R.f0_in_g; ++ir)
        for (int ia = 0; ia < 24; ++ia)
            if (!G.contains(R.discs.front().eval(std::polar(0.25 * ir, 2 * M_PI * ia / 24.0)))) {
                R.f0_in_g = false;
                break;
            }
    stage("continuity", R.max_step, R.continuous);
    R.ok = R.continuous && R.f0_in_g;
    return R;
}

FamilyRunResult run_family_pipeline(const FamilyRunInput& in, const ModelDomain& G,
                                    const Tolerances& tol) {
    NeuronFamily nf = build_pw_neuron_family(in.bodies, 0.5, in.lift, G, in.n_t,
                                             in.n_angle, tol);
    return run_family_pipeline(nf.params, nf.neurons, in, G, tol);
}

std::pair<int, int> winding_diagnostic(const std::vector<C2>& loop, WindingMode mode) {
    if (loop.size() < 3) throw std::invalid_argument("winding_diagnostic: too few samples");
    if ((loop.front() - loop.back()).norm() > 1e-9)
        throw std::invalid_argument("winding_diagnostic: loop not closed");
    auto turn = [](const std::vector<cplx>& zs) {
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < zs.size(); ++i) total += std::arg(zs[i + 1] / zs[i]);
        return int(std::lround(total / (2 * M_PI)));
    };
    if (mode == WindingMode::LogModulus) {
        std::vector<cplx> zs;
        for (const auto& w : loop) {
            double a1 = std::abs(w.w1), a2 = std::abs(w.w2);
            if (a1 <= 0.0 || a2 <= 0.0)
                throw std::invalid_argument("winding_diagnostic: zero modulus");
            cplx z{std::log(a1), std::log(a2)};
            if (std::abs(z) < 1e-9) {
                // constant-at-origin loops report 0; transversal hits reject
                bool constant = true;
                for (const auto& v : loop)
                    if ((v - loop.front()).norm() > 1e-9) constant = false;
                if (constant) return {0, 0};
                throw std::invalid_argument("winding_diagnostic: singular locus");
            }
            zs.push_back(z);
        }
        int n = turn(zs);
        return {n, n};
    }
    std::vector<cplx> z1, z2;
    for (const auto& w : loop) {
        if (std::abs(w.w1) < 1e-12 || std::abs(w.w2) < 1e-12)
            throw std::invalid_argument("winding_diagnostic: singular locus");
        z1.push_back(w.w1);
        z2.push_back(w.w2);
    }
    return {turn(z1), turn(z2)};
}

AnalyticDisc torus_disc(bool plus, int n_coeffs) {
    std::vector<C2> c(n_coeffs);
    cplx a{0.0, plus ? -1.0 : 1.0};  // exp of (z, a z)
    double fact = 1.0;
    cplx apow = 1.0;
    for (int k = 0; k < n_coeffs; ++k) {
        c[k] = {1.0 / fact, apow / fact};
        fact *= (k + 1.0);
        apow *= a;
    }
    return AnalyticDisc(c, 1.25);
}

}  // namespace dischull
