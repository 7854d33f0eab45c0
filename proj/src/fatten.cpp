#include "dischull/fatten.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dischull {

namespace {

// quadratic smooth min with blend radius k
double smin(double a, double b, double k) {
    double h = std::max(k - std::abs(a - b), 0.0);
    return std::min(a, b) - h * h / (4.0 * k);
}

Pt2 grad_sdf(const FattenedRegion& r, const Pt2& p) {
    const double e = 1e-7;
    double gx = (r.sdf({p.x + e, p.y}) - r.sdf({p.x - e, p.y})) / (2 * e);
    double gy = (r.sdf({p.x, p.y + e}) - r.sdf({p.x, p.y - e})) / (2 * e);
    return {gx, gy};
}

Pt2 project_to_boundary(const FattenedRegion& r, Pt2 p) {
    for (int it = 0; it < 8; ++it) {
        double f = r.sdf(p);
        Pt2 g = grad_sdf(r, p);
        double g2 = g.dot(g);
        if (g2 < 1e-18) break;
        p = p - g * (f / g2);
        if (std::abs(r.sdf(p)) < 1e-13) break;
    }
    return p;
}

}  // namespace

double FattenedRegion::sdf(const Pt2& p) const {
    double f = p.norm() - 1.0;
    for (const auto& s : capsules) {
        double d = point_segment_dist(p, s.a, s.b) - tau;
        f = rounding > 0.0 ? smin(f, d, rounding) : std::min(f, d);
    }
    return f;
}

int FattenedRegion::boundary_winding() const {
    double total = 0.0;
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        const Pt2& a = boundary[i];
        const Pt2& b = boundary[(i + 1) % boundary.size()];
        total += std::atan2(a.cross(b), a.dot(b));
    }
    return int(std::lround(total / (2 * M_PI)));
}

FattenedRegion fatten_region(const std::vector<AttachedTree>& trees,
                             const std::vector<SubtreeSelection>& sel, double tau) {
    if (sel.size() != trees.size())
        throw std::invalid_argument("fatten_region: one selection per tree");
    FattenedRegion out;

    // collect kept edges (validated root-path-closed via cut_subtrees) and
    // residual samples
    struct Edge {
        Pt2 a, b;
        bool leaf_end;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<Pt2>> edges_per_tree(trees.size());
    for (std::size_t i = 0; i < trees.size(); ++i) {
        const auto& tr = trees[i].dendrite.tree;
        if (!tr.has_embedding())
            throw std::invalid_argument("fatten_region: tree not embedded");
        auto cut = cut_subtrees(tr, sel[i]);  // validates the selection
        for (int v = 0; v < tr.num_vertices(); ++v) {
            if (v == tr.root || !sel[i].kept[v]) continue;
            bool leaf_end = true;
            for (int c : tr.children[v])
                if (sel[i].kept[c]) leaf_end = false;
            edges.push_back({tr.pos[tr.parent[v]], tr.pos[v], leaf_end});
            edges_per_tree[i].push_back(tr.pos[tr.parent[v]]);
            edges_per_tree[i].push_back(tr.pos[v]);
            if (leaf_end) out.kept_leaves.push_back(tr.pos[v]);
        }
        for (int v = 0; v < tr.num_vertices(); ++v) {
            if (v == tr.root || sel[i].kept[v]) continue;
            Pt2 a = tr.pos[tr.parent[v]], b = tr.pos[v];
            out.residual_samples.push_back(b);
            out.residual_samples.push_back(a + (b - a) * 0.5);
            if (!sel[i].kept[tr.parent[v]])
                out.residual_samples.push_back(a + (b - a) * 0.1);
        }
    }

    // clearance: between different trees, and from edge interiors to the disc
    double clearance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < trees.size(); ++i)
        for (std::size_t j = i + 1; j < trees.size(); ++j)
            for (std::size_t ea = 0; ea + 1 < edges_per_tree[i].size(); ea += 2)
                for (std::size_t eb = 0; eb + 1 < edges_per_tree[j].size(); eb += 2)
                    clearance = std::min(
                        clearance,
                        segment_segment_dist(edges_per_tree[i][ea], edges_per_tree[i][ea + 1],
                                             edges_per_tree[j][eb], edges_per_tree[j][eb + 1]));
    double min_len = std::numeric_limits<double>::infinity();
    for (const auto& e : edges) {
        min_len = std::min(min_len, dist(e.a, e.b));
        // edge interiors should clear the disc except near the attachment
        for (int q = 4; q <= 16; ++q) {
            Pt2 p = e.a + (e.b - e.a) * (q / 16.0);
            double d = p.norm() - 1.0;
            if (d > 1e-9) clearance = std::min(clearance, 4.0 * d);  // soft weight
        }
    }
    out.tau_max = std::min(clearance / 4.0, 0.45 * min_len);
    if (edges.empty()) out.tau_max = std::numeric_limits<double>::infinity();
    if (!(tau > 0.0) || tau > out.tau_max)
        throw std::invalid_argument("fatten_region: tau out of range, feasible max = " +
                                    std::to_string(out.tau_max));
    out.tau = tau;
    out.rounding = tau / 4.0;

    // leaf-shortened capsules: the cap arc passes through the leaf exactly
    for (const auto& e : edges) {
        Pt2 b = e.b;
        if (e.leaf_end) {
            Pt2 d = e.b - e.a;
            double len = d.norm();
            b = e.b - d * (tau / len);
        }
        out.capsules.push_back({e.a, b});
    }

    // residual parts must stay strictly outside
    for (const auto& p : out.residual_samples)
        if (out.sdf(p) <= 0.0)
            throw std::invalid_argument("fatten_region: residual tree meets the region");

    // trace the boundary from a circle point away from all capsules
    double best = -1.0, theta0 = 0.0;
    for (int a = 0; a < 720; ++a) {
        double th = 2 * M_PI * a / 720;
        Pt2 p{std::cos(th), std::sin(th)};
        double d = std::numeric_limits<double>::infinity();
        for (const auto& s : out.capsules)
            d = std::min(d, point_segment_dist(p, s.a, s.b));
        if (d > best) {
            best = d;
            theta0 = th;
        }
    }
    double step = std::clamp(tau / 8.0, 0.004, 0.04);
    Pt2 start = project_to_boundary(out, {std::cos(theta0), std::sin(theta0)});
    Pt2 p = start;
    out.boundary.push_back(p);
    for (int it = 0; it < 200000; ++it) {
        Pt2 g = grad_sdf(out, p);
        double gn = g.norm();
        if (gn < 1e-12) throw std::runtime_error("fatten_region: flat gradient on trace");
        Pt2 tdir{-g.y / gn, g.x / gn};  // ccw
        p = project_to_boundary(out, p + tdir * step);
        if (it > 10 && dist(p, start) < 0.75 * step) break;
        out.boundary.push_back(p);
        if (it == 199999)
            throw std::runtime_error("fatten_region: boundary trace did not close");
    }
    return out;
}

C2 FitResult::eval(cplx z) const {
    cplx zs = z / scale;
    C2 acc;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * zs + coeffs[k];
    return acc;
}

FitResult approximate_on_fattening(const AnalyticDisc& body,
                                   const std::vector<std::pair<Pt2, C2>>& tree_values,
                                   const FattenedRegion& region, double eps,
                                   int degree_cap) {
    // dense samples of nu_S: the closed disc plus the supplied tree values
    std::vector<cplx> zs;
    std::vector<C2> vals;
    for (int j = 0; j < 128; ++j) {
        cplx z = std::polar(1.0, 2 * M_PI * j / 128);
        zs.push_back(z);
        vals.push_back(body.eval(z));
    }
    for (int i = 1; i <= 7; ++i)
        for (int j = 0; j < 32; ++j) {
            cplx z = std::polar(i / 8.0, 2 * M_PI * j / 32);
            zs.push_back(z);
            vals.push_back(body.eval(z));
        }
    zs.push_back(0.0);
    vals.push_back(body.eval(0.0));
    for (const auto& [p, v] : tree_values) {
        zs.push_back({p.x, p.y});
        vals.push_back(v);
    }

    double scale = 1.0;
    for (cplx z : zs) scale = std::max(scale, std::abs(z));

    FitResult best;
    best.sup_error = std::numeric_limits<double>::infinity();
    for (int deg : {8, 16, 32, degree_cap}) {
        if (deg > degree_cap) break;
        const int m = int(zs.size()), n = deg + 1;
        Eigen::MatrixXcd A(m, n);
        Eigen::VectorXcd b1(m), b2(m);
        for (int i = 0; i < m; ++i) {
            cplx z = zs[i] / scale, pw = 1.0;
            for (int k = 0; k < n; ++k) {
                A(i, k) = pw;
                pw *= z;
            }
            b1(i) = vals[i].w1;
            b2(i) = vals[i].w2;
        }
        auto qr = A.colPivHouseholderQr();
        Eigen::VectorXcd c1 = qr.solve(b1), c2 = qr.solve(b2);
        FitResult fit;
        fit.scale = scale;
        fit.degree = deg;
        fit.coeffs.resize(n);
        for (int k = 0; k < n; ++k) fit.coeffs[k] = {c1(k), c2(k)};
        fit.sup_error = 0.0;
        for (int i = 0; i < m; ++i)
            fit.sup_error = std::max(fit.sup_error, (fit.eval(zs[i]) - vals[i]).norm());
        if (fit.sup_error < best.sup_error) best = fit;
        if (best.sup_error <= eps) break;
        if (deg == degree_cap) break;
    }
    best.tol_met = best.sup_error <= eps;
    return best;
}

Halo transport_halo(const Halo& h, const std::vector<C2>& new_centers) {
    if (new_centers.size() != h.size())
        throw std::invalid_argument("transport_halo: center count mismatch");
    Halo out = h;
    for (std::size_t i = 0; i < h.size(); ++i) {
        C2 shift = new_centers[i] - h.discs[i].center();
        out.discs[i].coeffs[0] = out.discs[i].coeffs[0] + shift;
        out.curve[i] = out.discs[i].center();
    }
    return out;
}

double ConformalMap::param_of_angle(double alpha) const {
    // invert theta(t) = alpha: table bracket, then spectral Newton
    const int N = int(theta_p.size());
    const double dt = 2 * M_PI / N;
    alpha = std::fmod(alpha, 2 * M_PI);
    if (alpha < 0.0) alpha += 2 * M_PI;
    auto it = std::upper_bound(theta_t.begin(), theta_t.end(), alpha);
    int j = std::max(0, int(it - theta_t.begin()) - 1);
    double h = theta_t[j + 1] - theta_t[j];
    double t = dt * (j + (h > 0 ? (alpha - theta_t[j]) / h : 0.0));
    auto theta_of = [&](double s) {
        cplx acc = 0.0;
        for (int k = 1; k < N / 2; ++k) {
            cplx ik(0.0, double(k));
            acc += tpc[k] / ik * (std::exp(ik * s) - 1.0);
            acc += tpc[N - k] / (-ik) * (std::exp(-ik * s) - 1.0);
        }
        return tpc[0].real() * s + acc.real();
    };
    for (int nit = 0; nit < 4; ++nit) {
        double d = fourier_eval(tpc, t).real();
        if (d <= 0.0) break;
        t -= (theta_of(t) - alpha) / d;
    }
    return t;
}

namespace {

// linear jet of psi at the boundary point nearest in angle to xi
struct BoundaryJet {
    cplx zstar, wstar, slope;
};

BoundaryJet boundary_jet(const ConformalMap& m, cplx xi) {
    double t = m.param_of_angle(std::arg(xi));
    cplx wstar = fourier_eval(m.wc, t);
    std::vector<cplx> wpc(m.wc.size());
    int n = int(m.wc.size());
    for (int k = 0; k < n / 2; ++k) {
        wpc[k] = m.wc[k] * cplx(0.0, double(k));
        if (k > 0) wpc[n - k] = m.wc[n - k] * cplx(0.0, -double(k));
    }
    cplx wp_t = fourier_eval(wpc, t);
    double tp = fourier_eval(m.tpc, t).real();
    cplx zstar = std::polar(1.0, std::arg(xi));
    return {zstar, wstar, wp_t / (cplx(0.0, 1.0) * zstar * tp)};
}

}  // namespace

cplx ConformalMap::eval(cplx zeta) const {
    if (theta_p.empty()) {  // fall back to the series form
        cplx z = zeta * rotation, acc = 0.0;
        for (std::size_t k = taylor.size(); k-- > 0;) acc = acc * z + taylor[k];
        return acc;
    }
    const int N = int(theta_p.size());
    cplx xi = zeta * rotation;
    auto jet = boundary_jet(*this, xi);
    if (std::abs(xi) >= 1.0 - 1e-9) return jet.wstar;
    // Cauchy integral over z(t) = e^{i theta(t)} with the linear jet at the
    // nearest boundary angle subtracted (quadrature stays smooth near xi)
    cplx acc = 0.0;
    for (int j = 0; j < N; ++j) {
        cplx z = std::polar(1.0, theta_t[j]);
        cplx L = jet.wstar + jet.slope * (z - jet.zstar);
        acc += (boundary[j] - L) * z * theta_p[j] / (z - xi);
    }
    return jet.wstar + jet.slope * (xi - jet.zstar) + acc / double(N);
}

cplx ConformalMap::deriv(cplx zeta) const {
    if (theta_p.empty()) {
        cplx z = zeta * rotation, acc = 0.0;
        for (std::size_t k = taylor.size(); k-- > 1;) acc = acc * z + taylor[k] * double(k);
        return acc * rotation;
    }
    const int N = int(theta_p.size());
    cplx xi = zeta * rotation;
    auto jet = boundary_jet(*this, xi);
    if (std::abs(xi) >= 1.0 - 1e-9) return jet.slope * rotation;
    cplx acc = 0.0;
    for (int j = 0; j < N; ++j) {
        cplx z = std::polar(1.0, theta_t[j]);
        cplx L = jet.wstar + jet.slope * (z - jet.zstar);
        cplx d = z - xi;
        acc += (boundary[j] - L) * z * theta_p[j] / (d * d);
    }
    return (jet.slope + acc / double(N)) * rotation;
}

cplx ConformalMap::inverse(cplx w) const {
    // seed from the nearest boundary sample; fall back to a linear guess
    cplx zeta;
    double bestd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < boundary.size(); j += 4) {
        double d = std::abs(boundary[j] - w);
        if (d < bestd) {
            bestd = d;
            zeta = std::polar(1.0, angle[j]);
        }
    }
    if (taylor.size() > 1 && std::abs(taylor[1]) > 1e-12) {
        cplx lin = (w - taylor[0]) / (taylor[1] * rotation);
        if (std::abs(lin) < 0.9) zeta = lin;
    }
    for (int it = 0; it < 60; ++it) {
        cplx f = eval(zeta) - w;
        cplx d = deriv(zeta);
        if (std::abs(d) < 1e-14) break;
        cplx nz = zeta - f / d;
        if (std::abs(nz) > 1.2) nz *= 1.0 / std::abs(nz);
        if (std::abs(nz - zeta) < 1e-14) {
            zeta = nz;
            break;
        }
        zeta = nz;
    }
    return zeta;
}

namespace {

// periodic 4-point Lagrange interpolation on an index grid
cplx lagrange4(const std::vector<cplx>& v, double x) {
    int n = int(v.size());
    double fl = std::floor(x);
    int j = int(fl);
    double u = x - fl;
    auto at = [&](int i) { return v[((j + i) % n + n) % n]; };
    double w0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
    double w1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    double w2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
    double w3 = (u + 1.0) * u * (u - 1.0) / 6.0;
    return at(-1) * w0 + at(0) * w1 + at(1) * w2 + at(2) * w3;
}

}  // namespace

ConformalMap conformal_reparam(const std::vector<cplx>& boundary_pts, long designated,
                               double tol_cr) {
    const int N = 512;
    if (boundary_pts.size() < 16)
        throw std::invalid_argument("conformal_reparam: too few boundary points");

    // resample to N nodes (index parametrization)
    std::vector<cplx> w(N);
    double ratio = double(boundary_pts.size()) / N;
    for (int j = 0; j < N; ++j) w[j] = lagrange4(boundary_pts, j * ratio);
    long des = -1;
    if (designated >= 0) des = std::lround(double(designated) / ratio) % N;

    // fourth-order periodic derivative w.r.t. t = 2 pi j / N
    const double dt = 2 * M_PI / N;
    std::vector<cplx> wp(N);
    for (int j = 0; j < N; ++j) {
        auto at = [&](int i) { return w[((j + i) % N + N) % N]; };
        wp[j] = (8.0 * (at(1) - at(-1)) - (at(2) - at(-2))) / (12.0 * dt);
    }

    // interior base point: polygon centroid
    cplx a = 0.0;
    {
        double area = 0.0;
        cplx c = 0.0;
        for (int j = 0; j < N; ++j) {
            cplx p = w[j], q = w[(j + 1) % N];
            double cr = p.real() * q.imag() - q.real() * p.imag();
            area += cr;
            c += (p + q) * cr;
        }
        a = c / (3.0 * area);
    }

    // Kerzman-Stein integral equation for the Szego kernel
    const cplx I(0.0, 1.0);
    auto H = [&](int t, int s) {  // Cauchy kernel, target t, source s
        cplx T = wp[s] / std::abs(wp[s]);
        return T / (w[s] - w[t]) / (2.0 * M_PI * I);
    };
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(N, N);
    for (int t = 0; t < N; ++t)
        for (int s = 0; s < N; ++s) {
            if (s == t) continue;
            cplx A = std::conj(H(s, t)) - H(t, s);
            M(t, s) += A * std::abs(wp[s]) * dt;
        }
    Eigen::VectorXcd rhs(N);
    for (int t = 0; t < N; ++t) {
        cplx T = wp[t] / std::abs(wp[t]);
        rhs(t) = std::conj(T / (w[t] - a) / (2.0 * M_PI * I));
    }
    Eigen::VectorXcd S = M.partialPivLu().solve(rhs);

    double Saa = 0.0;  // S(a,a) = int |S|^2 |dw|
    for (int j = 0; j < N; ++j) Saa += std::norm(S(j)) * std::abs(wp[j]) * dt;

    // boundary correspondence: theta' = 2 pi |S|^2 |w'| / S(a,a),
    // integrated spectrally (mean term linear, oscillatory modes by 1/(ik))
    std::vector<double> theta(N + 1, 0.0);
    double theta_total = 2 * M_PI;
    {
        std::vector<cplx> tp(N);
        for (int j = 0; j < N; ++j)
            tp[j] = 2 * M_PI * std::norm(S(j)) * std::abs(wp[j]) / Saa;
        auto tc = fourier_coeffs(tp);
        double mean = tc[0].real();
        for (int j = 0; j <= N; ++j) {
            double t = dt * j;
            cplx acc = 0.0;
            for (int k = 1; k < N / 2; ++k) {
                cplx ik(0.0, double(k));
                acc += tc[k] / ik * (std::exp(ik * t) - 1.0);
                acc += tc[N - k] / (-ik) * (std::exp(-ik * t) - 1.0);
            }
            theta[j] = mean * t + acc.real();
        }
        theta_total = theta[N];
        for (int j = 0; j <= N; ++j) theta[j] *= 2 * M_PI / theta_total;  // exact period
    }

    // spectral forms of theta(t) and w(t) for accurate inversion
    std::vector<cplx> tp(N);
    for (int j = 0; j < N; ++j)
        tp[j] = 2 * M_PI * std::norm(S(j)) * std::abs(wp[j]) / Saa * (2 * M_PI / theta_total);
    auto tpc = fourier_coeffs(tp);
    auto wc = fourier_coeffs(w);
    auto theta_of = [&](double t) {
        cplx acc = 0.0;
        for (int k = 1; k < N / 2; ++k) {
            cplx ik(0.0, double(k));
            acc += tpc[k] / ik * (std::exp(ik * t) - 1.0);
            acc += tpc[N - k] / (-ik) * (std::exp(-ik * t) - 1.0);
        }
        return tpc[0].real() * t + acc.real();
    };
    auto thetap_of = [&](double t) { return fourier_eval(tpc, t).real(); };

    // resample phi on a uniform circle grid and take Fourier coefficients
    std::vector<cplx> u(N);
    for (int m = 0; m < N; ++m) {
        double th = 2 * M_PI * m / N;
        auto it = std::upper_bound(theta.begin(), theta.end(), th);
        int j = std::max(0, int(it - theta.begin()) - 1);
        double h = theta[j + 1] - theta[j];
        double t = dt * (j + (h > 0 ? (th - theta[j]) / h : 0.0));
        for (int nit = 0; nit < 4; ++nit) {
            double d = thetap_of(t);
            if (d <= 0.0) break;
            t -= (theta_of(t) - th) / d;
        }
        u[m] = fourier_eval(wc, t);
    }
    auto coeffs = fourier_coeffs(u);

    ConformalMap out;
    out.center = a;
    out.boundary = w;
    out.wc = wc;
    out.tpc = tpc;
    out.theta_t = theta;
    out.theta_p.resize(N);
    for (int j = 0; j < N; ++j) out.theta_p[j] = tp[j].real();
    out.angle.resize(N);
    out.phi_prime_abs.resize(N);
    for (int j = 0; j < N; ++j) {
        out.angle[j] = theta[j];
        out.phi_prime_abs[j] = Saa / (2 * M_PI * std::norm(S(j)));
    }
    double neg_mass = 0.0;
    out.taylor.assign(coeffs.begin(), coeffs.begin() + N / 2);
    for (int k = N / 2; k < N; ++k) neg_mass = std::max(neg_mass, std::abs(coeffs[k]));

    if (des >= 0) {
        out.rotation = std::polar(1.0, theta[des]);
        for (int j = 0; j < N; ++j) {
            out.angle[j] -= theta[des];
            if (out.angle[j] < 0.0) out.angle[j] += 2 * M_PI;
        }
    } else if (std::abs(out.taylor.size() > 1 ? out.taylor[1] : cplx(0)) > 0.0) {
        cplx c1 = out.taylor[1];
        out.rotation = std::conj(c1) / std::abs(c1);
        double alpha = std::arg(out.rotation);
        for (int j = 0; j < N; ++j) {
            out.angle[j] -= alpha;
            out.angle[j] = std::fmod(out.angle[j] + 4 * M_PI, 2 * M_PI);
        }
    }

    double bnd_err = 0.0;
    for (int j = 0; j < N; j += 3)
        bnd_err = std::max(bnd_err, std::abs(out.eval(std::polar(1.0, out.angle[j])) - w[j]));
    // analyticity cross-check: Cauchy evaluation vs the Taylor series at
    // radius 1/2, where the truncated series is reliable even under crowding
    double mid_err = 0.0;
    for (int m = 0; m < 64; ++m) {
        cplx zeta = std::polar(0.5, 2 * M_PI * m / 64);
        cplx z = zeta * out.rotation, acc = 0.0;
        for (std::size_t k = out.taylor.size(); k-- > 0;) acc = acc * z + out.taylor[k];
        mid_err = std::max(mid_err, std::abs(out.eval(zeta) - acc));
    }
    out.residual = std::max(bnd_err, mid_err);
    out.ok = out.residual <= tol_cr;
    return out;
}

ConformalMap conformal_reparam(const FattenedRegion& region,
                               std::optional<Pt2> designated, double tol_cr) {
    std::vector<cplx> pts;
    for (const auto& p : region.boundary) pts.push_back({p.x, p.y});
    long des = -1;
    if (designated) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < region.boundary.size(); ++j) {
            double d = dist(region.boundary[j], *designated);
            if (d < best) {
                best = d;
                des = long(j);
            }
        }
    }
    return conformal_reparam(pts, des, tol_cr);
}

}  // namespace dischull
