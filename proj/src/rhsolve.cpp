#include "dischull/rhsolve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dischull {

namespace {

double wrap_angle(double t) {
    t = std::fmod(t, 2 * M_PI);
    return t < 0.0 ? t + 2 * M_PI : t;
}

std::size_t pow2_at_least(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

double CircleArc::length() const {
    double l = wrap_angle(b - a);
    return l == 0.0 ? 0.0 : l;
}

bool CircleArc::contains(double theta) const {
    return wrap_angle(theta - a) <= length() + 1e-15;
}

bool CircleArc::strictly_inside(const CircleArc& outer) const {
    double off = wrap_angle(a - outer.a);
    return off > 1e-12 && off + length() < outer.length() - 1e-12;
}

void HartogsCoreData::validate(const Tolerances& tol) const {
    if (angles.size() != fibers.size() || angles.size() != small_in_g.size())
        throw std::invalid_argument("core: sample arrays disagree in size");
    if (fibers.empty()) throw std::invalid_argument("core: no fibers");
    for (std::size_t j = 0; j < fibers.size(); ++j) {
        C2 c = central.eval(std::polar(1.0, angles[j]));
        if ((fibers[j].center() - c).norm() > tol.tol_center)
            throw std::invalid_argument("core: fiber center off the central disc");
    }
    if (!gamma_o.strictly_inside(gamma))
        throw std::invalid_argument("core: gamma_o closure not inside gamma");
    for (std::size_t j = 0; j < angles.size(); ++j)
        if (gamma.contains(angles[j]) && !small_in_g[j])
            throw std::invalid_argument("core: fiber over gamma not flagged small");
}

HartogsCoreData make_core(const AnalyticDisc& central, int n_samples,
                          const std::vector<AnalyticDisc>& fibers, CircleArc gamma,
                          CircleArc gamma_o) {
    if (int(fibers.size()) != n_samples)
        throw std::invalid_argument("make_core: one fiber per sample");
    HartogsCoreData d;
    d.central = central;
    d.gamma = gamma;
    d.gamma_o = gamma_o;
    for (int j = 0; j < n_samples; ++j) {
        double th = 2 * M_PI * j / n_samples;
        d.angles.push_back(th);
        d.fibers.push_back(fibers[j]);
        d.small_in_g.push_back(gamma.contains(th));
    }
    d.validate();
    return d;
}

FiberCoeffs taylor_coeffs(const HartogsCoreData& data, int k_max) {
    FiberCoeffs out;
    out.k_max = k_max;
    std::size_t n = pow2_at_least(std::max<std::size_t>(64, 2 * std::size_t(k_max)));
    for (const auto& f : data.fibers) {
        std::vector<cplx> s1(n), s2(n);
        for (std::size_t m = 0; m < n; ++m) {
            C2 v = f.eval(std::polar(1.0, 2 * M_PI * m / n));
            s1[m] = v.w1;
            s2[m] = v.w2;
        }
        auto c1 = fourier_coeffs(s1);
        auto c2 = fourier_coeffs(s2);
        std::vector<C2> a(k_max + 1);
        for (int k = 0; k <= k_max; ++k) a[k] = {c1[k], c2[k]};
        // truncated reconstruction residual on the sample circle
        for (std::size_t m = 0; m < n; m += 4) {
            cplx z = std::polar(1.0, 2 * M_PI * m / n);
            C2 acc;
            for (int k = k_max; k >= 0; --k) acc = acc * z + a[k];
            out.residual = std::max(out.residual, (acc - f.eval(z)).norm());
        }
        out.a.push_back(std::move(a));
    }
    return out;
}

C2 TruncatedData::eval(std::size_t j, cplx z) const {
    C2 acc;
    for (int k = N; k >= 0; --k) acc = acc * z + damped[j][k];
    return acc;
}

TruncatedData truncate_damp(const HartogsCoreData& data, const FiberCoeffs& coeffs,
                            double r, int N) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("truncate_damp: need 0 < r < 1");
    TruncatedData out;
    out.r = r;
    out.N = std::min(N, coeffs.k_max);
    for (const auto& a : coeffs.a) {
        std::vector<C2> d(out.N + 1);
        double rk = 1.0;
        for (int k = 0; k <= out.N; ++k) {
            d[k] = a[k] * rk;
            rk *= r;
        }
        out.damped.push_back(std::move(d));
    }
    // sup error vs the fibers on (bd D minus gamma_o) x closed fiber disc;
    // the difference is holomorphic in z, so the sup sits on |z| = 1
    for (std::size_t j = 0; j < data.size(); ++j) {
        if (data.gamma_o.contains(data.angles[j])) continue;
        for (int m = 0; m < 64; ++m) {
            cplx z = std::polar(1.0, 2 * M_PI * m / 64);
            out.sup_error =
                std::max(out.sup_error, (out.eval(j, z) - data.fibers[j].eval(z)).norm());
        }
    }
    return out;
}

C2 CoeffExtension::eval_k(int k, cplx zeta) const {
    if (k < 1 || k >= int(poly.size()) || poly[k].empty()) return {};
    C2 acc;
    for (std::size_t m = poly[k].size(); m-- > 0;) acc = acc * zeta + poly[k][m];
    return acc;
}

CoeffExtension holo_coeff_ext(const std::vector<cplx>& zetas,
                              const std::vector<std::vector<C2>>& a_k_samples,
                              int degree) {
    if (zetas.empty()) throw std::invalid_argument("holo_coeff_ext: no samples");
    const int m = int(zetas.size());
    const int cols = degree + 1;
    Eigen::MatrixXcd V(m, cols);
    for (int i = 0; i < m; ++i) {
        cplx p = 1.0;
        for (int c = 0; c < cols; ++c) {
            V(i, c) = p;
            p *= zetas[i];
        }
    }
    auto qr = V.colPivHouseholderQr();

    CoeffExtension out;
    out.poly.resize(a_k_samples.size());
    for (std::size_t k = 1; k < a_k_samples.size(); ++k) {
        if (int(a_k_samples[k].size()) != m)
            throw std::invalid_argument("holo_coeff_ext: ragged sample array");
        Eigen::MatrixXcd rhs(m, 2);
        for (int i = 0; i < m; ++i) {
            rhs(i, 0) = a_k_samples[k][i].w1;
            rhs(i, 1) = a_k_samples[k][i].w2;
        }
        Eigen::MatrixXcd x = qr.solve(rhs);
        out.poly[k].resize(cols);
        for (int c = 0; c < cols; ++c) out.poly[k][c] = {x(c, 0), x(c, 1)};
        for (int i = 0; i < m; ++i)
            out.arc_error = std::max(
                out.arc_error, (out.eval_k(int(k), zetas[i]) - a_k_samples[k][i]).norm());
    }
    return out;
}

cplx OuterFunction::eval(cplx zeta) const {
    cplx acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * zeta + coeffs[k];
    return acc;
}

OuterFunction outer_function(const std::vector<double>& rho_samples, int n_fft) {
    if (!is_pow2(n_fft)) throw std::invalid_argument("outer_function: n_fft not a power of two");
    if (rho_samples.empty()) throw std::invalid_argument("outer_function: empty profile");
    for (double v : rho_samples)
        if (!(v > 0.0)) throw std::invalid_argument("outer_function: rho must be positive");

    OuterFunction out;
    out.rho.resize(n_fft);
    if (int(rho_samples.size()) == n_fft) {
        out.rho = rho_samples;
    } else {  // periodic linear resampling
        std::size_t m = rho_samples.size();
        for (int j = 0; j < n_fft; ++j) {
            double x = double(j) * m / n_fft;
            std::size_t i = std::size_t(x) % m;
            double u = x - std::floor(x);
            out.rho[j] = (1.0 - u) * rho_samples[i] + u * rho_samples[(i + 1) % m];
        }
    }

    std::vector<cplx> logr(n_fft);
    for (int j = 0; j < n_fft; ++j) logr[j] = std::log(out.rho[j]);
    auto c = fourier_coeffs(logr);
    double total = 0.0, tail = 0.0;
    for (int k = 0; k < n_fft; ++k) {
        int mode = k <= n_fft / 2 ? k : n_fft - k;
        total += std::abs(c[k]);
        if (mode > n_fft / 4) tail += std::abs(c[k]);
    }
    out.fourier_tail = total > 0.0 ? tail / total : 0.0;

    // analytic completion P = c_0 + 2 sum_{k>=1} c_k zeta^k, g = exp(P)
    std::vector<cplx> P(n_fft / 2);
    P[0] = c[0].real();
    for (int k = 1; k < n_fft / 2; ++k) P[k] = 2.0 * c[k];
    std::vector<cplx> gb(n_fft);
    for (int j = 0; j < n_fft; ++j) {
        cplx zeta = std::polar(1.0, 2 * M_PI * j / n_fft);
        cplx acc = 0.0;
        for (std::size_t k = P.size(); k-- > 0;) acc = acc * zeta + P[k];
        gb[j] = std::exp(acc);
    }
    auto gc = fourier_coeffs(gb);
    out.coeffs.assign(gc.begin(), gc.begin() + n_fft / 2);

    for (int j = 0; j < n_fft; ++j) {
        double th = 2 * M_PI * j / n_fft;
        out.modulus_residual = std::max(
            out.modulus_residual, std::abs(std::abs(out.eval(std::polar(1.0, th))) - out.rho[j]));
    }
    out.min_abs = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            cplx zeta = std::polar(i / 63.0, 2 * M_PI * j / 64);
            out.min_abs = std::min(out.min_abs, std::abs(out.eval(zeta)));
        }
    return out;
}

C2 RHSolution::eval(cplx zeta, cplx z) const {
    C2 acc;
    cplx zg = r * g.eval(zeta) * z;
    for (int k = N; k >= 1; --k) acc = acc * zg + ext.eval_k(k, zeta);
    return central.eval(zeta) + acc * zg;
}

namespace {

// C-infinity step: 0 at x <= 0, 1 at x >= 1
double smooth_step(double x) {
    auto f = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    return f(x) / (f(x) + f(1.0 - x));
}

// profile: 1 off gamma, rho_min on gamma_o, smooth in the transition bands
std::vector<double> rho_profile(const CircleArc& gamma, const CircleArc& gamma_o,
                                double rho_min, int n_fft) {
    std::vector<double> rho(n_fft, 1.0);
    double lg = gamma.length();
    double off_o = wrap_angle(gamma_o.a - gamma.a), lo = gamma_o.length();
    for (int j = 0; j < n_fft; ++j) {
        double th = 2 * M_PI * j / n_fft;
        if (!gamma.contains(th)) continue;
        double x = wrap_angle(th - gamma.a);
        double s;
        if (x < off_o)
            s = smooth_step(x / off_o);
        else if (x <= off_o + lo)
            s = 1.0;
        else
            s = smooth_step((lg - x) / (lg - off_o - lo));
        rho[j] = std::exp(s * std::log(rho_min));
    }
    return rho;
}

}  // namespace

RHSolution solve_rh(const HartogsCoreData& data, const std::vector<cplx>& K,
                    double eps, double r, int N, int fit_degree, int n_fft) {
    data.validate();
    for (cplx p : K)
        if (std::abs(p) >= 1.0 - 1e-9 && !data.gamma_o.contains(std::arg(p)))
            throw std::invalid_argument("solve_rh: K touches the boundary off gamma_o");

    auto coeffs = taylor_coeffs(data, N);
    auto trunc = truncate_damp(data, coeffs, r, N);

    // arc samples: boundary minus gamma_o
    std::vector<cplx> zetas;
    std::vector<std::size_t> arc_idx;
    for (std::size_t j = 0; j < data.size(); ++j) {
        if (data.gamma_o.contains(data.angles[j])) continue;
        zetas.push_back(std::polar(1.0, data.angles[j]));
        arc_idx.push_back(j);
    }
    std::vector<std::vector<C2>> a_k(N + 1, std::vector<C2>(zetas.size()));
    for (std::size_t i = 0; i < arc_idx.size(); ++i)
        for (int k = 0; k <= trunc.N; ++k) a_k[k][i] = coeffs.a[arc_idx[i]][k];
    auto ext = holo_coeff_ext(zetas, a_k, fit_degree);

    RHSolution sol;
    sol.central = data.central;
    sol.ext = ext;
    sol.r = r;
    sol.N = trunc.N;
    sol.eps = eps;

    // clause (3): lower the profile depth geometrically until the whole
    // fiber over every K point collapses into the eps-ball around the center
    double rho_min = 1e-2;
    for (int attempt = 0; attempt < 12; ++attempt) {
        sol.g = outer_function(rho_profile(data.gamma, data.gamma_o, rho_min, n_fft), n_fft);
        sol.rho_min = rho_min;
        auto& c3 = sol.clauses[2];
        c3 = {};
        c3.clause = "whole-fiber squeeze over K";
        c3.passed = true;
        for (std::size_t i = 0; i < K.size(); ++i) {
            C2 base = sol.central.eval(K[i]);
            for (int m = 0; m < 64; ++m) {
                double d = (sol.eval(K[i], std::polar(1.0, 2 * M_PI * m / 64)) - base).norm();
                if (d > c3.worst) {
                    c3.worst = d;
                    c3.worst_index = i;
                }
            }
        }
        c3.passed = K.empty() || c3.worst < eps;
        if (c3.passed) break;
        rho_min *= 0.1;
    }

    auto& c1 = sol.clauses[0];
    c1.clause = "center values preserved";
    for (std::size_t j = 0; j < data.size(); ++j) {
        double d = (sol.eval(std::polar(1.0, data.angles[j]), 0.0) -
                    sol.central.eval(std::polar(1.0, data.angles[j])))
                       .norm();
        if (d > c1.worst) {
            c1.worst = d;
            c1.worst_index = j;
        }
    }
    c1.passed = c1.worst < 1e-9;

    // clause (2): boundary-torus image near the Q_Gamma image cloud
    auto& c2 = sol.clauses[1];
    c2.clause = "boundary image near Q_Gamma image";
    std::vector<C2> cloud;
    for (std::size_t j = 0; j < data.size(); ++j) {
        for (int m = 0; m < 32; ++m)
            cloud.push_back(data.fibers[j].eval(std::polar(1.0, 2 * M_PI * m / 32)));
        if (data.gamma.contains(data.angles[j]))
            for (int i = 0; i <= 4; ++i)
                for (int m = 0; m < 16; ++m)
                    cloud.push_back(data.fibers[j].eval(std::polar(i / 4.0, 2 * M_PI * m / 16)));
    }
    std::size_t stride = std::max<std::size_t>(1, data.size() / 64);
    for (std::size_t j = 0; j < data.size(); j += stride) {
        cplx zeta = std::polar(1.0, data.angles[j]);
        for (int m = 0; m < 16; ++m) {
            C2 v = sol.eval(zeta, std::polar(1.0, 2 * M_PI * m / 16));
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : cloud) best = std::min(best, (v - q).norm());
            if (best > c2.worst) {
                c2.worst = best;
                c2.worst_index = j;
            }
        }
    }
    c2.passed = c2.worst < eps;

    sol.ok = c1.passed && c2.passed && sol.clauses[2].passed;
    return sol;
}

GDiscExtraction extract_g_disc(const RHSolution& H, cplx z, const ModelDomain& G,
                               const Tolerances& tol) {
    GDiscExtraction out;
    const int n = 512, keep = 128;
    auto fit_member = [&](cplx zz) {
        std::vector<cplx> s1(n), s2(n);
        for (int m = 0; m < n; ++m) {
            C2 v = H.eval(std::polar(1.0, 2 * M_PI * m / n), zz);
            s1[m] = v.w1;
            s2[m] = v.w2;
        }
        auto c1 = fourier_coeffs(s1);
        auto c2 = fourier_coeffs(s2);
        std::vector<C2> c(keep + 1);
        for (int k = 0; k <= keep; ++k) c[k] = {c1[k], c2[k]};
        AnalyticDisc d(c, 1.05);
        for (int k = keep + 1; k < n; ++k)
            out.fit_residual =
                std::max(out.fit_residual, std::abs(c1[k]) + std::abs(c2[k]));
        for (int m = 0; m < n; m += 7) {
            cplx zeta = std::polar(1.0, 2 * M_PI * m / n);
            out.fit_residual =
                std::max(out.fit_residual, (d.eval(zeta) - H.eval(zeta, zz)).norm());
        }
        return d;
    };

    out.homotopy.params.push_back(0.0);
    out.homotopy.discs.push_back(H.central);
    for (int i = 1; i <= 16; ++i) {
        double t = i / 16.0;
        out.homotopy.params.push_back(t);
        out.homotopy.discs.push_back(fit_member(t * z));
    }

    auto pr = perturb_to_immersion({{0.0}, {out.homotopy.discs.back()}}, tol.tol_imm, 8, 1e-4);
    out.disc = pr.family.discs[0];
    out.report = is_g_disc(out.disc, G, tol);
    out.boundary_margin = out.report.margin;
    out.ok = pr.success && out.report.ok();
    return out;
}

}  // namespace dischull
